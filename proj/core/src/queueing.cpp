#include "halo/queueing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace halo {

namespace {
constexpr double kSplitSumTolerance = 1e-9;
}

ClusterSpec::ClusterSpec(std::vector<GroupSpec> groups) : groups_(std::move(groups)) {
  if (groups_.empty()) {
    throw std::invalid_argument("cluster needs at least one group");
  }
  for (const auto& g : groups_) {
    if (g.count < 1) throw std::invalid_argument("group count must be >= 1");
    if (!(g.speed > 0.0) || !std::isfinite(g.speed)) {
      throw std::invalid_argument("group speed must be positive and finite");
    }
  }
}

std::size_t ClusterSpec::total_servers() const {
  std::size_t n = 0;
  for (const auto& g : groups_) n += g.count;
  return n;
}

double ClusterSpec::total_capacity() const {
  double c = 0.0;
  for (const auto& g : groups_) c += static_cast<double>(g.count) * g.speed;
  return c;
}

LoadSplit::LoadSplit(std::vector<double> probabilities) : probs_(std::move(probabilities)) {
  if (probs_.empty()) throw std::invalid_argument("empty load split");
  double sum = 0.0;
  for (double p : probs_) {
    if (!(p >= 0.0) || p > 1.0) {
      throw std::invalid_argument("split entries must lie in [0, 1]");
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > kSplitSumTolerance) {
    throw std::invalid_argument("split entries must sum to 1");
  }
}

ArrivalRate::ArrivalRate(double l) : lambda(l) {
  if (!(l >= 0.0) || !std::isfinite(l)) {
    throw std::invalid_argument("arrival rate must be >= 0 and finite");
  }
}

double utilization(const ClusterSpec& cluster, const ArrivalRate& rate) {
  return rate.lambda / cluster.total_capacity();
}

double mean_response_time(const ClusterSpec& cluster, const ArrivalRate& rate,
                          const LoadSplit& split) {
  const auto& groups = cluster.groups();
  if (split.size() != groups.size()) {
    throw std::invalid_argument("split length does not match group count");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < groups.size(); ++i) {
    const double p = split[i];
    if (p == 0.0) continue;
    const double per_server = rate.lambda * p / static_cast<double>(groups[i].count);
    if (per_server >= groups[i].speed) throw UnstableError(i);
    total += p / (groups[i].speed - per_server);
  }
  return total;
}

LoadSplit proportional_split(const ClusterSpec& cluster) {
  const double cap = cluster.total_capacity();
  std::vector<double> p;
  p.reserve(cluster.num_groups());
  for (const auto& g : cluster.groups()) {
    p.push_back(static_cast<double>(g.count) * g.speed / cap);
  }
  return LoadSplit(std::move(p));
}

double closed_form_optimal_T(const ClusterSpec& cluster, const ArrivalRate& rate) {
  const auto& groups = cluster.groups();
  const double lambda = rate.lambda;
  if (lambda >= cluster.total_capacity()) throw OverloadedError();
  if (lambda <= 0.0) throw DegenerateRateError();

  const auto thresholds = activation_thresholds(cluster);
  for (std::size_t i = 0; i < thresholds.size(); ++i) {
    if (lambda < thresholds[i]) throw OutsideValidityRegionError(i);
  }

  double cross = 0.0;       // sum_{i<j} k_i k_j sqrt(mu_i mu_j)
  double mixed = 0.0;       // sum_i k_i mu_i sum_{j != i} k_j
  double total_k = 0.0;
  double total_cap = 0.0;
  for (const auto& g : groups) {
    total_k += static_cast<double>(g.count);
    total_cap += static_cast<double>(g.count) * g.speed;
  }
  for (std::size_t i = 0; i < groups.size(); ++i) {
    const double ki = static_cast<double>(groups[i].count);
    mixed += ki * groups[i].speed * (total_k - ki);
    for (std::size_t j = i + 1; j < groups.size(); ++j) {
      const double kj = static_cast<double>(groups[j].count);
      cross += ki * kj * std::sqrt(groups[i].speed * groups[j].speed);
    }
  }
  const double numerator = 2.0 * cross - mixed + lambda * total_k;
  const double denominator = lambda * (total_cap - lambda);
  return numerator / denominator;
}

namespace {

// Group indices sorted by decreasing speed, stable on input order.
std::vector<std::size_t> speed_order(const ClusterSpec& cluster) {
  std::vector<std::size_t> order(cluster.num_groups());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return cluster.groups()[a].speed > cluster.groups()[b].speed;
  });
  return order;
}

}  // namespace

std::vector<double> activation_thresholds(const ClusterSpec& cluster) {
  const auto& groups = cluster.groups();
  const auto order = speed_order(cluster);

  std::vector<double> thresholds(groups.size(), 0.0);
  double cap_prefix = 0.0;    // sum k_j mu_j over faster-or-equal prefix
  double sqrt_prefix = 0.0;   // sum k_j sqrt(mu_j) over the same prefix
  for (std::size_t m = 0; m < order.size(); ++m) {
    const auto& g = groups[order[m]];
    const double k = static_cast<double>(g.count);
    cap_prefix += k * g.speed;
    sqrt_prefix += k * std::sqrt(g.speed);
    const double threshold = cap_prefix - std::sqrt(g.speed) * sqrt_prefix;
    thresholds[order[m]] = std::max(0.0, threshold);
  }
  return thresholds;
}

SplitSolution optimal_split(const ClusterSpec& cluster, const ArrivalRate& rate) {
  const auto& groups = cluster.groups();
  const double lambda = rate.lambda;
  if (lambda == 0.0) throw DegenerateRateError();
  if (lambda >= cluster.total_capacity()) throw OverloadedError();

  const auto order = speed_order(cluster);
  const auto thresholds = activation_thresholds(cluster);

  // Active set: the prefix (in decreasing-speed order) of groups whose
  // activation threshold lies strictly below lambda. Thresholds are
  // non-decreasing along the prefix, so this is a clean cut.
  std::vector<std::size_t> active;
  double cap_active = 0.0;
  double sqrt_active = 0.0;
  for (std::size_t m = 0; m < order.size(); ++m) {
    const std::size_t idx = order[m];
    if (m > 0 && thresholds[idx] >= lambda) break;
    active.push_back(idx);
    cap_active += static_cast<double>(groups[idx].count) * groups[idx].speed;
    sqrt_active += static_cast<double>(groups[idx].count) * std::sqrt(groups[idx].speed);
  }

  // Square-root rule inside the active set:
  //   lambda_i = mu_i - sqrt(mu_i) * (sum_A k mu - lambda) / (sum_A k sqrt(mu))
  const double slack = (cap_active - lambda) / sqrt_active;
  std::vector<double> probs(groups.size(), 0.0);
  for (std::size_t idx : active) {
    const double per_server = groups[idx].speed - std::sqrt(groups[idx].speed) * slack;
    probs[idx] = static_cast<double>(groups[idx].count) * per_server / lambda;
  }
  // Kill tiny negative rounding residue and renormalize exactly.
  double sum = 0.0;
  for (double& p : probs) {
    if (p < 0.0) p = 0.0;
    sum += p;
  }
  for (double& p : probs) p /= sum;

  std::vector<std::size_t> active_sorted;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] > 0.0) active_sorted.push_back(i);
  }
  LoadSplit split(probs);
  const double t = mean_response_time(cluster, rate, split);
  return SplitSolution{std::move(split), t, std::move(active_sorted)};
}

std::vector<double> per_server_weights(const ClusterSpec& cluster, const LoadSplit& split) {
  const auto& groups = cluster.groups();
  if (split.size() != groups.size()) {
    throw std::invalid_argument("split length does not match group count");
  }
  std::vector<double> weights;
  weights.reserve(cluster.total_servers());
  for (std::size_t i = 0; i < groups.size(); ++i) {
    const double w = split[i] / static_cast<double>(groups[i].count);
    for (std::size_t j = 0; j < groups[i].count; ++j) weights.push_back(w);
  }
  return weights;
}

}  // namespace halo
