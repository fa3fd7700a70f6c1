#include "halo/policy.hpp"

#include <algorithm>
#include <cmath>

#include "halo/queueing.hpp"

namespace halo {

namespace {

const char* const kPolicyNames[] = {"rnd",      "rr",      "wrr",     "pod_base",
                                    "pod_jsqr", "halo_rnd", "halo_rr", "halo_pod"};

// Quantize probabilities to integers summing exactly to `denominator`;
// rounding drift lands on the largest-weight server.
std::vector<std::int64_t> quantize_weights(const std::vector<double>& weights,
                                           std::uint32_t denominator) {
  std::vector<std::int64_t> q(weights.size());
  std::int64_t sum = 0;
  std::size_t largest = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    q[i] = std::llround(weights[i] * static_cast<double>(denominator));
    sum += q[i];
    if (weights[i] > weights[largest]) largest = i;
  }
  q[largest] += static_cast<std::int64_t>(denominator) - sum;
  if (q[largest] < 0) throw std::invalid_argument("quantization too coarse for weights");
  return q;
}

}  // namespace

bool is_valid_policy_name(const std::string& name) {
  return std::find(std::begin(kPolicyNames), std::end(kPolicyNames), name) !=
         std::end(kPolicyNames);
}

bool policy_has_known_split(const std::string& name) {
  return name == "rnd" || name == "rr" || name == "wrr" || name == "halo_rnd" ||
         name == "halo_rr";
}

Dispatcher::Dispatcher(PolicyConfig config, std::size_t num_servers, std::uint64_t seed)
    : config_(std::move(config)), num_servers_(num_servers), rng_(seed) {
  if (num_servers_ == 0) throw std::invalid_argument("dispatcher needs servers");
  switch (config_.kind) {
    case PolicyKind::kPod:
    case PolicyKind::kHaloPod:
      if (config_.d < 1 || config_.d > num_servers_) {
        throw std::invalid_argument("d must lie in [1, server count]");
      }
      break;
    case PolicyKind::kWeightedRr:
    case PolicyKind::kHaloRr:
      wrr_weights_ = quantize_weights(config_.weights, config_.quantization);
      wrr_scores_.assign(num_servers_, 0);
      wrr_total_ = static_cast<std::int64_t>(config_.quantization);
      break;
    default:
      break;
  }
  if (!config_.weights.empty() && config_.weights.size() != num_servers_) {
    throw std::invalid_argument("weight vector length must equal server count");
  }
}

std::size_t Dispatcher::dispatch_wrr() {
  // Smooth WRR: add each weight to its score, pick the max score (ties to
  // the lowest index), subtract the total from the winner.
  std::size_t best = num_servers_;
  std::int64_t best_score = 0;
  for (std::size_t i = 0; i < num_servers_; ++i) {
    if (wrr_weights_[i] == 0) continue;
    wrr_scores_[i] += wrr_weights_[i];
    if (best == num_servers_ || wrr_scores_[i] > best_score) {
      best = i;
      best_score = wrr_scores_[i];
    }
  }
  if (best == num_servers_) throw NoEligibleServerError();
  wrr_scores_[best] -= wrr_total_;
  return best;
}

std::size_t Dispatcher::dispatch_pod(const QueueView& view) {
  // Draw d distinct candidates, then fewest jobs in service; ties break
  // uniformly at random among the tied candidates.
  std::vector<std::size_t> candidates;
  candidates.reserve(config_.d);
  if (config_.kind == PolicyKind::kHaloPod) {
    // Weighted sampling without replacement; zero-weight servers are
    // never drawn. Fewer than d positive-weight servers means they all
    // become candidates.
    std::vector<double> remaining = config_.weights;
    std::size_t positive = 0;
    for (double w : remaining) {
      if (w > 0.0) ++positive;
    }
    if (positive == 0) throw NoEligibleServerError();
    const std::size_t draws = std::min(config_.d, positive);
    for (std::size_t k = 0; k < draws; ++k) {
      const std::size_t pick = rng_.weighted_index(remaining);
      candidates.push_back(pick);
      remaining[pick] = 0.0;
    }
  } else {
    // Partial Fisher-Yates over server indices.
    std::vector<std::size_t> pool(num_servers_);
    for (std::size_t i = 0; i < num_servers_; ++i) pool[i] = i;
    for (std::size_t k = 0; k < config_.d; ++k) {
      const std::size_t j = k + static_cast<std::size_t>(rng_.uniform_below(num_servers_ - k));
      std::swap(pool[k], pool[j]);
      candidates.push_back(pool[k]);
    }
  }
  std::uint32_t fewest = view.jobs_in_service[candidates[0]];
  for (std::size_t c : candidates) fewest = std::min(fewest, view.jobs_in_service[c]);
  std::vector<std::size_t> tied;
  for (std::size_t c : candidates) {
    if (view.jobs_in_service[c] == fewest) tied.push_back(c);
  }
  if (tied.size() == 1) return tied[0];
  return tied[rng_.uniform_below(tied.size())];
}

std::size_t Dispatcher::dispatch(const QueueView& view) {
  if (view.jobs_in_service.size() != num_servers_) {
    throw std::invalid_argument("queue view length must equal server count");
  }
  switch (config_.kind) {
    case PolicyKind::kRnd:
    case PolicyKind::kHaloRnd: {
      bool any = false;
      for (double w : config_.weights) {
        if (w > 0.0) any = true;
      }
      if (!any) throw NoEligibleServerError();
      return rng_.weighted_index(config_.weights);
    }
    case PolicyKind::kRr: {
      const std::size_t pick = rr_cursor_;
      rr_cursor_ = (rr_cursor_ + 1) % num_servers_;
      return pick;
    }
    case PolicyKind::kWeightedRr:
    case PolicyKind::kHaloRr:
      return dispatch_wrr();
    case PolicyKind::kPod:
    case PolicyKind::kHaloPod:
      return dispatch_pod(view);
  }
  throw std::logic_error("unreachable");
}

std::vector<double> Dispatcher::wrr_sequence_fractions(std::size_t steps) const {
  if (config_.kind != PolicyKind::kWeightedRr && config_.kind != PolicyKind::kHaloRr) {
    throw std::invalid_argument("sequence fractions apply to smooth-WRR kinds only");
  }
  if (steps == 0) throw std::invalid_argument("steps must be positive");
  Dispatcher copy(config_, num_servers_, 0);
  QueueView view{std::vector<std::uint32_t>(num_servers_, 0)};
  std::vector<double> counts(num_servers_, 0.0);
  for (std::size_t s = 0; s < steps; ++s) counts[copy.dispatch(view)] += 1.0;
  for (double& c : counts) c /= static_cast<double>(steps);
  return counts;
}

Dispatcher build_policy(const std::string& name, const ClusterSpec& cluster,
                        const ArrivalRate& rate, std::uint64_t seed) {
  if (!is_valid_policy_name(name)) {
    throw std::invalid_argument("unknown policy: " + name);
  }
  const std::size_t servers = cluster.total_servers();
  PolicyConfig config;

  const auto uniform = [&] {
    return std::vector<double>(servers, 1.0 / static_cast<double>(servers));
  };
  const auto halo_weights = [&] {
    return per_server_weights(cluster, optimal_split(cluster, rate).split);
  };
  const auto capacity_weights = [&] {
    return per_server_weights(cluster, proportional_split(cluster));
  };

  if (name == "rnd") {
    config.kind = PolicyKind::kRnd;
    config.weights = uniform();
  } else if (name == "rr") {
    config.kind = PolicyKind::kRr;
  } else if (name == "wrr") {
    config.kind = PolicyKind::kWeightedRr;
    config.weights = capacity_weights();
  } else if (name == "pod_base") {
    config.kind = PolicyKind::kPod;
    config.d = 2;
  } else if (name == "pod_jsqr") {
    config.kind = PolicyKind::kPod;
    config.d = servers;
  } else if (name == "halo_rnd") {
    config.kind = PolicyKind::kHaloRnd;
    config.weights = halo_weights();
  } else if (name == "halo_rr") {
    config.kind = PolicyKind::kHaloRr;
    config.weights = halo_weights();
  } else {  // halo_pod
    config.kind = PolicyKind::kHaloPod;
    config.d = 2;
    config.weights = halo_weights();
  }
  if (config.d > servers) config.d = servers;
  return Dispatcher(std::move(config), servers, seed);
}

}  // namespace halo
