#include "halo/oracle.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace halo {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Objective evaluated directly from the per-group M/G/1/PS terms; +inf on
// infeasible (saturating) points so the search can skip them.
double objective(const ClusterSpec& cluster, double lambda, const std::vector<double>& p) {
  const auto& groups = cluster.groups();
  double total = 0.0;
  for (std::size_t i = 0; i < groups.size(); ++i) {
    if (p[i] <= 0.0) continue;
    const double per_server = lambda * p[i] / static_cast<double>(groups[i].count);
    if (per_server >= groups[i].speed) return kInf;
    total += p[i] / (groups[i].speed - per_server);
  }
  return total;
}

// Minimize f over [lo, hi] down to interval width `width`. f is strictly
// convex on the feasible region, +inf outside it.
double ternary_min(double lo, double hi, double width, auto&& f) {
  while (hi - lo > width) {
    const double m1 = lo + (hi - lo) / 3.0;
    const double m2 = hi - (hi - lo) / 3.0;
    if (f(m1) <= f(m2)) {
      hi = m2;
    } else {
      lo = m1;
    }
  }
  return 0.5 * (lo + hi);
}

SplitSolution finish(const ClusterSpec& cluster, double lambda, std::vector<double> p) {
  // Snap rounding residue and renormalize before packaging.
  double sum = 0.0;
  for (double& x : p) {
    if (x < 1e-12) x = 0.0;
    sum += x;
  }
  for (double& x : p) x /= sum;
  const double t = objective(cluster, lambda, p);
  std::vector<std::size_t> active;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] > 0.0) active.push_back(i);
  }
  return SplitSolution{LoadSplit(std::move(p)), t, std::move(active)};
}

// Stability bound for one coordinate: p_i must stay strictly below
// k_i mu_i / lambda (and below 1).
double max_probability(const ClusterSpec& cluster, double lambda, std::size_t group) {
  const auto& g = cluster.groups()[group];
  const double cap = static_cast<double>(g.count) * g.speed / lambda;
  return std::min(1.0, cap * (1.0 - 1e-12));
}

SplitSolution search_two_groups(const ClusterSpec& cluster, double lambda, double resolution) {
  double best_p = -1.0;
  double best_t = kInf;
  const auto eval = [&](double p1) {
    return objective(cluster, lambda, {p1, 1.0 - p1});
  };
  const long steps = std::lround(1.0 / resolution);
  for (long s = 0; s <= steps; ++s) {
    const double p1 = static_cast<double>(s) / static_cast<double>(steps);
    const double t = eval(p1);
    if (t < best_t) {
      best_t = t;
      best_p = p1;
    }
  }
  if (!(best_t < kInf)) throw OverloadedError();
  // Clamp the refinement window to the feasible interval so the ternary
  // search never has to compare infinite plateaus.
  const double lo = std::max({0.0, best_p - resolution, 1.0 - max_probability(cluster, lambda, 1)});
  const double hi = std::min({1.0, best_p + resolution, max_probability(cluster, lambda, 0)});
  const double p1 = ternary_min(lo, hi, 1e-10, eval);
  return finish(cluster, lambda, {p1, 1.0 - p1});
}

SplitSolution search_descent(const ClusterSpec& cluster, double lambda, double resolution) {
  const std::size_t n = cluster.num_groups();
  // Start from the capacity-proportional point, computed in place.
  std::vector<double> p(n);
  const double cap = cluster.total_capacity();
  for (std::size_t i = 0; i < n; ++i) {
    p[i] = static_cast<double>(cluster.groups()[i].count) * cluster.groups()[i].speed / cap;
  }
  double current = objective(cluster, lambda, p);

  for (int sweep = 0; sweep < 10000; ++sweep) {
    const double before = current;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        // Move mass t from group j to group i, other coordinates fixed.
        // The move stays inside the stability box of both coordinates so
        // the objective is finite and convex on the whole interval.
        const double t_lo = std::max(-p[i], p[j] - max_probability(cluster, lambda, j));
        const double t_hi = std::min(p[j], max_probability(cluster, lambda, i) - p[i]);
        if (t_lo >= t_hi) continue;
        const auto eval = [&](double t) {
          auto q = p;
          q[i] += t;
          q[j] -= t;
          return objective(cluster, lambda, q);
        };
        double t = ternary_min(t_lo, t_hi, 1e-10, eval);
        const double moved = eval(t);
        if (moved < current) {
          p[i] += t;
          p[j] -= t;
          current = moved;
        }
      }
    }
    if (before - current < 1e-12) break;
  }
  if (!(current < kInf)) throw OverloadedError();
  (void)resolution;
  return finish(cluster, lambda, std::move(p));
}

}  // namespace

SplitSolution oracle_optimal_split(const ClusterSpec& cluster, const ArrivalRate& rate,
                                   double resolution) {
  if (!(resolution > 0.0) || resolution > 0.01) {
    throw std::invalid_argument("resolution must lie in (0, 0.01]");
  }
  const double lambda = rate.lambda;
  if (lambda <= 0.0) throw DegenerateRateError();
  if (lambda >= cluster.total_capacity()) throw OverloadedError();

  switch (cluster.num_groups()) {
    case 1:
      return finish(cluster, lambda, {1.0});
    case 2:
      return search_two_groups(cluster, lambda, resolution);
    default:
      return search_descent(cluster, lambda, resolution);
  }
}

}  // namespace halo
