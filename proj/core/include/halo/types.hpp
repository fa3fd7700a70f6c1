#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace halo {

// Errors thrown by the queueing and simulation layers.

struct UnstableError : std::runtime_error {
  std::size_t group_index;
  explicit UnstableError(std::size_t g)
      : std::runtime_error("split saturates group " + std::to_string(g)),
        group_index(g) {}
};

struct OverloadedError : std::runtime_error {
  OverloadedError() : std::runtime_error("arrival rate meets or exceeds total capacity") {}
};

struct OutsideValidityRegionError : std::runtime_error {
  std::size_t group_index;
  explicit OutsideValidityRegionError(std::size_t g)
      : std::runtime_error("closed form invalid: group " + std::to_string(g) +
                           " is below its activation threshold"),
        group_index(g) {}
};

struct DegenerateRateError : std::runtime_error {
  DegenerateRateError() : std::runtime_error("arrival rate is zero") {}
};

struct NoEligibleServerError : std::runtime_error {
  NoEligibleServerError() : std::runtime_error("all samplable server weights are zero") {}
};

struct SaturatedRunError : std::runtime_error {
  SaturatedRunError() : std::runtime_error("in-system job count exceeded divergence guard") {}
};

struct InsufficientReplicationsError : std::runtime_error {
  InsufficientReplicationsError()
      : std::runtime_error("at least two replication means are required") {}
};

/// A group of identical servers: `count` independent processor-sharing
/// servers, each working at `speed` requests per second.
struct GroupSpec {
  std::size_t count = 1;
  double speed = 1.0;
};

/// An ordered, non-empty list of server groups.
class ClusterSpec {
 public:
  explicit ClusterSpec(std::vector<GroupSpec> groups);

  const std::vector<GroupSpec>& groups() const { return groups_; }
  std::size_t num_groups() const { return groups_.size(); }
  std::size_t total_servers() const;
  /// Total capacity sum(k_i * mu_i), requests per second.
  double total_capacity() const;

 private:
  std::vector<GroupSpec> groups_;
};

/// Probability vector over groups: entry i is the probability an arriving
/// request is routed to group i.
class LoadSplit {
 public:
  explicit LoadSplit(std::vector<double> probabilities);

  const std::vector<double>& probabilities() const { return probs_; }
  double operator[](std::size_t i) const { return probs_[i]; }
  std::size_t size() const { return probs_.size(); }

 private:
  std::vector<double> probs_;
};

/// Total cluster arrival rate, requests per second.
struct ArrivalRate {
  double lambda = 0.0;
  explicit ArrivalRate(double l);
};

/// Result of the optimal-split computation.
struct SplitSolution {
  LoadSplit split;
  double response_time;                 // seconds, T at this split
  std::vector<std::size_t> active_groups;  // indices with probability > 0
};

}  // namespace halo
