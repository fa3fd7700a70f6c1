#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "halo/rng.hpp"
#include "halo/types.hpp"

namespace halo {

enum class PolicyKind { kRnd, kRr, kWeightedRr, kPod, kHaloRnd, kHaloRr, kHaloPod };

/// Exact policy-name strings accepted by config and CLI:
/// rnd, rr, wrr, pod_base, pod_jsqr, halo_rnd, halo_rr, halo_pod.
bool is_valid_policy_name(const std::string& name);
/// True for kinds whose stationary dispatch fractions are known up front
/// (everything except the POD family, which reacts to queue state).
bool policy_has_known_split(const std::string& name);

struct PolicyConfig {
  PolicyKind kind = PolicyKind::kRnd;
  std::size_t d = 2;                 // POD family only
  std::vector<double> weights;       // per-server, weighted kinds only
  std::uint32_t quantization = 1024; // smooth-WRR denominator
};

/// Instantaneous per-server occupancy as seen by the dispatcher.
struct QueueView {
  std::vector<std::uint32_t> jobs_in_service;
};

/// Single-threaded dispatch state machine. Given (seed, policy, identical
/// QueueView sequence) the dispatch sequence is bit-identical across runs.
class Dispatcher {
 public:
  Dispatcher(PolicyConfig config, std::size_t num_servers, std::uint64_t seed);

  std::size_t dispatch(const QueueView& view);

  const PolicyConfig& config() const { return config_; }
  std::size_t num_servers() const { return num_servers_; }

  /// Fraction of the first `steps` dispatches sent to each server by the
  /// deterministic smooth-WRR sequence, starting from a fresh cursor.
  std::vector<double> wrr_sequence_fractions(std::size_t steps) const;

 private:
  std::size_t dispatch_wrr();
  std::size_t dispatch_pod(const QueueView& view);

  PolicyConfig config_;
  std::size_t num_servers_;
  RngStream rng_;
  std::size_t rr_cursor_ = 0;
  std::vector<std::int64_t> wrr_scores_;
  std::vector<std::int64_t> wrr_weights_;  // quantized, sum to quantization
  std::int64_t wrr_total_ = 0;
};

/// Builds the dispatcher for a named policy on a concrete cluster:
/// pod_base gets d = 2, pod_jsqr d = sum(k_i), halo kinds compute weights
/// from the optimal split, rnd gets uniform per-server weights, wrr and
/// halo_rr get smooth-WRR state.
Dispatcher build_policy(const std::string& name, const ClusterSpec& cluster,
                        const ArrivalRate& rate, std::uint64_t seed);

}  // namespace halo
