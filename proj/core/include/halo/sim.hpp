#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "halo/policy.hpp"
#include "halo/service.hpp"
#include "halo/types.hpp"

namespace halo {

/// One processor-sharing server. All in-progress jobs share `speed`
/// equally; accounting is exact and event-driven. Internally tracked in
/// virtual attained-service time, so elapsed-time updates are O(1) even
/// with thousands of resident jobs.
class PsServer {
 public:
  explicit PsServer(double speed) : speed_(speed) {}

  /// Drain elapsed shared work up to `now`.
  void apply_elapsed(double now);
  /// Absolute time of the next departure given current accounting, or
  /// nullopt when idle.
  std::optional<double> next_departure() const;

  /// Admit a job; call apply_elapsed(now) first.
  void add_job(std::uint64_t job_id, double work);
  /// Remove and return the job with the least remaining work.
  std::uint64_t pop_finished();

  double speed() const { return speed_; }
  std::size_t jobs_in_service() const { return jobs_.size(); }
  double last_update() const { return last_update_; }
  double busy_time() const { return busy_time_; }
  double residual_work() const;
  /// Remaining work per in-progress job, unordered; test support.
  std::vector<double> remaining_works() const;

 private:
  double speed_;
  double last_update_ = 0.0;
  double busy_time_ = 0.0;
  double attained_ = 0.0;  // per-job service each resident job has received
  // (finish target in attained-service units, job id), min-first.
  std::multiset<std::pair<double, std::uint64_t>> jobs_;
};

struct SimConfig {
  std::uint64_t total_jobs = 100000;  // counted completions, post-warmup
  double warmup_fraction = 0.1;       // in [0, 0.5]
  std::uint32_t replications = 10;
  std::uint64_t seed = 0;
  std::uint32_t batch_count = 30;     // single-replication batch-means mode
};

struct SimResult {
  double mean_response_time = 0.0;
  double ci_halfwidth = 0.0;  // 95%, Student-t over replication means
  std::uint64_t jobs_counted = 0;
  std::vector<double> per_server_throughput;  // counted window, jobs/sec
  std::uint64_t seed = 0;
  std::vector<double> replication_means;
  // Bookkeeping for conservation and Little's-law checks, summed over
  // replications. Conservation identity: work_injected (all admitted
  // jobs) = work_processed + residual_work.
  double work_injected = 0.0;
  double work_processed = 0.0;
  double residual_work = 0.0;
  double mean_jobs_in_system = 0.0;
  double effective_lambda = 0.0;  // counted jobs / counted window
};

/// Mean and 95% Student-t halfwidth over replication means. Throws
/// InsufficientReplicationsError for fewer than two values.
std::pair<double, double> summarize(const std::vector<double>& replication_means);

/// Event-driven simulation of the cluster under Poisson arrivals and the
/// named dispatch policy. Deterministic for fixed inputs.
SimResult run_simulation(const ClusterSpec& cluster, const ArrivalRate& rate,
                         const ServiceDistribution& service, const std::string& policy,
                         const SimConfig& sim);

}  // namespace halo
