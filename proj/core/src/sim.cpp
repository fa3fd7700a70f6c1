#include "halo/sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <unordered_map>

#include <boost/math/distributions/students_t.hpp>

namespace halo {

namespace {
constexpr std::uint64_t kDivergenceGuard = 1000000;
}

void PsServer::apply_elapsed(double now) {
  if (now < last_update_) throw std::invalid_argument("time went backwards");
  if (!jobs_.empty()) {
    attained_ += speed_ * (now - last_update_) / static_cast<double>(jobs_.size());
    busy_time_ += now - last_update_;
  }
  last_update_ = now;
}

std::optional<double> PsServer::next_departure() const {
  if (jobs_.empty()) return std::nullopt;
  const double least = jobs_.begin()->first - attained_;
  return last_update_ + least * static_cast<double>(jobs_.size()) / speed_;
}

void PsServer::add_job(std::uint64_t job_id, double work) {
  if (!(work > 0.0)) throw std::invalid_argument("job work must be positive");
  jobs_.emplace(attained_ + work, job_id);
}

std::uint64_t PsServer::pop_finished() {
  if (jobs_.empty()) throw std::logic_error("no job to finish");
  const auto it = jobs_.begin();
  const std::uint64_t id = it->second;
  jobs_.erase(it);
  return id;
}

double PsServer::residual_work() const {
  double total = 0.0;
  for (const auto& [target, id] : jobs_) total += target - attained_;
  return total;
}

std::vector<double> PsServer::remaining_works() const {
  std::vector<double> works;
  works.reserve(jobs_.size());
  for (const auto& [target, id] : jobs_) works.push_back(target - attained_);
  return works;
}

std::pair<double, double> summarize(const std::vector<double>& replication_means) {
  if (replication_means.size() < 2) throw InsufficientReplicationsError();
  const double n = static_cast<double>(replication_means.size());
  double mean = 0.0;
  for (double m : replication_means) mean += m;
  mean /= n;
  double ss = 0.0;
  for (double m : replication_means) ss += (m - mean) * (m - mean);
  const double sd_of_mean = std::sqrt(ss / (n - 1.0) / n);
  const boost::math::students_t_distribution<double> dist(n - 1.0);
  const double t = boost::math::quantile(dist, 0.975);
  return {mean, t * sd_of_mean};
}

namespace {

struct ReplicationStats {
  double mean_response = 0.0;
  std::vector<double> per_server_completions;
  double window_duration = 0.0;
  double work_injected = 0.0;
  double work_processed = 0.0;
  double residual_work = 0.0;
  double mean_jobs = 0.0;
  std::vector<double> response_times;  // counted window, arrival order of completion
};

enum class EventType { kArrival, kDeparture };

struct Event {
  double time;
  std::uint64_t seq;
  EventType type;
  std::size_t server;
  std::uint64_t epoch;
};

struct EventLater {
  bool operator()(const Event& a, const Event& b) const {
    if (a.time != b.time) return a.time > b.time;
    return a.seq > b.seq;
  }
};

ReplicationStats run_replication(const ClusterSpec& cluster, double lambda,
                                 const ServiceDistribution& service,
                                 const std::string& policy, const SimConfig& sim,
                                 std::uint32_t replication) {
  auto arrivals = RngStream::derive(sim.seed, replication, StreamPurpose::kArrivals);
  auto services = RngStream::derive(sim.seed, replication, StreamPurpose::kService);
  const std::uint64_t policy_seed =
      splitmix64(splitmix64(splitmix64(sim.seed) ^ replication) ^
                 static_cast<std::uint64_t>(StreamPurpose::kPolicy));
  Dispatcher dispatcher = build_policy(policy, cluster, ArrivalRate(lambda), policy_seed);

  std::vector<PsServer> servers;
  for (const auto& g : cluster.groups()) {
    for (std::size_t i = 0; i < g.count; ++i) servers.emplace_back(g.speed);
  }
  const std::size_t num_servers = servers.size();
  std::vector<std::uint64_t> epochs(num_servers, 0);

  const std::uint64_t warmup =
      static_cast<std::uint64_t>(std::llround(sim.warmup_fraction *
                                              static_cast<double>(sim.total_jobs)));
  const std::uint64_t target = warmup + sim.total_jobs;

  std::priority_queue<Event, std::vector<Event>, EventLater> events;
  std::uint64_t seq = 0;
  std::uint64_t next_job_id = 0;
  struct JobInfo {
    double arrival;
    double work;
  };
  std::unordered_map<std::uint64_t, JobInfo> jobs;

  ReplicationStats stats;
  stats.per_server_completions.assign(num_servers, 0.0);
  stats.response_times.reserve(sim.total_jobs);

  std::uint64_t completions = 0;
  std::uint64_t in_system = 0;
  double window_start = 0.0;
  bool window_open = (warmup == 0);
  double area = 0.0;
  double last_event_time = 0.0;
  double now = 0.0;

  const auto reschedule = [&](std::size_t s) {
    ++epochs[s];
    if (const auto t = servers[s].next_departure()) {
      events.push(Event{*t, seq++, EventType::kDeparture, s, epochs[s]});
    }
  };

  events.push(Event{arrivals.exponential(lambda), seq++, EventType::kArrival, 0, 0});

  while (!events.empty()) {
    const Event ev = events.top();
    events.pop();
    if (ev.type == EventType::kDeparture && ev.epoch != epochs[ev.server]) continue;

    now = ev.time;
    if (window_open) area += static_cast<double>(in_system) * (now - last_event_time);
    last_event_time = now;

    if (ev.type == EventType::kArrival) {
      events.push(Event{now + arrivals.exponential(lambda), seq++, EventType::kArrival, 0, 0});

      QueueView view{std::vector<std::uint32_t>(num_servers, 0)};
      for (std::size_t i = 0; i < num_servers; ++i) {
        view.jobs_in_service[i] = static_cast<std::uint32_t>(servers[i].jobs_in_service());
      }
      const std::size_t target_server = dispatcher.dispatch(view);
      const double work = service.sample(services);
      const std::uint64_t id = next_job_id++;
      jobs.emplace(id, JobInfo{now, work});
      stats.work_injected += work;
      servers[target_server].apply_elapsed(now);
      servers[target_server].add_job(id, work);
      reschedule(target_server);
      ++in_system;
      if (in_system > kDivergenceGuard) throw SaturatedRunError();
    } else {
      servers[ev.server].apply_elapsed(now);
      const std::uint64_t id = servers[ev.server].pop_finished();
      reschedule(ev.server);
      --in_system;

      const auto it = jobs.find(id);
      const double response = now - it->second.arrival;
      jobs.erase(it);

      if (completions >= warmup && completions < target) {
        stats.response_times.push_back(response);
        stats.per_server_completions[ev.server] += 1.0;
      }
      ++completions;
      if (completions == warmup) {
        window_open = true;
        window_start = now;
        area = 0.0;
      }
      if (completions == target) break;
    }
  }

  stats.window_duration = now - window_start;
  double sum = 0.0;
  for (double r : stats.response_times) sum += r;
  stats.mean_response = sum / static_cast<double>(stats.response_times.size());
  stats.mean_jobs = area / stats.window_duration;

  for (auto& s : servers) {
    s.apply_elapsed(now);
    stats.work_processed += s.speed() * s.busy_time();
    stats.residual_work += s.residual_work();
  }
  return stats;
}

}  // namespace

SimResult run_simulation(const ClusterSpec& cluster, const ArrivalRate& rate,
                         const ServiceDistribution& service, const std::string& policy,
                         const SimConfig& sim) {
  if (rate.lambda == 0.0) throw DegenerateRateError();
  if (sim.total_jobs == 0 || sim.replications == 0) {
    throw std::invalid_argument("total_jobs and replications must be positive");
  }

  SimResult result;
  result.seed = sim.seed;
  result.jobs_counted = sim.total_jobs * sim.replications;
  result.per_server_throughput.assign(cluster.total_servers(), 0.0);

  std::vector<ReplicationStats> reps(sim.replications);
  for (std::uint32_t r = 0; r < sim.replications; ++r) {
    reps[r] = run_replication(cluster, rate.lambda, service, policy, sim, r);
  }

  for (const auto& rep : reps) {
    result.replication_means.push_back(rep.mean_response);
    result.work_processed += rep.work_processed;
    result.residual_work += rep.residual_work;
    result.work_injected += rep.work_injected;
    result.mean_jobs_in_system += rep.mean_jobs / static_cast<double>(sim.replications);
    result.effective_lambda += static_cast<double>(sim.total_jobs) / rep.window_duration /
                               static_cast<double>(sim.replications);
    for (std::size_t s = 0; s < result.per_server_throughput.size(); ++s) {
      result.per_server_throughput[s] += rep.per_server_completions[s] / rep.window_duration /
                                         static_cast<double>(sim.replications);
    }
  }

  if (sim.replications >= 2) {
    const auto [mean, hw] = summarize(result.replication_means);
    result.mean_response_time = mean;
    result.ci_halfwidth = hw;
  } else {
    // Single replication: batch means over the counted completions.
    const auto& times = reps[0].response_times;
    const std::size_t batches = std::max<std::size_t>(2, sim.batch_count);
    const std::size_t per_batch = times.size() / batches;
    std::vector<double> batch_means;
    for (std::size_t b = 0; b < batches && per_batch > 0; ++b) {
      double s = 0.0;
      for (std::size_t i = b * per_batch; i < (b + 1) * per_batch; ++i) s += times[i];
      batch_means.push_back(s / static_cast<double>(per_batch));
    }
    const auto [mean, hw] = summarize(batch_means);
    result.mean_response_time = reps[0].mean_response;
    result.ci_halfwidth = hw;
  }
  return result;
}

}  // namespace halo
