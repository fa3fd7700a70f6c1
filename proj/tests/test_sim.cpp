#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "halo/queueing.hpp"
#include "halo/sim.hpp"

using namespace halo;

namespace {
ClusterSpec scenario_a() { return ClusterSpec({{1, 2.0}, {2, 1.0}}); }
}

TEST_CASE("ps work accounting") {
  SUBCASE("single job runs at full speed") {
    PsServer s(2.0);
    s.add_job(1, 1.0);
    s.apply_elapsed(0.25);
    const auto works = s.remaining_works();
    REQUIRE(works.size() == 1);
    CHECK(works[0] == doctest::Approx(0.5).epsilon(1e-12));
  }
  SUBCASE("two jobs share the processor equally") {
    PsServer s(2.0);
    s.add_job(1, 1.0);
    s.add_job(2, 1.0);
    s.apply_elapsed(0.5);
    for (double w : s.remaining_works()) CHECK(w == doctest::Approx(0.5).epsilon(1e-12));
  }
  SUBCASE("idle server is unaffected by elapsed time") {
    PsServer s(1.0);
    s.apply_elapsed(5.0);
    CHECK(s.jobs_in_service() == 0);
    CHECK(s.busy_time() == 0.0);
    CHECK(s.last_update() == 5.0);
  }
  SUBCASE("time cannot go backwards") {
    PsServer s(1.0);
    s.apply_elapsed(1.0);
    CHECK_THROWS_AS(s.apply_elapsed(0.5), std::invalid_argument);
  }
}

TEST_CASE("ps next departure") {
  SUBCASE("two jobs") {
    PsServer s(2.0);
    s.add_job(1, 0.5);
    s.add_job(2, 1.0);
    REQUIRE(s.next_departure().has_value());
    CHECK(*s.next_departure() == doctest::Approx(0.5).epsilon(1e-12));
  }
  SUBCASE("idle") {
    PsServer s(2.0);
    CHECK_FALSE(s.next_departure().has_value());
  }
  SUBCASE("offset clock") {
    PsServer s(1.0);
    s.apply_elapsed(10.0);
    s.add_job(1, 0.3);
    CHECK(*s.next_departure() == doctest::Approx(10.3).epsilon(1e-12));
  }
  SUBCASE("finished job leaves with essentially zero work") {
    PsServer s(1.0);
    s.add_job(7, 0.4);
    s.add_job(8, 1.0);
    s.apply_elapsed(*s.next_departure());
    const auto works = s.remaining_works();
    CHECK(*std::min_element(works.begin(), works.end()) ==
          doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
    CHECK(s.pop_finished() == 7);
  }
}

TEST_CASE("service sampling") {
  SUBCASE("deterministic") {
    RngStream rng(1);
    const auto dist = ServiceDistribution::deterministic();
    for (int i = 0; i < 100; ++i) CHECK(dist.sample(rng) == 1.0);
  }
  SUBCASE("exponential mean") {
    RngStream rng(2);
    const auto dist = ServiceDistribution::exponential();
    double sum = 0.0;
    const int n = 1000000;
    for (int i = 0; i < n; ++i) sum += dist.sample(rng);
    CHECK(std::abs(sum / n - 1.0) < 0.004);
  }
  SUBCASE("lognormal mean and positivity") {
    RngStream rng(3);
    const auto dist = ServiceDistribution::lognormal(1.0);
    double sum = 0.0;
    const int n = 1000000;
    for (int i = 0; i < n; ++i) {
      const double x = dist.sample(rng);
      CHECK(x > 0.0);
      sum += x;
    }
    const double se = std::sqrt((dist.second_moment() - 1.0) / n);
    CHECK(std::abs(sum / n - 1.0) < 4 * se);
  }
  SUBCASE("bounded pareto mean via analytic variance") {
    RngStream rng(4);
    const auto dist = ServiceDistribution::bounded_pareto(1.5, 100.0);
    double sum = 0.0;
    const int n = 1000000;
    for (int i = 0; i < n; ++i) {
      const double x = dist.sample(rng);
      CHECK(x > 0.0);
      CHECK(std::isfinite(x));
      sum += x;
    }
    const double se = std::sqrt((dist.second_moment() - 1.0) / n);
    CHECK(std::abs(sum / n - 1.0) < 3 * se);
  }
}

TEST_CASE("summarize") {
  const auto [m0, hw0] = summarize({2.0, 2.0, 2.0});
  CHECK(m0 == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(hw0 == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));

  const auto [m1, hw1] = summarize({1.0, 3.0});
  CHECK(m1 == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(hw1 == doctest::Approx(12.7062).epsilon(1e-4));

  CHECK_THROWS_AS(summarize({2.0}), InsufficientReplicationsError);
}

TEST_CASE("mm1 sanity at reduced scale") {
  const ClusterSpec single({{1, 1.0}});
  SimConfig sim;
  sim.total_jobs = 20000;
  sim.replications = 5;
  sim.seed = 2718;
  const auto result = run_simulation(single, ArrivalRate(0.5),
                                     ServiceDistribution::exponential(), "rnd", sim);
  // 1/(mu - lambda) = 2; the CI must cover it.
  CHECK(std::abs(result.mean_response_time - 2.0) <= std::max(result.ci_halfwidth, 0.08));
  CHECK(result.jobs_counted == 100000);
  CHECK(result.seed == 2718);
}

TEST_CASE("simulation results are bit-identical across runs") {
  SimConfig sim;
  sim.total_jobs = 5000;
  sim.replications = 3;
  sim.seed = 99;
  const auto a = run_simulation(scenario_a(), ArrivalRate(1.6),
                                ServiceDistribution::exponential(), "pod_base", sim);
  const auto b = run_simulation(scenario_a(), ArrivalRate(1.6),
                                ServiceDistribution::exponential(), "pod_base", sim);
  CHECK(a.mean_response_time == b.mean_response_time);
  CHECK(a.ci_halfwidth == b.ci_halfwidth);
  CHECK(a.replication_means == b.replication_means);
  CHECK(a.per_server_throughput == b.per_server_throughput);
}

TEST_CASE("work conservation and little's law") {
  SimConfig sim;
  sim.total_jobs = 30000;
  sim.replications = 4;
  sim.seed = 1234;
  const double lambda = 1.6;
  const auto result = run_simulation(scenario_a(), ArrivalRate(lambda),
                                     ServiceDistribution::exponential(), "halo_rnd", sim);

  CHECK(std::abs(result.work_injected - (result.work_processed + result.residual_work)) /
            result.work_injected <
        1e-6);

  CHECK(std::abs(result.mean_jobs_in_system -
                 result.effective_lambda * result.mean_response_time) /
            result.mean_jobs_in_system <
        0.02);

  double throughput = 0.0;
  for (double t : result.per_server_throughput) throughput += t;
  CHECK(throughput == doctest::Approx(lambda).epsilon(0.03));
}

TEST_CASE("simulated rnd matches the analytic split prediction") {
  SimConfig sim;
  sim.total_jobs = 40000;
  sim.replications = 5;
  sim.seed = 31;
  const double lambda = 1.2;
  const auto result = run_simulation(scenario_a(), ArrivalRate(lambda),
                                     ServiceDistribution::exponential(), "rnd", sim);
  const double analytic =
      mean_response_time(scenario_a(), ArrivalRate(lambda), LoadSplit({1.0 / 3, 2.0 / 3}));
  CHECK(std::abs(result.mean_response_time - analytic) / analytic < 0.03);
}

TEST_CASE("errors") {
  SimConfig sim;
  CHECK_THROWS_AS(run_simulation(scenario_a(), ArrivalRate(0.0),
                                 ServiceDistribution::exponential(), "rnd", sim),
                  DegenerateRateError);
}
