#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>

#include "halo/policy.hpp"
#include "halo/queueing.hpp"

using namespace halo;

namespace {

ClusterSpec scenario_a() { return ClusterSpec({{1, 2.0}, {2, 1.0}}); }
ClusterSpec scenario_b() { return ClusterSpec({{2, 1.5}, {2, 1.0}}); }

QueueView empty_view(std::size_t n) { return QueueView{std::vector<std::uint32_t>(n, 0)}; }

}  // namespace

TEST_CASE("policy names") {
  for (const char* name :
       {"rnd", "rr", "wrr", "pod_base", "pod_jsqr", "halo_rnd", "halo_rr", "halo_pod"}) {
    CHECK(is_valid_policy_name(name));
  }
  CHECK_FALSE(is_valid_policy_name("jsq"));
  CHECK(policy_has_known_split("halo_rr"));
  CHECK_FALSE(policy_has_known_split("pod_base"));
}

TEST_CASE("round robin cycles through all servers") {
  Dispatcher rr({PolicyKind::kRr}, 3, 1);
  auto view = empty_view(3);
  CHECK(rr.dispatch(view) == 0);
  CHECK(rr.dispatch(view) == 1);
  CHECK(rr.dispatch(view) == 2);
  CHECK(rr.dispatch(view) == 0);  // cursor wrapped

  // RR period: every server exactly once per full cycle, any start point.
  std::vector<int> counts(3, 0);
  for (int i = 0; i < 3; ++i) counts[rr.dispatch(view)]++;
  CHECK(counts == std::vector<int>{1, 1, 1});
}

TEST_CASE("pod picks the least-occupied candidate") {
  // d equal to the server count makes the candidate set everyone.
  PolicyConfig config{PolicyKind::kPod};
  config.d = 3;
  Dispatcher pod(config, 3, 7);
  QueueView view{{5, 0, 3}};
  CHECK(pod.dispatch(view) == 1);
  view.jobs_in_service = {2, 9, 1};
  CHECK(pod.dispatch(view) == 2);
}

TEST_CASE("pod jsqr degenerates to join-shortest-queue") {
  const auto cluster = scenario_b();
  auto pod = build_policy("pod_jsqr", cluster, ArrivalRate(1.0), 3);
  CHECK(pod.config().d == 4);
  QueueView view{{3, 1, 4, 2}};
  for (int i = 0; i < 50; ++i) CHECK(pod.dispatch(view) == 1);
}

TEST_CASE("pod tie-break is uniform among tied candidates") {
  PolicyConfig config{PolicyKind::kPod};
  config.d = 4;
  Dispatcher pod(config, 4, 99);
  QueueView view{{1, 0, 0, 1}};
  std::map<std::size_t, int> hits;
  const int n = 20000;
  for (int i = 0; i < n; ++i) hits[pod.dispatch(view)]++;
  CHECK(hits.count(0) == 0);
  CHECK(hits.count(3) == 0);
  // 3 standard errors around n/2 for a fair coin.
  const double se = std::sqrt(n * 0.25);
  CHECK(std::abs(hits[1] - n / 2.0) < 3 * se);
}

TEST_CASE("pod candidate sampling is uniform when queues are equal") {
  PolicyConfig config{PolicyKind::kPod};
  config.d = 2;
  const std::size_t servers = 5;
  Dispatcher pod(config, servers, 2024);
  auto view = empty_view(servers);
  std::vector<int> hits(servers, 0);
  const int n = 100000;
  for (int i = 0; i < n; ++i) hits[pod.dispatch(view)]++;
  // Equal queues reduce selection to a uniform pick among candidates, so
  // selection frequency is 1/servers each.
  const double expect = static_cast<double>(n) / servers;
  const double se = std::sqrt(n * (1.0 / servers) * (1.0 - 1.0 / servers));
  for (int h : hits) CHECK(std::abs(h - expect) < 3 * se);
}

TEST_CASE("build_policy wiring") {
  const auto a = scenario_a();
  CHECK(build_policy("pod_jsqr", a, ArrivalRate(1.0), 0).config().d == 3);
  CHECK(build_policy("pod_base", scenario_b(), ArrivalRate(1.0), 0).config().d == 2);

  const auto halo = build_policy("halo_rnd", a, ArrivalRate(0.8), 0);
  REQUIRE(halo.config().weights.size() == 3);
  CHECK(halo.config().weights[0] == doctest::Approx(0.843146).epsilon(1e-5));
  CHECK(halo.config().weights[1] == doctest::Approx(0.078427).epsilon(1e-4));
  CHECK(halo.config().weights[2] == doctest::Approx(0.078427).epsilon(1e-4));

  CHECK_THROWS_AS(build_policy("halo_rnd", a, ArrivalRate(4.0), 0), OverloadedError);
  CHECK_THROWS_AS(build_policy("halo_rnd", a, ArrivalRate(0.0), 0), DegenerateRateError);
  CHECK_THROWS_AS(build_policy("quantum", a, ArrivalRate(1.0), 0), std::invalid_argument);
}

TEST_CASE("halo_rnd concentrates on the fast server at low load") {
  auto halo = build_policy("halo_rnd", scenario_a(), ArrivalRate(0.4), 5);
  auto view = empty_view(3);
  for (int i = 0; i < 1000; ++i) CHECK(halo.dispatch(view) == 0);
}

TEST_CASE("zero-weight servers are never dispatched to") {
  const ArrivalRate low(0.4);  // optimal split (1, 0) on scenario A
  for (const char* name : {"halo_rnd", "halo_rr", "halo_pod"}) {
    auto d = build_policy(name, scenario_a(), low, 11);
    QueueView view{{50, 0, 0}};  // fast server busiest; still the only choice
    for (int i = 0; i < 500; ++i) CHECK(d.dispatch(view) == 0);
  }
}

TEST_CASE("no eligible server") {
  PolicyConfig config{PolicyKind::kHaloRnd};
  config.weights = {0.0, 0.0, 0.0};
  // Weight vectors summing to 0 cannot arise from build_policy, but the
  // dispatcher still refuses them cleanly.
  Dispatcher d(config, 3, 0);
  auto view = empty_view(3);
  CHECK_THROWS_AS(d.dispatch(view), NoEligibleServerError);
}

TEST_CASE("smooth wrr fractions track the configured weights") {
  SUBCASE("long run") {
    PolicyConfig config{PolicyKind::kWeightedRr};
    config.weights = {0.5, 0.25, 0.25};
    Dispatcher d(config, 3, 0);
    const auto fractions = d.wrr_sequence_fractions(1024);
    CHECK(std::abs(fractions[0] - 0.5) <= 1.0 / 1024 + 1.0 / 1024);
    CHECK(std::abs(fractions[1] - 0.25) <= 1.0 / 1024 + 1.0 / 1024);
    CHECK(std::abs(fractions[2] - 0.25) <= 1.0 / 1024 + 1.0 / 1024);
  }
  SUBCASE("degenerate weights") {
    PolicyConfig config{PolicyKind::kWeightedRr};
    config.weights = {1.0, 0.0, 0.0};
    Dispatcher d(config, 3, 0);
    CHECK(d.wrr_sequence_fractions(100) == std::vector<double>{1.0, 0.0, 0.0});
  }
  SUBCASE("short window") {
    PolicyConfig config{PolicyKind::kWeightedRr};
    config.weights = {0.6, 0.4};
    Dispatcher d(config, 2, 0);
    const auto fractions = d.wrr_sequence_fractions(10);
    CHECK(std::abs(fractions[0] - 0.6) <= 1.0 / 1024 + 1.0 / 10);
    CHECK(std::abs(fractions[1] - 0.4) <= 1.0 / 1024 + 1.0 / 10);
  }
}

TEST_CASE("smooth wrr is deterministic and periodic") {
  PolicyConfig config{PolicyKind::kWeightedRr};
  config.weights = {0.55, 0.3, 0.15};
  Dispatcher a(config, 3, 1);
  Dispatcher b(config, 3, 2);  // seed is irrelevant to the wrr sequence
  auto view = empty_view(3);
  std::vector<std::size_t> seq_a, seq_b;
  for (int i = 0; i < 4096; ++i) {
    seq_a.push_back(a.dispatch(view));
    seq_b.push_back(b.dispatch(view));
  }
  CHECK(seq_a == seq_b);

  // Exactly the quantized share once per full period.
  std::vector<int> counts(3, 0);
  for (std::size_t i = 0; i < 1024; ++i) counts[seq_a[i]]++;
  CHECK(counts[0] + counts[1] + counts[2] == 1024);
  CHECK(std::abs(counts[0] - 0.55 * 1024) <= 1.0);
  CHECK(std::abs(counts[1] - 0.30 * 1024) <= 1.0);
  CHECK(std::abs(counts[2] - 0.15 * 1024) <= 1.0);
}

TEST_CASE("rnd dispatch frequencies match weights statistically") {
  const auto cluster = scenario_a();
  auto rnd = build_policy("halo_rnd", cluster, ArrivalRate(0.8), 321);
  const auto weights = rnd.config().weights;
  auto view = empty_view(3);
  std::vector<int> hits(3, 0);
  const int n = 1000000;
  for (int i = 0; i < n; ++i) hits[rnd.dispatch(view)]++;
  for (std::size_t s = 0; s < 3; ++s) {
    const double se = std::sqrt(n * weights[s] * (1.0 - weights[s]));
    CHECK(std::abs(hits[s] - n * weights[s]) <= 4 * se);
  }
}

TEST_CASE("identical seeds give identical dispatch sequences") {
  const auto cluster = scenario_b();
  for (const char* name : {"rnd", "pod_base", "halo_pod"}) {
    auto a = build_policy(name, cluster, ArrivalRate(2.0), 12345);
    auto b = build_policy(name, cluster, ArrivalRate(2.0), 12345);
    QueueView view{{2, 0, 1, 3}};
    for (int i = 0; i < 2000; ++i) CHECK(a.dispatch(view) == b.dispatch(view));
  }
}
