#include <benchmark/benchmark.h>

#include "halo/oracle.hpp"
#include "halo/queueing.hpp"
#include "halo/sim.hpp"

namespace {

halo::ClusterSpec scenario_a() { return halo::ClusterSpec({{1, 2.0}, {2, 1.0}}); }

void BM_OptimalSplit(benchmark::State& state) {
  const auto cluster = scenario_a();
  for (auto _ : state) {
    benchmark::DoNotOptimize(halo::optimal_split(cluster, halo::ArrivalRate(0.8)));
  }
}
BENCHMARK(BM_OptimalSplit);

void BM_OracleSplit(benchmark::State& state) {
  const auto cluster = scenario_a();
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        halo::oracle_optimal_split(cluster, halo::ArrivalRate(0.8), 1e-3));
  }
}
BENCHMARK(BM_OracleSplit);

void BM_Dispatch(benchmark::State& state) {
  const auto cluster = scenario_a();
  auto dispatcher = halo::build_policy("halo_pod", cluster, halo::ArrivalRate(0.8), 1);
  halo::QueueView view{{1, 0, 2}};
  for (auto _ : state) {
    benchmark::DoNotOptimize(dispatcher.dispatch(view));
  }
}
BENCHMARK(BM_Dispatch);

void BM_Simulation(benchmark::State& state) {
  const auto cluster = scenario_a();
  halo::SimConfig sim;
  sim.total_jobs = static_cast<std::uint64_t>(state.range(0));
  sim.replications = 2;
  sim.batch_count = 10;
  for (auto _ : state) {
    benchmark::DoNotOptimize(halo::run_simulation(cluster, halo::ArrivalRate(1.6),
                                                  halo::ServiceDistribution::exponential(),
                                                  "halo_rnd", sim));
  }
}
BENCHMARK(BM_Simulation)->Arg(2000)->Arg(20000);

}  // namespace

BENCHMARK_MAIN();
