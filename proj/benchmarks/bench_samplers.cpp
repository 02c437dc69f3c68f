#include <benchmark/benchmark.h>

#include "crw/analytics.hpp"
#include "crw/oracle.hpp"
#include "crw/walk.hpp"
#include "crw/zigzag.hpp"

namespace {

using namespace crw;

void BM_SimulateStep(benchmark::State& state) {
  const Schedule schedule = Schedule::constant(0.5);
  RandomStream rng(1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate(2, schedule, state.range(0), rng));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SimulateStep)->Arg(1'000)->Arg(100'000);

void BM_SimulateEventsConstant(benchmark::State& state) {
  const UpdateClock clock(Schedule::constant(0.5), state.range(0));
  RandomStream rng(1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate_events(2, clock, rng));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SimulateEventsConstant)->Arg(1'000)->Arg(100'000);

void BM_SimulateEventsCritical(benchmark::State& state) {
  const UpdateClock clock(Schedule::critical(1.0, 1), state.range(0));
  RandomStream rng(1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate_events(2, clock, rng));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SimulateEventsCritical)->Arg(100'000)->Arg(10'000'000);

void BM_SimulateStepCritical(benchmark::State& state) {
  const Schedule schedule = Schedule::critical(1.0, 1);
  RandomStream rng(1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate(2, schedule, state.range(0), rng));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SimulateStepCritical)->Arg(100'000);

void BM_Visits(benchmark::State& state) {
  RandomStream rng(2);
  const Path path = simulate_events(2, Schedule::constant(0.3), state.range(0), rng);
  const Point origin{0, 0};
  for (auto _ : state) benchmark::DoNotOptimize(visits(path, origin));
}
BENCHMARK(BM_Visits)->Arg(100'000);

void BM_ZigzagSample(benchmark::State& state) {
  RandomStream rng(3);
  for (auto _ : state) {
    const ZigzagPath path = sample_zigzag(0.75, 2, 1e-4, 1.0, rng);
    benchmark::DoNotOptimize(path.position_at(1.0));
  }
}
BENCHMARK(BM_ZigzagSample);

void BM_ExactDistribution(benchmark::State& state) {
  const Schedule schedule = Schedule::constant(0.5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(exact_distribution(2, schedule, state.range(0)));
  }
}
BENCHMARK(BM_ExactDistribution)->Arg(6)->Arg(20);

void BM_FourthMomentExact(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(fourth_moment_L(0.5, state.range(0), MomentMode::Exact));
  }
}
BENCHMARK(BM_FourthMomentExact)->Arg(1'000)->Arg(1'000'000);

void BM_LyapunovDrift(benchmark::State& state) {
  const LyapunovConfig config(0.5, 43.0, 1e-30);
  for (auto _ : state) benchmark::DoNotOptimize(lyapunov_drift(config, {1000, 0}));
}
BENCHMARK(BM_LyapunovDrift);

}  // namespace

BENCHMARK_MAIN();
