// Serial reference vs OpenMP kernels. Both paths return bitwise-identical
// results, so only the wall time differs.

#include <benchmark/benchmark.h>

#include "sg/density.hpp"
#include "sg/ensemble.hpp"

namespace {

const sg::Setup kSetup;

void ensemble(benchmark::State& state, sg::Execution exec) {
  const auto& d = kSetup.derived();
  const auto atoms = sg::sample_atoms(
      kSetup, sg::SamplingSpec{.n = static_cast<std::size_t>(state.range(0)), .seed = 7});
  for (auto _ : state)
    benchmark::DoNotOptimize(sg::run_ensemble(kSetup, atoms, d.delta_t + d.t_s, {}, exec));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void density(benchmark::State& state, sg::Execution exec) {
  const double t = kSetup.screen_time();
  const auto grid = sg::default_profile_grid(kSetup, t, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state)
    benchmark::DoNotOptimize(sg::density_profile(kSetup, t, grid, exec));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void sampling(benchmark::State& state, sg::Execution exec) {
  const sg::SamplingSpec spec{.n = static_cast<std::size_t>(state.range(0)), .seed = 7};
  for (auto _ : state)
    benchmark::DoNotOptimize(sg::sample_atoms(kSetup, spec, exec));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

} // namespace

BENCHMARK_CAPTURE(ensemble, serial, sg::Execution::Serial)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(ensemble, parallel, sg::Execution::Parallel)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(density, serial, sg::Execution::Serial)->Arg(1 << 18)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(density, parallel, sg::Execution::Parallel)->Arg(1 << 18)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(sampling, serial, sg::Execution::Serial)->Arg(1 << 16)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(sampling, parallel, sg::Execution::Parallel)->Arg(1 << 16)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
