// Serial reference path vs OpenMP path for the sampled-geometry kernels.

#include <benchmark/benchmark.h>

#include "igeo/diagnostics.hpp"
#include "igeo/families.hpp"
#include "igeo/volume_prior.hpp"

namespace {

igeo::Execution exec_of(const benchmark::State& state) {
  return state.range(0) ? igeo::Execution::Parallel : igeo::Execution::Serial;
}

void BM_SampledGeometry(benchmark::State& state) {
  const igeo::ManifoldSpec spec = igeo::random_spec(3, 42);
  for (auto _ : state) {
    auto s = igeo::SampledGeometry::build(spec, {200, 0}, exec_of(state));
    benchmark::DoNotOptimize(s.geometry.data());
  }
  state.SetLabel(state.range(0) ? "parallel" : "serial");
}

void BM_CheckSuite(benchmark::State& state) {
  const igeo::ManifoldSpec spec = igeo::random_spec(3, 42);
  igeo::SuiteOptions opts;
  opts.check.exec = exec_of(state);
  const auto s = igeo::SampledGeometry::build(spec, {200, 0}, opts.check.exec);
  for (auto _ : state) {
    auto report = igeo::run_suite(s, opts);
    benchmark::DoNotOptimize(report.checks.data());
  }
  state.SetLabel(state.range(0) ? "parallel" : "serial");
}

void BM_JeffreysGrid(benchmark::State& state) {
  const igeo::ManifoldSpec spec = igeo::normal_family();
  igeo::PriorOptions po;
  po.exec = exec_of(state);
  const auto base = spec.domain().center();
  for (auto _ : state) {
    auto grid = igeo::parallel_volume(spec, 0.0, base, {{20, 20}}, po);
    benchmark::DoNotOptimize(grid.log_f.data());
  }
  state.SetLabel(state.range(0) ? "parallel" : "serial");
}

}  // namespace

BENCHMARK(BM_SampledGeometry)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CheckSuite)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_JeffreysGrid)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
