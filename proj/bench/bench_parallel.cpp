// Serial reference vs OpenMP for the two parallel kernels: the mu-grid scan
// of one instance and the instance loop of the property suite.
#include <benchmark/benchmark.h>
#include <omp.h>

#include "subrot/instance_lab.hpp"

using namespace subrot;

namespace {

AssembledPair bench_pair(std::size_t n) {
  GeneratorConfig c = GeneratorConfig::defaults(Geometry::CaseII);
  c.n_plus = n / 2;
  c.n_minus = n - n / 2;
  c.target_v = {2.0, 2.0};
  return assemble(generate_instance(c, 0), Layout::CaseII);
}

void BM_MuScan(benchmark::State& state, Execution execution) {
  const auto pair = bench_pair(static_cast<std::size_t>(state.range(0)));
  const auto geom = detect_gap(pair.decompA, pair.J);
  for (auto _ : state) {
    auto samples = scan_relative_bound(pair, geom, 257, execution);
    benchmark::DoNotOptimize(samples.data());
  }
  state.counters["threads"] = execution == Execution::Parallel ? omp_get_max_threads() : 1;
}

void BM_Suite(benchmark::State& state, Execution execution) {
  GeneratorConfig c = GeneratorConfig::defaults(Geometry::Central);
  c.count = static_cast<std::size_t>(state.range(0));
  c.n_plus = 10;
  c.n_minus = 10;
  c.random_dims = true;
  c.target_v = {0.1, 10.0};
  SuiteOptions options;
  options.execution = execution;
  for (auto _ : state) {
    auto result = run_property_suite(c, options);
    benchmark::DoNotOptimize(result.rows.data());
  }
  state.counters["threads"] = execution == Execution::Parallel ? omp_get_max_threads() : 1;
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK_CAPTURE(BM_MuScan, serial, Execution::Serial)->Arg(20)->Arg(80)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_MuScan, parallel, Execution::Parallel)->Arg(20)->Arg(80)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Suite, serial, Execution::Serial)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Suite, parallel, Execution::Parallel)->Arg(64)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
