#include <benchmark/benchmark.h>

#include "rbb/bootstrap.hpp"
#include "rbb/coupling.hpp"
#include "rbb/parallel.hpp"
#include "rbb/regeneration.hpp"
#include "rbb/simulator.hpp"

namespace {

rbb::BlockSummary make_summary(std::size_t m) {
  const rbb::Kernel kernel = rbb::Kernel::finite_order(2, 1, {0.7, 0.3, 0.3, 0.7});
  const rbb::OrderKKernel approx = rbb::canonical_from_kernel(kernel, 6);
  rbb::MarkovSampler sampler(approx, {42, 0});
  rbb::Trajectory t{2, {}};
  sampler.extend(t.symbols, 64 * m);
  const auto d = rbb::decompose(t, 6, m);
  return rbb::summarize_blocks(d.blocks, rbb::Observable::identity(2));
}

void BM_BootstrapSerial(benchmark::State& state) {
  const auto summary = make_summary(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(rbb::bootstrap_distribution_serial(summary, 2000, 7));
  }
}

void BM_BootstrapParallel(benchmark::State& state) {
  const auto summary = make_summary(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(rbb::bootstrap_distribution(summary, 2000, 7));
  }
  state.counters["threads"] = rbb::thread_count();
}

const rbb::Kernel& mixture() {
  static const rbb::Kernel k =
      rbb::Kernel::geometric_mixture(2, 0.5, {0.7, 0.3, 0.3, 0.7});
  return k;
}

void BM_DiscrepancySerial(benchmark::State& state) {
  const auto approx = rbb::canonical_approximation(mixture(), 4, 200'000, {1, 4});
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        rbb::first_discrepancies_serial(mixture(), approx, 1, 2000, 1000, 9));
  }
}

void BM_DiscrepancyParallel(benchmark::State& state) {
  const auto approx = rbb::canonical_approximation(mixture(), 4, 200'000, {1, 4});
  for (auto _ : state) {
    benchmark::DoNotOptimize(rbb::first_discrepancies(mixture(), approx, 1, 2000, 1000, 9));
  }
  state.counters["threads"] = rbb::thread_count();
}

}  // namespace

BENCHMARK(BM_BootstrapSerial)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BootstrapParallel)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DiscrepancySerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DiscrepancyParallel)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
