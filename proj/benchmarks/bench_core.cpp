#include <benchmark/benchmark.h>

#include "amo/cocycle.hpp"
#include "amo/diophantine.hpp"
#include "amo/periodic.hpp"
#include "amo/renorm.hpp"
#include "amo/symmetric_eigen.hpp"
#include "amo/thouless.hpp"

namespace {

// Consecutive Fibonacci pairs.
std::int64_t fib_p(std::int64_t q) {
  std::int64_t a = 1, b = 1;
  while (b < q) {
    const auto c = a + b;
    a = b;
    b = c;
  }
  return a;
}

void BM_BandSpectrum(benchmark::State& state) {
  const std::int64_t q = state.range(0);
  const std::int64_t p = fib_p(q);
  for (auto _ : state) benchmark::DoNotOptimize(amo::band_spectrum(0.5, p, q));
  state.SetComplexityN(q);
}
BENCHMARK(BM_BandSpectrum)->Arg(8)->Arg(21)->Arg(55)->Arg(144)->Unit(benchmark::kMillisecond)->Complexity();

void BM_ChambersA0(benchmark::State& state) {
  const std::int64_t q = state.range(0);
  double e = -1.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(amo::chambers_a0(0.5, fib_p(q), q, e));
    e += 1e-9;
  }
}
BENCHMARK(BM_ChambersA0)->Arg(8)->Arg(89)->Arg(987);

void BM_CocycleProduct(benchmark::State& state) {
  const amo::CocycleParams params{0.5, amo::Frequency::real(0.6180339887498949), 0.3};
  for (auto _ : state) benchmark::DoNotOptimize(amo::cocycle_product(params, 0.1, state.range(0)));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_CocycleProduct)->Arg(1000)->Arg(100000);

void BM_Ids(benchmark::State& state) {
  const auto spec = amo::band_spectrum(0.5, 13, 21);
  double e = -2.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(amo::ids(spec, e));
    e = e > 2.0 ? -2.0 : e + 1e-3;
  }
}
BENCHMARK(BM_Ids);

void BM_ThoulessL(benchmark::State& state) {
  const amo::IDSProfile profile(amo::band_spectrum(0.5, 5, 8));
  for (auto _ : state) benchmark::DoNotOptimize(amo::thouless_L(profile, 0.37));
}
BENCHMARK(BM_ThoulessL);

void BM_PqIntervals(benchmark::State& state) {
  const auto w = amo::make_window(state.range(0), 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(amo::pq_intervals(w));
}
BENCHMARK(BM_PqIntervals)->Arg(8)->Arg(16)->Arg(24)->Unit(benchmark::kMicrosecond);

void BM_BuildX(benchmark::State& state) {
  const auto cf = amo::build_liouville_max(0.25);
  const auto k = cf.size() - 1;
  const auto spec = amo::band_spectrum(0.5, cf.p(k), cf.q(k));
  const double c = amo::default_c(0.25, 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(amo::build_X(spec, c));
}
BENCHMARK(BM_BuildX)->Unit(benchmark::kMillisecond);

void BM_OrbitDeviation(benchmark::State& state) {
  const auto spec = amo::band_spectrum(0.5, 2, 5);
  const double e = amo::energy_for_rotation(spec, 1, 0.13, 0.15);
  const amo::OrbitExperiment ex{0.5, 2, 5, amo::Frequency::perturbed(2, 5, 1e-10), e, 5, 0.13, 3, std::nullopt};
  for (auto _ : state) benchmark::DoNotOptimize(amo::orbit_deviation(ex));
}
BENCHMARK(BM_OrbitDeviation);

}  // namespace

BENCHMARK_MAIN();
