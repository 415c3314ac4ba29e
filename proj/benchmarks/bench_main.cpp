#include <benchmark/benchmark.h>

#include "cylev/cylproc.hpp"
#include "cylev/integrability.hpp"
#include "cylev/levy1d.hpp"
#include "cylev/rng.hpp"
#include "cylev/stochint.hpp"

namespace {

using namespace cylev;

void BM_SymmetricStableSampler(benchmark::State& state) {
  RandomStream stream(7);
  const double alpha = static_cast<double>(state.range(0)) / 10.0;
  for (auto _ : state) benchmark::DoNotOptimize(sample_standard_symmetric_stable(alpha, stream));
}
BENCHMARK(BM_SymmetricStableSampler)->Arg(5)->Arg(10)->Arg(15);

void BM_Symbol1D(benchmark::State& state) {
  const LevyTriplet1D t{0.3, 0.5, PoissonAtomMeasure{{2.0, 0.7}}};
  double theta = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(symbol_1d(t, theta));
    theta += 1e-6;
  }
}
BENCHMARK(BM_Symbol1D);

void BM_Symbol1DQuadrature(benchmark::State& state) {
  const LevyTriplet1D t{0.0, 0.0, SymmetricStableMeasure{1.5, 1.0}};
  for (auto _ : state) benchmark::DoNotOptimize(symbol_1d_quadrature(t, 2.0));
}
BENCHMARK(BM_Symbol1DQuadrature);

void BM_IntegralCF(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const SeriesCylLevySpec spec{ModeSequence::power(1.0, 1.0, n),
                               CompensatedPoissonDriver{1.0, 0.5}};
  const auto f = DiagonalIntegrand::semigroup_convolution(ModeSequence::power(-1.0, -1.0, n), 1.0);
  const Functional theta{std::vector<double>(n, 1.0)};
  const TimeSet whole{{0.0, 1.0}};
  for (auto _ : state) benchmark::DoNotOptimize(integral_cf(f, spec, whole, theta));
}
BENCHMARK(BM_IntegralCF)->Arg(4)->Arg(16);

void BM_SimulateOU(benchmark::State& state) {
  const std::size_t n = 8;
  const OUSpec spec{ModeSequence::power(-1.0, -1.0, n), {},
                    SeriesCylLevySpec{ModeSequence::power(1.0, 1.0, n), SymmetricStableDriver{1.5, 1.0}},
                    TimeGrid(1.0, 256)};
  const SimulationOptions options{1, 1};
  for (auto _ : state)
    benchmark::DoNotOptimize(simulate_ou(spec, static_cast<std::size_t>(state.range(0)), options, 256));
}
BENCHMARK(BM_SimulateOU)->Arg(256)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
