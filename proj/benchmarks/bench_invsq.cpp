// Microbenchmarks for the hot paths: angular eigensolves, radial zero
// counting, and the eigenvalue ladder.

#include <benchmark/benchmark.h>

#include <cmath>

#include "invsq/angular.hpp"
#include "invsq/ladder.hpp"
#include "invsq/oscillation.hpp"

using namespace invsq;

namespace {
const double kMuHalf = 0.25 + std::pow(2.0 * M_PI / std::log(2.0), 2.0);
}  // namespace

static void BM_AngularSpectrumConstant(benchmark::State& state) {
  const auto p = SpherePotential::constant(3, -5.0);
  const int basis = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(angular_spectrum(p, basis));
  }
}
BENCHMARK(BM_AngularSpectrumConstant)->Arg(12)->Arg(24)->Arg(48);

static void BM_AngularSpectrumHemisphere(benchmark::State& state) {
  const auto p = SpherePotential::hemisphere(0.01, Parity::Even);
  const int basis = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(angular_spectrum(p, basis));
  }
}
BENCHMARK(BM_AngularSpectrumHemisphere)->Arg(16)->Arg(32);

static void BM_CountZeros(benchmark::State& state) {
  const double E = std::pow(10.0, -static_cast<double>(state.range(0)));
  QProfile q(4.75, 3, E, RadialPerturbation::zero());
  const double r_max = q.turning_point() + 20.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(count_zeros(q, r_max));
  }
}
BENCHMARK(BM_CountZeros)->Arg(4)->Arg(8)->Arg(12);

static void BM_CountZerosLogPowerTail(benchmark::State& state) {
  const auto t = RadialPerturbation::log_power(9.0, 2.5);
  QProfile q(4.75, 3, 1e-8, t);
  const double r_max = q.turning_point() + 20.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(count_zeros(q, r_max));
  }
}
BENCHMARK(BM_CountZerosLogPowerTail);

static void BM_ComputeLadder(benchmark::State& state) {
  const auto model = InteriorModel::standard(kMuHalf);
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(compute_ladder(model, n));
  }
}
BENCHMARK(BM_ComputeLadder)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
