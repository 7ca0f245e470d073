#include <benchmark/benchmark.h>

#include "coldgas/gp.hpp"
#include "coldgas/ideal_gas.hpp"
#include "coldgas/lll.hpp"
#include "coldgas/scattering.hpp"

static void BM_Polylog(benchmark::State& state) {
  double z = 0.0;
  for (auto _ : state) {
    z += 1e-7;
    if (z >= 1.0) z = 0.0;
    benchmark::DoNotOptimize(coldgas::ideal_gas::polylog(1.5, z));
  }
}
BENCHMARK(BM_Polylog);

static void BM_EffectiveMu(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(coldgas::ideal_gas::effective_mu(0.5, 2.0));
}
BENCHMARK(BM_EffectiveMu);

static void BM_ObdmKernel(benchmark::State& state) {
  const double r = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(coldgas::ideal_gas::obdm_kernel(1.0, 2.0, r));
}
BENCHMARK(BM_ObdmKernel)->Arg(1)->Arg(10)->Arg(100);

static void BM_SoftSphereScattering(benchmark::State& state) {
  const auto pot = coldgas::scattering::RadialPotential::soft_sphere(2.0, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(coldgas::scattering::solve_zero_energy(pot).a);
}
BENCHMARK(BM_SoftSphereScattering);

static void BM_DeltaMatrix(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto block = coldgas::lll::delta_matrix(N, N);
    benchmark::DoNotOptimize(block.matrix.nonZeros());
  }
}
BENCHMARK(BM_DeltaMatrix)->DenseRange(4, 10, 2)->Unit(benchmark::kMillisecond);

static void BM_Yrast(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(coldgas::lll::yrast(N, N).delta_min);
}
BENCHMARK(BM_Yrast)->DenseRange(4, 10, 2)->Unit(benchmark::kMillisecond);

static void BM_GPEnergy(benchmark::State& state) {
  coldgas::gp::GPConfig cfg;
  cfg.grid_n = static_cast<int>(state.range(0));
  cfg.g = 2.0;
  const auto phi = coldgas::gp::sample(cfg, [](double x, double y, double) {
    return std::complex<double>(std::exp(-(x * x + y * y) / 2), 0.0);
  });
  for (auto _ : state) benchmark::DoNotOptimize(coldgas::gp::gp_energy(phi, cfg, false).total);
}
BENCHMARK(BM_GPEnergy)->RangeMultiplier(2)->Range(64, 256);

static void BM_GPResidual(benchmark::State& state) {
  coldgas::gp::GPConfig cfg;
  cfg.grid_n = static_cast<int>(state.range(0));
  cfg.g = 2.0;
  cfg.omega = 0.5;
  const auto phi = coldgas::gp::sample(cfg, [](double x, double y, double) {
    return std::complex<double>(std::exp(-(x * x + y * y) / 2), 0.1 * x);
  });
  for (auto _ : state) benchmark::DoNotOptimize(coldgas::gp::gp_residual(phi, cfg).r.data());
}
BENCHMARK(BM_GPResidual)->RangeMultiplier(2)->Range(64, 256);
BENCHMARK_MAIN();
