#include <benchmark/benchmark.h>

#include <random>

#include "nsv/fft.hpp"
#include "nsv/galerkin.hpp"
#include "nsv/kv1d.hpp"
#include "nsv/tensor.hpp"

namespace {

// args: dim, modes
void BM_FourierRoundTrip(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  const int n = static_cast<int>(state.range(1));
  const auto fft = nsv::FourierTransform::shared(dim, n);
  std::vector<nsv::Complex> a(fft->points(), 1.0), b(fft->points());
  for (auto _ : state) {
    fft->to_spectral(a, b);
    fft->to_physical(b, a);
    benchmark::DoNotOptimize(a.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(fft->points()));
}
BENCHMARK(BM_FourierRoundTrip)->Args({2, 64})->Args({2, 128})->Args({3, 16})->Args({3, 32});

// args: dim, modes, p * 10
void BM_GalerkinTendency(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  const nsv::TorusGrid g(dim, static_cast<int>(state.range(1)));
  nsv::PdeParams q;
  q.nu = 0.1;
  q.kappa = 0.5;
  q.p = state.range(2) / 10.0;
  nsv::GalerkinOperator op(g, g.max_shell(), q);
  const auto v = nsv::random_velocity(g, g.max_shell(), 1.0, 1);
  nsv::SpectralVelocity out(g);
  for (auto _ : state) {
    op.tendency_into(v, 0.0, out);
    benchmark::DoNotOptimize(out.coeffs().data());
  }
}
BENCHMARK(BM_GalerkinTendency)
    ->Args({2, 32, 20})
    ->Args({2, 32, 15})
    ->Args({2, 64, 30})
    ->Args({3, 16, 15})
    ->Args({3, 24, 30})
    ->Unit(benchmark::kMicrosecond);

void BM_MidpointStep(benchmark::State& state) {
  const nsv::TorusGrid g(2, static_cast<int>(state.range(0)));
  nsv::PdeParams q;
  q.nu = 0.1;
  q.kappa = 0.5;
  q.p = 1.5;
  nsv::SimConfig c;
  c.grid = g;
  c.galerkin_n = g.max_shell();
  c.dt = 0.01;
  nsv::GalerkinOperator op(g, c.galerkin_n, q);
  const auto v = nsv::random_velocity(g, 4, 1.0, 1);
  const auto slope = op.tendency(v, 0.0);
  for (auto _ : state) benchmark::DoNotOptimize(nsv::step(op, v, slope, 0.0, c.dt, c));
}
BENCHMARK(BM_MidpointStep)->Arg(32)->Arg(64)->Unit(benchmark::kMicrosecond);

void BM_PowerLawStress(benchmark::State& state) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1, 1);
  nsv::SymTensor d(3);
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) d(i, j) = d(j, i) = u(rng);
  for (auto _ : state) benchmark::DoNotOptimize(nsv::power_law_stress(d, 1.5));
}
BENCHMARK(BM_PowerLawStress);

void BM_Kv1dTendency(benchmark::State& state) {
  nsv::Kv1dParams q;
  q.nu = 0.1;
  q.kappa = 0.5;
  q.p = 3.0;
  const int m = static_cast<int>(state.range(0));
  nsv::Kv1dOperator op(m, q);
  std::vector<double> a(m), out;
  for (int k = 0; k < m; ++k) a[k] = 1.0 / (k + 1);
  for (auto _ : state) {
    op.tendency(a, 0.0, out);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_Kv1dTendency)->Arg(64)->Arg(1024);

}  // namespace

BENCHMARK_MAIN();
