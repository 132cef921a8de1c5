#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>
#include <random>

#include "zakai/chaos_propagator.hpp"
#include "zakai/filter_runtime.hpp"
#include "zakai/galerkin.hpp"

namespace {

using namespace zakai;

// Galerkin system of the OU model b = -x, sigma = 1, h = x.
GalerkinSystem ou_system(int K) {
  FilterModel m;
  m.drift = [](Point x) { return Vector::Constant(1, -x[0]); };
  m.sigma = [](Point) { return Matrix::Constant(1, 1, 1.0); };
  m.rho = [](Point) { return Matrix::Zero(1, 1); };
  m.sensor = [](Point x) { return Vector::Constant(1, x[0]); };
  m.p0 = [](Point x) { return std::exp(-0.5 * x[0] * x[0]) / std::sqrt(2.0 * std::numbers::pi); };
  auto basis = std::make_shared<const SpatialBasis>(1, K);
  return assemble(m, basis, gauss_hermite_grid(1, default_quadrature_nodes(*basis)));
}

ObservationWindow brownian_window(double delta, int samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  ObservationWindow w;
  w.t_end = delta;
  w.values = Matrix::Zero(samples + 1, 1);
  for (int j = 0; j <= samples; ++j) {
    w.times.push_back(delta * j / samples);
    if (j > 0) w.values(j, 0) = w.values(j - 1, 0) + std::sqrt(delta / samples) * normal(rng);
  }
  return w;
}

void BM_Precompute(benchmark::State& state) {
  const int K = static_cast<int>(state.range(0)), N = static_cast<int>(state.range(1));
  const auto sys = ou_system(K);
  const auto tb = cosine_basis(0.01, 4);
  for (auto _ : state) benchmark::DoNotOptimize(precompute_table(sys, tb, N, 4, default_substeps(4)));
}
BENCHMARK(BM_Precompute)->Args({8, 2})->Args({16, 2})->Args({16, 3})->Unit(benchmark::kMillisecond);

void BM_StepMatrix(benchmark::State& state) {
  const int K = static_cast<int>(state.range(0)), N = static_cast<int>(state.range(1));
  const auto table = precompute_table(ou_system(K), cosine_basis(0.01, 4), N, 4, default_substeps(4));
  const auto xi = xi_integrals(brownian_window(0.01, 32, 1), cosine_basis(0.01, 4));
  for (auto _ : state) benchmark::DoNotOptimize(step_matrix(table, xi));
}
BENCHMARK(BM_StepMatrix)->Args({8, 2})->Args({16, 2})->Args({16, 3});

// One online window: xi integrals, step matrix and the state update.
void BM_FilterStep(benchmark::State& state) {
  const int K = static_cast<int>(state.range(0));
  const auto table = precompute_table(ou_system(K), cosine_basis(0.01, 4), 2, 4, default_substeps(4));
  const auto window = brownian_window(0.01, 32, 2);
  ChaosFilter filter(table, Vector::Unit(K, 0));
  for (auto _ : state) {
    ChaosFilter f = filter;
    benchmark::DoNotOptimize(f.step(window));
  }
}
BENCHMARK(BM_FilterStep)->Arg(8)->Arg(16)->Arg(32);

void BM_Advance(benchmark::State& state) {
  const int K = static_cast<int>(state.range(0));
  const Matrix Q = Matrix::Random(K, K);
  FilterState s{0.0, Vector::Random(K)};
  for (auto _ : state) benchmark::DoNotOptimize(advance(s, Q, 0.01));
}
BENCHMARK(BM_Advance)->Arg(8)->Arg(16)->Arg(32);

}  // namespace

BENCHMARK_MAIN();
