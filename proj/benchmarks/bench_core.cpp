#include <benchmark/benchmark.h>

#include "shearlab/initial_data.hpp"
#include "shearlab/multiplier.hpp"
#include "shearlab/shear.hpp"
#include "shearlab/solver.hpp"
#include "shearlab/transform.hpp"

using namespace shearlab;

namespace {

SpectralField band_data(const FrequencyGrid& g) {
  DataSpec d;
  d.width = 1.0;
  return initial_data(d, g, 1e-3, 2.0, 1);
}

FrequencyGrid grid_of(const benchmark::State& state) {
  return FrequencyGrid(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)), 16.0);
}

}  // namespace

static void BM_TransformRoundTrip(benchmark::State& state) {
  const auto g = grid_of(state);
  Transform fft(g);
  const auto f = band_data(g);
  PhysicalField x(g);
  for (auto _ : state) {
    fft.inverse(f, x);
    benchmark::DoNotOptimize(fft.forward(x));
  }
}
BENCHMARK(BM_TransformRoundTrip)->Args({16, 256})->Args({32, 768})->Args({128, 512});

static void BM_Rhs(benchmark::State& state) {
  const auto g = grid_of(state);
  SolverConfig cfg;
  cfg.grid = g;
  Solver s(cfg);
  const auto f = band_data(g);
  for (auto _ : state) benchmark::DoNotOptimize(s.rhs(1.0, f));
}
BENCHMARK(BM_Rhs)->Args({16, 256})->Args({32, 768});

static void BM_MultiplierState(benchmark::State& state) {
  const auto g = grid_of(state);
  const MultiplierParams p{1e-3, 2.0};
  for (auto _ : state) benchmark::DoNotOptimize(MultiplierState(g, p, 7.0));
}
BENCHMARK(BM_MultiplierState)->Args({16, 256})->Args({32, 768});

static void BM_EllipticSolve(benchmark::State& state) {
  const auto g = grid_of(state);
  Transform fft(g);
  const auto sh = make_shear_state(gauss_bump_with_delta(g.nv(), g.lv(), 0.01, 1.0, 4.0), 1e-2, 0.5);
  const auto f = band_data(g);
  for (auto _ : state) benchmark::DoNotOptimize(solve_poisson_t(f, sh, 0.5, 1e-10, 200, fft));
}
BENCHMARK(BM_EllipticSolve)->Args({16, 256})->Args({32, 768});
BENCHMARK_MAIN();
