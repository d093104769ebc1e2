#include <cmath>
#include <vector>

#include <benchmark/benchmark.h>

#include "targetlab/profiles.hpp"
#include "targetlab/radial_solvers.hpp"
#include "targetlab/shooting.hpp"
#include "targetlab/specfun.hpp"
#include "targetlab/spectral2d.hpp"
#include "targetlab/steady.hpp"

using namespace targetlab;

namespace {

// Log-spaced arguments spanning all three evaluation regimes.
std::vector<double> bessel_args() {
  std::vector<double> z;
  for (int i = 0; i < 256; ++i) z.push_back(1e-4 * std::pow(1e6, i / 255.0));
  return z;
}

void BM_BesselK(benchmark::State& state) {
  const auto z = bessel_args();
  for (auto _ : state) {
    for (double x : z) benchmark::DoNotOptimize(specfun::evaluate_bessel_k(x));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(z.size()));
}
BENCHMARK(BM_BesselK);

void BM_EtdrkStep(benchmark::State& state) {
  const spectral::GridSpec2D g{static_cast<std::size_t>(state.range(0)), 100.0};
  const auto gf = spectral::defect_field(g, {1.5, 0.8, 1.0});
  spectral::EikonalSimulator sim(g, 0.5, 1.0, 1.0, gf);
  sim.advance(20);
  for (auto _ : state) sim.step();
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_EtdrkStep)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_Corrector(benchmark::State& state) {
  const auto grid = radial::RadialGrid::geometric(1e4, 1e-3, 1.01);
  const auto g_far = [](double r) { return r > 1.0 ? std::pow(1.0 + r * r, -0.8) : 0.0; };
  for (auto _ : state) benchmark::DoNotOptimize(radial::solve_corrector_K(grid, g_far, 1.0));
}
BENCHMARK(BM_Corrector)->Unit(benchmark::kMillisecond);

void BM_Shooting(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(radial::shoot_spiral_amplitude(20.0, 1e-6));
}
BENCHMARK(BM_Shooting)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
