#include <benchmark/benchmark.h>

#include <cmath>

#include "curvlab/asymptotics.hpp"
#include "curvlab/derivatives.hpp"
#include "curvlab/families.hpp"
#include "curvlab/grid.hpp"
#include "curvlab/potential.hpp"
#include "curvlab/solver.hpp"

using namespace curvlab;

static void BM_GridLaplacian(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto g = AnnularGrid::build(1e-3, 0.9, n + 1, n);
  const auto f = GridField::sample(g, [](Complex z) { return std::log(std::abs(z)) + z.real(); });
  for (auto _ : state) benchmark::DoNotOptimize(apply_laplacian(f));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(g.size()));
}
BENCHMARK(BM_GridLaplacian)->Arg(64)->Arg(256);

static void BM_CallableDz(benchmark::State& state) {
  const auto s = nitsche_family(1.0);
  const Complex z(1e-6, 2e-6);
  for (auto _ : state) benchmark::DoNotOptimize(diff::dz(s.u, z));
}
BENCHMARK(BM_CallableDz);

static void BM_NewtonPotential(benchmark::State& state) {
  PotentialSpec spec;
  spec.q = [](Complex xi) { return xi.real() + 2.0; };
  spec.alpha = 0.5;
  for (auto _ : state) benchmark::DoNotOptimize(newton_potential(spec, Complex(0.3, 0.2)));
}
BENCHMARK(BM_NewtonPotential)->Unit(benchmark::kMillisecond);

static void BM_PotentialHessian(benchmark::State& state) {
  PotentialSpec spec;
  spec.q = [](Complex) { return 1.0; };
  spec.alpha = 0.5;
  for (auto _ : state) benchmark::DoNotOptimize(potential_hessian(spec, Complex(0.3, 0.0), 0, 0));
}
BENCHMARK(BM_PotentialHessian)->Unit(benchmark::kMillisecond);

static void BM_SolveRadial(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  auto u = [](double r) { return -std::log(2.0 * r * -std::log(r)); };
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_radial([](double) { return -4.0; }, 1e-3, 0.9, u(1e-3), u(0.9), n));
  }
}
BENCHMARK(BM_SolveRadial)->Arg(257)->Arg(2049)->Unit(benchmark::kMillisecond);

static void BM_SolveAnnulus(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto g = AnnularGrid::build(1e-3, 0.9, n + 1, n);
  const RealFn u = [](Complex z) { return -std::log(2.0 * std::abs(z) * -std::log(std::abs(z))); };
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        solve_dirichlet_annulus(CurvatureField::constant(-4.0), DirichletData::from_function(u, 1e-3, 0.9), g));
  }
}
BENCHMARK(BM_SolveAnnulus)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

static void BM_EstimateOrder(benchmark::State& state) {
  const auto s = nitsche_family(0.75);
  const auto radii = dyadic_radii(8, 26);
  for (auto _ : state) benchmark::DoNotOptimize(estimate_order(s.u, radii));
}
BENCHMARK(BM_EstimateOrder);
BENCHMARK_MAIN();
