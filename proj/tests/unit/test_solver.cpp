#include <gtest/gtest.h>

#include <cmath>

#include "curvlab/errors.hpp"
#include "curvlab/families.hpp"
#include "curvlab/solver.hpp"
#include "oracles/oracles.hpp"

using namespace curvlab;

namespace {

RealFn punctured(double A) {
  return [A](Complex z) { return oracle::punctured_disk_u(A, z); };
}

}  // namespace

TEST(SolveConfig, Validation) {
  SolveConfig c;
  EXPECT_NO_THROW(c.validate());
  c.tol = 0.0;
  EXPECT_THROW(c.validate(), ParameterError);
  c = {};
  c.max_iters = 0;
  EXPECT_THROW(c.validate(), ParameterError);
  c = {};
  c.linearization_shift = -1.0;
  EXPECT_THROW(c.validate(), ParameterError);
  c = {};
  c.alpha = 1.5;
  EXPECT_THROW(c.validate(), ParameterError);
}

TEST(SolveRadial, HyperbolicDisk) {
  auto exact = [](double r) { return oracle::hyperbolic_disk_u(4.0, Complex(r, 0)); };
  const auto p = solve_radial([](double) { return -4.0; }, 0.01, 0.9, exact(0.01), exact(0.9), 257);
  double err = 0.0;
  for (std::size_t k = 0; k < p.r.size(); ++k) err = std::max(err, std::abs(p.u[k] - exact(p.r[k])));
  EXPECT_LT(err, 1e-5);
  EXPECT_LE(p.residual, 1e-10);
}

TEST(SolveRadial, Errors) {
  auto k = [](double) { return -4.0; };
  EXPECT_THROW(solve_radial(k, 0.5, 0.1, 0, 0, 33), DomainError);
  EXPECT_THROW(solve_radial(k, 0.1, 0.5, 0, 0, 4), SizeError);
  EXPECT_THROW(solve_radial([](double) { return 1.0; }, 0.1, 0.5, 0, 0, 33), ParameterError);
}

TEST(SolveAnnulus, PuncturedDiskSmallGrid) {
  const auto grid = AnnularGrid::build(1e-2, 0.9, 33, 32);
  const auto u = punctured(4.0);
  const auto res = solve_dirichlet_annulus(CurvatureField::constant(-4.0),
                                           DirichletData::from_function(u, 1e-2, 0.9), grid);
  const auto exact = GridField::sample(grid, u);
  EXPECT_LT(res.extrapolated.max_abs_difference(exact), 5e-3);
  EXPECT_LT(res.extrapolated.max_abs_difference(exact), res.solution.max_abs_difference(exact));
  ASSERT_FALSE(res.trace.records.empty());
  for (const auto& r : res.trace.records) {
    EXPECT_GE(r.min_gap_to_subsolution, -1e-9);
    EXPECT_LE(r.max_gap_to_supersolution, 1e-9);
  }
  EXPECT_LE(res.trace.records.back().residual_supnorm, 1e-9);
  EXPECT_LE(ahlfors_excess(res.solution, 4.0), 10 * 1e-9 + res.discretization_error_estimate);
}

TEST(SolveAnnulus, IterationCapAndBadCurvature) {
  const auto grid = AnnularGrid::build(1e-2, 0.9, 17, 16);
  const auto u = punctured(4.0);
  SolveConfig cfg;
  cfg.max_iters = 1;
  EXPECT_THROW(solve_dirichlet_annulus(CurvatureField::constant(-4.0), DirichletData::from_function(u, 1e-2, 0.9),
                                       grid, cfg),
               NonConvergenceError);
  EXPECT_THROW(solve_dirichlet_annulus(CurvatureField::constant(1.0), DirichletData::from_function(u, 1e-2, 0.9),
                                       grid),
               ParameterError);
}

TEST(Ahlfors, ExactSolutionSitsOnTheBound) {
  const auto grid = AnnularGrid::build(1e-3, 0.9, 17, 16);
  EXPECT_NEAR(ahlfors_excess(GridField::sample(grid, punctured(4.0)), 4.0), 0.0, 1e-13);
  EXPECT_GT(ahlfors_excess(GridField::sample(grid, punctured(1.0)), 4.0), 0.5);
  EXPECT_THROW(ahlfors_excess(GridField::sample(grid, punctured(4.0)), 0.0), ParameterError);
}

TEST(Interpolant, ReproducesSmoothField) {
  const auto grid = AnnularGrid::build(0.05, 0.9, 65, 64);
  auto f = [](Complex z) { return z.real() * z.imag() + std::log(std::abs(z)); };
  const auto interp = grid_interpolant(GridField::sample(grid, f));
  for (Complex z : {Complex(0.3, 0.2), Complex(-0.07, 0.02), Complex(0.5, -0.6)}) {
    EXPECT_NEAR(interp(z), f(z), 1e-4);
  }
  EXPECT_THROW(interp(Complex(0.95, 0)), DomainError);
}

TEST(MaxPrinciple, SubBelowSuper) {
  const auto grid = AnnularGrid::build(1e-3, 0.9, 65, 64);
  const auto rep = check_max_principle(subsolution_family(0.5, 8.0, 2.0).u, supersolution_family(0.5, 2.0).u,
                                       CurvatureField::constant(-4.0), grid);
  EXPECT_TRUE(rep.all_hypotheses()) << rep.to_json();
  EXPECT_TRUE(rep.conclusion_holds);
  EXPECT_GE(rep.min_gap, 0.0);
}

TEST(MaxPrinciple, CounterexamplesBreakOneHypothesis) {
  const auto grid = AnnularGrid::build(1e-3, 0.9, 65, 64);
  const auto sh = counterexample("maxprin-superharmonic");
  const auto a = check_max_principle(sh.pair->u1, sh.pair->u2, sh.kappa, grid);
  EXPECT_FALSE(a.subharmonic_supersolution.holds);
  EXPECT_TRUE(a.subsolution.holds && a.boundary_ordering.holds && a.order_comparison.holds) << a.to_json();
  EXPECT_LT(a.min_gap, 0.0);

  const auto oi = counterexample("maxprin-order-infty");
  const auto b = check_max_principle(oi.pair->u1, oi.pair->u2, oi.kappa, grid);
  EXPECT_FALSE(b.order_comparison.holds);
  EXPECT_FALSE(b.u2_order_finite);
  EXPECT_TRUE(b.subharmonic_supersolution.holds && b.subsolution.holds && b.boundary_ordering.holds) << b.to_json();
  EXPECT_LT(b.min_gap, 0.0);
}
