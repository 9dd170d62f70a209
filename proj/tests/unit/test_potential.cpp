#include <gtest/gtest.h>

#include <cmath>

#include "curvlab/asymptotics.hpp"
#include "curvlab/derivatives.hpp"
#include "curvlab/errors.hpp"
#include "curvlab/families.hpp"
#include "curvlab/potential.hpp"
#include "oracles/oracles.hpp"

using namespace curvlab;

namespace {

PotentialSpec power(double alpha, RealFn q = [](Complex) { return 1.0; }, double r = 1.0) {
  PotentialSpec s;
  s.q = std::move(q);
  s.alpha = alpha;
  s.r = r;
  return s;
}

double value(const PotentialSpec& s, Complex z) { return newton_potential(s, z).value; }

}  // namespace

TEST(Potential, RadialClosedForm) {
  for (double a : {0.0, 0.25, 0.5, 0.75, -0.5}) {
    for (double rho : {0.0, 0.2, 0.6}) {
      EXPECT_NEAR(value(power(a), Complex(rho * 0.6, rho * 0.8)), oracle::unit_potential(a, rho), 1e-9)
          << "alpha " << a << " rho " << rho;
    }
  }
}

TEST(Potential, ZeroDensityGivesZero) {
  const auto s = power(0.5, [](Complex) { return 0.0; });
  EXPECT_EQ(value(s, Complex(0.3, 0.1)), 0.0);
}

TEST(Potential, GradientMatchesClosedFormAndDifferences) {
  for (double a : {0.0, 0.5, 0.75}) {
    const auto s = power(a);
    const Complex z(0.3, 0.0);
    EXPECT_NEAR(potential_gradient(s, z, 0).value, oracle::unit_potential_gradient(a, 0.3), 1e-9);
    EXPECT_NEAR(potential_gradient(s, z, 1).value, 0.0, 1e-10);
  }
  // non-radial density: 20 points against central differences of the potential
  const auto s = power(0.25, [](Complex xi) { return xi.real() + 2.0; });
  const double h = 1e-4;
  for (int k = 0; k < 20; ++k) {
    const Complex z = std::polar(0.1 + 0.035 * k, 0.7 * k);
    for (int axis : {0, 1}) {
      const Complex e = axis == 0 ? Complex(h, 0) : Complex(0, h);
      const double fd = (value(s, z + e) - value(s, z - e)) / (2 * h);
      EXPECT_NEAR(potential_gradient(s, z, axis).value, fd, 1e-6) << "point " << k;
    }
  }
}

TEST(Potential, LaplacianRecoversDensity) {
  const RealFn qs[] = {[](Complex) { return 1.0; }, [](Complex xi) { return xi.real() + 2.0; },
                       [](Complex xi) { return std::abs(xi); }};
  for (const auto& q : qs) {
    for (double a : {0.0, 0.25, 0.5, 0.75}) {
      const auto s = power(a, q);
      for (Complex z : {Complex(0.15, 0.1), Complex(-0.4, 0.5)}) {
        const double lap = diff::laplacian([&](Complex w) { return value(s, w); }, z, 0.02);
        EXPECT_NEAR(lap / s.density(z), 1.0, 1e-4) << "alpha " << a << " z " << z;
      }
    }
  }
}

TEST(Potential, HessianTraceAndEntries) {
  const auto s = power(0.5);
  const Complex z(0.3, 0.0);
  const double xx = potential_hessian(s, z, 0, 0).value;
  const double yy = potential_hessian(s, z, 1, 1).value;
  EXPECT_NEAR(xx + yy, 1.0 / 0.3, 1e-7);
  EXPECT_NEAR(potential_hessian(s, z, 0, 1).value, 0.0, 1e-8);
  // p = 1: omega' = 1, so omega_xx = omega'' = 0 and omega_yy = omega'/rho
  EXPECT_NEAR(xx, 0.0, 1e-7);
  EXPECT_NEAR(yy, 1.0 / 0.3, 1e-7);
  const auto s0 = power(0.0);
  EXPECT_NEAR(potential_hessian(s0, Complex(0, 0), 0, 0).value, 0.5, 1e-8);
}

TEST(Potential, Log2Weight) {
  PotentialSpec s;
  s.q = [](Complex) { return 1.0; };
  s.weight = WeightKind::log2;
  s.r = 0.5;
  for (double rho : {0.3, 0.05, 1e-3}) {
    EXPECT_NEAR(potential_gradient(s, Complex(rho, 0), 0).value, oracle::log2_potential_gradient(rho),
                1e-8 * oracle::log2_potential_gradient(rho));
  }
}

TEST(Potential, GradientGrowth) {
  for (double a : {0.6, 0.75, 0.9}) {
    const auto s = power(a);
    std::vector<double> radii, g;
    for (int k = 0; k <= 12; ++k) {
      radii.push_back(std::pow(10.0, -2.0 - 0.5 * k));
      g.push_back(std::abs(potential_gradient(s, Complex(radii.back(), 0), 0).value));
    }
    FitOptions fo;
    fo.log_log_regressor = false;
    EXPECT_NEAR(fit_growth_samples(radii, g, fo).p, 1.0 - 2.0 * a, 0.05);
  }
}

// omega = k|z| has omega_z = k zbar / (2|z|).
TEST(Potential, WirtingerFactorOfAbs) {
  const double k = 4.0;
  auto f = [k](Complex z) { return k * std::abs(z); };
  const Complex z(0.2, -0.35);
  EXPECT_LT(std::abs(diff::dz(f, z) - k * std::conj(z) / (2.0 * std::abs(z))), 1e-7);
}

TEST(Potential, Errors) {
  EXPECT_THROW(newton_potential(power(0.5), Complex(1.2, 0)), DomainError);
  EXPECT_THROW(newton_potential(power(1.0), Complex(0.2, 0)), ParameterError);
  EXPECT_THROW(potential_gradient(power(0.0), Complex(0.2, 0), 2), ParameterError);
  EXPECT_THROW(potential_gradient(power(0.75), Complex(0, 0), 0), DomainError);
  EXPECT_THROW(potential_hessian(power(0.25), Complex(0, 0), 0, 0), DomainError);
  auto bad = power(0.0);
  bad.holder_exponent = 0.0;
  EXPECT_THROW(potential_hessian(bad, Complex(0.2, 0), 0, 0), ParameterError);
  PotentialSpec lg;
  lg.q = [](Complex) { return 1.0; };
  lg.weight = WeightKind::log2;
  lg.r = 1.0;
  EXPECT_THROW(newton_potential(lg, Complex(0.2, 0)), ParameterError);
  QuadratureOptions tiny;
  tiny.node_budget = 100;
  EXPECT_THROW(newton_potential(power(0.5), Complex(0.2, 0.1), tiny), QuadratureBudgetError);
}

TEST(PoissonJensen, HarmonicPartOfASolution) {
  const auto s = nitsche_family(0.5);
  PotentialSpec lap;
  lap.q = [&](Complex z) { return -s.kappa(z) * std::exp(2.0 * s.remainder(z)); };
  lap.alpha = 0.5;
  lap.r = 0.5;
  const auto split = poisson_jensen_split(s.remainder, lap, 8);
  EXPECT_TRUE(split.premise_ok);
  EXPECT_TRUE(split.harmonic_ok);
  EXPECT_LT(split.mean_value_defect, 1e-8);
}

TEST(PoissonJensen, HarmonicInputHasNoPotential) {
  auto u = [](Complex z) { return z.real() * z.real() - z.imag() * z.imag() + 1.0; };
  const auto split = poisson_jensen_split(u, [](Complex) { return 0.0; }, 0.8, 6);
  EXPECT_TRUE(split.harmonic_ok);
  EXPECT_EQ(split.potential_part(Complex(0.2, 0.3)), 0.0);
}
