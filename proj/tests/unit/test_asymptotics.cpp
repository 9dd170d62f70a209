#include <gtest/gtest.h>

#include <cmath>

#include "curvlab/asymptotics.hpp"
#include "curvlab/errors.hpp"
#include "curvlab/families.hpp"
#include "oracles/oracles.hpp"

using namespace curvlab;

TEST(Radii, Ladders) {
  const auto d = dyadic_radii(2, 5);
  ASSERT_EQ(d.size(), 4u);
  EXPECT_DOUBLE_EQ(d.front(), 0.25);
  EXPECT_DOUBLE_EQ(d.back(), 1.0 / 32);
  const auto t = decade_radii(1, 3);
  EXPECT_NEAR(t.back(), 1e-3, 1e-18);
}

TEST(MaxOnCircle, FindsOffGridMaximum) {
  auto f = [](Complex z) { return std::cos(std::arg(z) - 0.0123); };
  EXPECT_NEAR(max_on_circle(f, 0.5, 16), 1.0, 1e-10);
}

TEST(EstimateOrder, RecoversNitscheOrders) {
  const auto radii = dyadic_radii(8, 26);
  for (double a : {-1.0, 0.0, 0.3, 0.5, 0.75, 0.9, 1.0}) {
    auto u = [a](Complex z) { return oracle::nitsche_u(a, z); };
    const auto est = estimate_order(u, radii);
    EXPECT_NEAR(est.alpha_hat, a, 1e-2) << "alpha " << a;
    EXPECT_EQ(est.branch, a >= 1.0 ? Branch::critical : Branch::subcritical);
  }
}

TEST(EstimateOrder, PuncturedDiskIsCritical) {
  auto u = [](Complex z) { return oracle::punctured_disk_u(4.0, z); };
  const auto est = estimate_order(u, dyadic_radii(8, 26));
  EXPECT_EQ(est.branch, Branch::critical);
  EXPECT_NEAR(est.alpha_hat, 1.0, 1e-2);
}

TEST(EstimateOrder, FlagsInfiniteOrder) {
  auto u = [](Complex z) { return z.real() / std::norm(z); };
  const auto est = estimate_order(u, dyadic_radii(8, 26));
  EXPECT_FALSE(est.finite);
}

TEST(Remainder, MatchesDefinition) {
  auto u = [](Complex z) { return oracle::nitsche_u(1.0, z); };
  const auto w = remainder(u, 1.0, Branch::critical);
  const Complex z(1e-5, 2e-5);
  const double L = oracle::big_l(z);
  EXPECT_NEAR(w(z), -std::log(2.0) - std::log1p(1.0 / L), 1e-12);
  const auto v = remainder(u, 0.5, Branch::subcritical);
  EXPECT_NEAR(v(z), u(z) + 0.5 * std::log(std::abs(z)), 1e-12);
}

TEST(FitGrowth, RecoversSyntheticExponents) {
  const auto radii = dyadic_radii(4, 48);
  for (auto [p, q] : {std::pair{-0.5, 0.0}, {-1.0, -2.0}, {0.4, 1.0}}) {
    auto g = [p = p, q = q](Complex z) {
      return 3.0 * std::pow(std::abs(z), p) * std::pow(oracle::big_l(z), q);
    };
    const auto fit = fit_growth(g, radii);
    EXPECT_NEAR(fit.p, p, 1e-6);
    EXPECT_NEAR(fit.q, q, 1e-5);
    EXPECT_NEAR(fit.c, std::log(3.0), 1e-4);
    EXPECT_FALSE(fit.indeterminate);
  }
}

TEST(FitGrowth, NeedsEnoughDecades) {
  auto g = [](Complex z) { return std::abs(z); };
  EXPECT_THROW(fit_growth(g, dyadic_radii(4, 8)), InsufficientDataError);
}

TEST(MainTheorem, RowsFollowTheOrder) {
  for (double a : {-1.0, 0.3, 0.75, 1.0}) {
    const auto rep = verify_main_theorem(TheoremSubject::from(nitsche_family(a)));
    EXPECT_TRUE(rep.all_pass()) << rep.to_json();
    for (const auto& c : rep.claims) {
      const bool first = c.quantity == "v_z" || c.quantity == "w_z";
      const bool second = c.quantity == "v_zz" || c.quantity == "w_zz";
      if (!first && !second) continue;
      const auto row = first ? oracle::first_derivative_row(a) : oracle::second_derivative_row(a);
      EXPECT_EQ(c.shape == RateShape::continuous, row.continuous) << c.quantity << " alpha " << a;
      if (!row.continuous) {
        EXPECT_NEAR(c.p, row.p, 1e-12);
        EXPECT_NEAR(c.q, row.q, 1e-12);
      }
    }
  }
}

TEST(GeometricLimits, CriticalBranch) {
  const auto lim = verify_geometric_limits(nitsche_family(1.0).metric(), -4.0, 1.0);
  EXPECT_NEAR(std::abs(lim.a.extrapolated - oracle::limit_scaled_density(1.0, -4.0)), 0.0, 1e-2);
  EXPECT_NEAR(std::abs(lim.b.extrapolated - oracle::limit_connection(1.0)), 0.0, 1e-2);
  EXPECT_NEAR(std::abs(lim.c.extrapolated - oracle::limit_schwarzian(1.0)), 0.0, 1e-2);
}

TEST(Wachstum, PuncturedDiskIsZeroAndCriticalIsBounded) {
  const auto pd = hyperbolic_punctured_disk(4.0);
  auto w0 = wachstum_check(pd.u, pd.kappa.kappa);
  EXPECT_TRUE(w0.identically_zero);
  const auto nc = nitsche_family(1.0);
  auto w1 = wachstum_check(nc.u, nc.kappa.kappa);
  EXPECT_EQ(w1.verdict, Verdict::pass);
  for (std::size_t k = 0; k < w1.radii.size(); ++k) {
    EXPECT_NEAR(w1.bound[k], oracle::wachstum_critical(-std::log(w1.radii[k])), 1e-6);
  }
  EXPECT_NEAR(w1.limit, oracle::kWachstumLimit, 0.1);
}

TEST(Continuity, CriticalLimitAndNegativeControl) {
  const auto nc = nitsche_family(1.0);
  const auto ok = critical_continuity_check(nc.u, nc.kappa.kappa);
  EXPECT_EQ(ok.verdict, Verdict::pass);
  EXPECT_NEAR(ok.w_limit, oracle::critical_w_limit(-4.0), 6e-2);
  const auto bk = counterexample("alpha1-bounded-kappa");
  EXPECT_EQ(critical_continuity_check(bk.u, bk.kappa.kappa).verdict, Verdict::fail);
}

TEST(CircleStats, MeanAndOscillation) {
  auto f = [](Complex z) { return 1.0 + z.real(); };
  const auto [mean, osc] = circle_mean_and_oscillation(f, 0.5, 64);
  EXPECT_NEAR(mean, 1.0, 1e-14);
  EXPECT_NEAR(osc, std::cos(M_PI / 64), 1e-12);  // samples sit at half-offset angles
}
