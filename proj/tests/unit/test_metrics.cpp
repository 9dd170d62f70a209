#include <gtest/gtest.h>

#include <cmath>

#include "curvlab/derivatives.hpp"
#include "curvlab/errors.hpp"
#include "curvlab/metrics.hpp"
#include "oracles/oracles.hpp"

using namespace curvlab;

namespace {

MetricDensity poincare() {
  return MetricDensity::from_log_density([](Complex z) { return oracle::hyperbolic_disk_u(4.0, z); },
                                         MetricDomain::disk());
}

}  // namespace

TEST(Metrics, PoincareDiskHasCurvatureMinusFour) {
  const auto m = poincare();
  for (Complex z : {Complex(0.1, 0.2), Complex(-0.5, 0.3), Complex(0.0, -0.8)}) {
    EXPECT_NEAR(curvature(m, z), -4.0, 1e-5);
  }
}

// Gamma = 2 d/dz log lambda = 2 zbar / (1 - |z|^2); S = 0 for the Poincare metric.
TEST(Metrics, ConnectionAndSchwarzian) {
  const auto m = poincare();
  const Complex z(0.3, -0.4);
  EXPECT_LT(std::abs(connection(m, z) - 2.0 * std::conj(z) / (1.0 - std::norm(z))), 1e-6);
  EXPECT_LT(std::abs(schwarzian(m, z)), 1e-4);
  EXPECT_EQ(evaluation_path(m), EvalPath::callable_stencil);
}

TEST(Metrics, ClosedConnectionIsUsed) {
  auto u = [](Complex z) { return -std::log(std::abs(z)); };
  auto uz = [](Complex z) { return -0.5 / z; };
  const auto m = MetricDensity::from_log_density(u, MetricDomain::punctured_disk(), uz);
  EXPECT_TRUE(m.has_closed_connection());
  EXPECT_EQ(evaluation_path(m), EvalPath::closed_form);
  const Complex z(0.2, 0.1);
  EXPECT_LT(std::abs(connection(m, z) + 1.0 / z), 1e-14);
}

TEST(Metrics, LiouvilleAndPullback) {
  auto f = [](Complex z) { return z * z; };
  auto fp = [](Complex z) { return 2.0 * z; };
  const auto m = liouville_metric(f, fp, MetricDomain::punctured_disk());
  const Complex z(0.4, 0.2);
  EXPECT_NEAR(m.log_lambda(z), oracle::liouville_u(z * z, 2.0 * z), 1e-13);
  EXPECT_NEAR(curvature(m, z), -4.0, 1e-5);

  // A = 4: the Poincare density is 1/(1 - |w|^2), so the pullback is the Liouville metric itself
  const auto pb = pullback(poincare(), f, fp, MetricDomain::punctured_disk());
  EXPECT_NEAR(pb.lambda(z), m.lambda(z), 1e-12);
  EXPECT_THROW(liouville_metric(f, fp, MetricDomain::punctured_disk(2.0)).lambda(Complex(1.2, 0)), RangeError);
}

TEST(Metrics, CurvatureBoundsAreChecked) {
  const auto k = CurvatureField::bounded([](Complex) { return -3.0; }, -4.0, -2.0);
  EXPECT_NO_THROW(k.check_bounds(Complex(0.1, 0)));
  EXPECT_TRUE(k.strictly_negative());
  const auto bad = CurvatureField::bounded([](Complex) { return -5.0; }, -4.0, -2.0);
  EXPECT_THROW(bad.check_bounds(Complex(0.1, 0)), ParameterError);
  EXPECT_THROW(CurvatureField::bounded([](Complex) { return -1.0; }, -1.0, -2.0), ParameterError);
}

TEST(Metrics, DomainIsEnforced) {
  const auto m = poincare();
  EXPECT_THROW(curvature(m, Complex(1.5, 0)), DomainError);
  EXPECT_FALSE(MetricDomain::punctured_disk().contains(Complex(0, 0)));
  EXPECT_TRUE(MetricDomain::disk().contains(Complex(0, 0)));
}

TEST(Metrics, GridBackedCurvature) {
  auto sup_error = [](const AnnularGrid& g) {
    const auto k = curvature_field(GridField::sample(g, [](Complex z) { return oracle::punctured_disk_u(4.0, z); }));
    double err = 0.0;
    for (int i = 1; i + 1 < g.n_radial(); ++i)
      for (int j = 0; j < g.n_angular(); ++j) err = std::max(err, std::abs(k.at(i, j) + 4.0));
    return err;
  };
  const double coarse = sup_error(AnnularGrid::build(0.05, 0.8, 65, 128));
  const double fine = sup_error(AnnularGrid::build(0.05, 0.8, 129, 256));
  EXPECT_LT(fine, 2e-2);
  EXPECT_GT(std::log2(coarse / fine), 1.7);

  const auto g = AnnularGrid::build(0.05, 0.8, 129, 256);
  const auto f = GridField::sample(g, [](Complex z) { return oracle::punctured_disk_u(4.0, z); });

  const auto m = MetricDensity::from_grid(f);
  EXPECT_EQ(evaluation_path(m), EvalPath::grid_stencil);
  EXPECT_NEAR(m.log_lambda(g.node(10, 3)), f.at(10, 3), 1e-15);
  EXPECT_THROW(m.lambda(Complex(0.3, 0.01)), DomainError);
}

// Probe length along a ray of the punctured-disk metric: int dr / (2 r L) = (1/2) log(L(r1)/L(r0)).
TEST(Metrics, CompletenessProbe) {
  const auto m = MetricDensity::from_log_density([](Complex z) { return oracle::punctured_disk_u(4.0, z); },
                                                 MetricDomain::punctured_disk());
  const std::vector<double> radii{1e-2, 1e-4, 1e-8};
  const auto len = completeness_probe(m, Complex(0.5, 0), radii);
  for (std::size_t k = 0; k < radii.size(); ++k) {
    EXPECT_NEAR(len[k], 0.5 * std::log(std::log(radii[k]) / std::log(0.5)), 1e-6);
  }
}

TEST(Derivatives, WirtingerOfAbs) {
  auto f = [](Complex z) { return 3.0 * std::abs(z); };
  const Complex z(0.3, -0.2);
  EXPECT_LT(std::abs(diff::dz(f, z) - 3.0 * std::conj(z) / (2.0 * std::abs(z))), 1e-6);
  EXPECT_THROW(diff::dz(f, z, 0.5), StepError);
  EXPECT_NEAR(diff::laplacian([](Complex w) { return std::norm(w); }, z), 4.0, 1e-7);
}
