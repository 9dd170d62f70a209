#include "curvlab/metrics.hpp"

#include <cmath>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "json.hpp"

#include "curvlab/derivatives.hpp"
#include "curvlab/errors.hpp"

namespace curvlab {

CurvatureField CurvatureField::constant(double value) {
  CurvatureField k;
  k.kappa = [value](Complex) { return value; };
  k.lower = value;
  k.upper = value;
  std::ostringstream os;
  os << "const:" << value;
  k.label = os.str();
  return k;
}

CurvatureField CurvatureField::bounded(RealFn kappa, double lower, double upper, std::string label) {
  if (lower > upper) throw ParameterError("curvature bounds must satisfy lower <= upper");
  return CurvatureField{std::move(kappa), lower, upper, std::move(label)};
}

void CurvatureField::check_bounds(Complex z) const {
  const double k = kappa(z);
  const double slack = 1e-12 * (1.0 + std::abs(k));
  if ((lower && k < *lower - slack) || (upper && k > *upper + slack)) {
    std::ostringstream os;
    os << "kappa(" << z << ") = " << k << " violates its declared bounds";
    throw ParameterError(os.str());
  }
}

bool MetricDomain::contains(Complex z) const {
  const double r = std::abs(z);
  if (r == 0.0) return !punctured && r_inner == 0.0;
  return r > r_inner && r < r_outer;
}

std::string to_string(EvalPath p) {
  switch (p) {
    case EvalPath::closed_form: return "closed-form";
    case EvalPath::callable_stencil: return "callable-stencil";
    case EvalPath::grid_stencil: return "grid-stencil";
  }
  return "unknown";
}

MetricDensity MetricDensity::from_log_density(RealFn u, MetricDomain domain, ComplexFn u_z) {
  MetricDensity m;
  m.u_ = std::move(u);
  m.u_z_ = std::move(u_z);
  m.domain_ = domain;
  return m;
}

MetricDensity MetricDensity::from_density(RealFn lambda, MetricDomain domain) {
  MetricDensity m;
  m.u_ = [lambda = std::move(lambda)](Complex z) {
    const double l = lambda(z);
    if (!(l > 0.0) || !std::isfinite(l)) throw EvaluationError("metric density must be positive and finite");
    return std::log(l);
  };
  m.domain_ = domain;
  return m;
}

MetricDensity MetricDensity::from_grid(GridField log_lambda) {
  MetricDensity m;
  m.grid_ = std::make_shared<const GridField>(std::move(log_lambda));
  const AnnularGrid& g = m.grid_->grid();
  m.domain_ = MetricDomain::annulus(g.r_min() * (1 - 1e-12), g.r_max() * (1 + 1e-12));
  auto grid = m.grid_;
  m.u_ = [grid](Complex z) {
    const AnnularGrid& gg = grid->grid();
    const double s = std::log(std::abs(z));
    const int i = static_cast<int>(std::lround((s - gg.s(0)) / gg.h_s()));
    double t = std::arg(z);
    if (t < 0) t += 2.0 * M_PI;
    const int j = static_cast<int>(std::lround(t / gg.h_theta()));
    if (i < 0 || i >= gg.n_radial() || std::abs(gg.node(i, j) - z) > 1e-12 * std::abs(z)) {
      throw DomainError("grid-backed metric is only defined at grid nodes");
    }
    return grid->at(i, j);
  };
  return m;
}

const GridField& MetricDensity::grid_field() const {
  if (!grid_) throw EvaluationError("metric is not grid-backed");
  return *grid_;
}

std::pair<int, int> MetricDensity::grid_node(Complex z) const {
  const AnnularGrid& g = grid_field().grid();
  const int i = static_cast<int>(std::lround((std::log(std::abs(z)) - g.s(0)) / g.h_s()));
  double t = std::arg(z);
  if (t < 0) t += 2.0 * M_PI;
  const int j = g.wrap(static_cast<int>(std::lround(t / g.h_theta())));
  if (i < 0 || i >= g.n_radial() || std::abs(g.node(i, j) - z) > 1e-12 * std::max(1.0, std::abs(z))) {
    throw DomainError("point is not a node of the metric's grid");
  }
  return {i, j};
}

double MetricDensity::log_lambda(Complex z) const {
  if (!domain_.contains(z)) {
    std::ostringstream os;
    os << "point " << z << " outside the metric's domain";
    throw DomainError(os.str());
  }
  return u_(z);
}

double MetricDensity::lambda(Complex z) const { return std::exp(log_lambda(z)); }

EvalPath evaluation_path(const MetricDensity& m) {
  if (m.is_grid()) return EvalPath::grid_stencil;
  return m.has_closed_connection() ? EvalPath::closed_form : EvalPath::callable_stencil;
}

namespace {

// Cartesian fallback for the centre of a disk, where log-polar steps degenerate.
double cartesian_laplacian(const RealFn& f, Complex z) {
  auto five = [&](double h) {
    const Complex I(0, 1);
    return (f(z + h) + f(z - h) + f(z + I * h) + f(z - I * h) - 4.0 * f(z)) / (h * h);
  };
  const double h = 1e-3;
  return (4.0 * five(0.5 * h) - five(h)) / 3.0;
}

double log_density_laplacian(const MetricDensity& m, Complex z) {
  const RealFn& u = m.log_density_fn();
  if (std::abs(z) < 1e-6) return cartesian_laplacian(u, z);
  return diff::laplacian(u, z, diff::laplacian_log_step(std::abs(z), m.domain().r_outer));
}

bool regular_at_origin(const MetricDensity& m) { return !m.domain().punctured && m.domain().r_inner == 0.0; }

Complex numeric_connection(const MetricDensity& m, Complex z, double h) {
  const RealFn& u = m.log_density_fn();
  return 2.0 * diff::dz(u, z, h, !regular_at_origin(m));
}

}  // namespace

double curvature(const MetricDensity& m, Complex z) {
  if (m.is_grid()) {
    const auto [i, j] = m.grid_node(z);
    const GridField k = curvature_field(m.grid_field());
    return k.at(i, j);
  }
  const double u = m.log_lambda(z);
  if (std::exp(u) == 0.0) throw EvaluationError("metric density underflows to 0");
  const double e = std::exp(-2.0 * u);
  if (!std::isfinite(e)) throw EvaluationError("metric density underflows to 0");
  return -log_density_laplacian(m, z) * e;
}

Complex connection(const MetricDensity& m, Complex z) {
  if (m.is_grid()) {
    const auto [i, j] = m.grid_node(z);
    return connection_field(m.grid_field())[m.grid_field().grid().index(i, j)];
  }
  if (!m.domain().contains(z)) throw DomainError("point outside the metric's domain");
  if (m.has_closed_connection()) return 2.0 * m.closed_log_density_z(z);
  return numeric_connection(m, z, 0.0);
}

Complex schwarzian(const MetricDensity& m, Complex z) {
  if (m.is_grid()) {
    const auto [i, j] = m.grid_node(z);
    return schwarzian_field(m.grid_field())[m.grid_field().grid().index(i, j)];
  }
  if (!m.domain().contains(z)) throw DomainError("point outside the metric's domain");
  const bool singular = !regular_at_origin(m);
  if (m.has_closed_connection()) {
    auto gamma = [&](Complex w) { return 2.0 * m.closed_log_density_z(w); };
    const Complex g = gamma(z);
    return diff::dz(gamma, z, 0.0, singular) - 0.5 * g * g;
  }
  // nested stencils, inner step a tenth of the outer one
  const double outer = std::max(diff::kSecondRelativeStep * std::abs(z), singular ? 0.0 : 1e-4);
  const double inner = outer / 10.0;
  auto gamma = [&](Complex w) { return numeric_connection(m, w, inner); };
  const Complex g = numeric_connection(m, z, inner);
  return diff::dz(gamma, z, outer, singular) - 0.5 * g * g;
}

GridField curvature_field(const GridField& log_lambda) {
  const GridField lap = apply_laplacian(log_lambda);
  std::vector<double> k(lap.values().size());
  for (std::size_t n = 0; n < k.size(); ++n) {
    k[n] = -lap.values()[n] * std::exp(-2.0 * log_lambda.values()[n]);
  }
  return GridField(log_lambda.grid(), std::move(k), true);
}

std::vector<Complex> connection_field(const GridField& log_lambda) {
  std::vector<Complex> g = grid_dz(log_lambda);
  for (auto& v : g) v *= 2.0;
  return g;
}

std::vector<Complex> schwarzian_field(const GridField& log_lambda) {
  const std::vector<Complex> gamma = connection_field(log_lambda);
  std::vector<double> re(gamma.size()), im(gamma.size());
  for (std::size_t n = 0; n < gamma.size(); ++n) {
    re[n] = gamma[n].real();
    im[n] = gamma[n].imag();
  }
  const auto dre = grid_dz(GridField(log_lambda.grid(), std::move(re)));
  const auto dim = grid_dz(GridField(log_lambda.grid(), std::move(im)));
  std::vector<Complex> s(gamma.size());
  for (std::size_t n = 0; n < s.size(); ++n) {
    s[n] = dre[n] + Complex(0, 1) * dim[n] - 0.5 * gamma[n] * gamma[n];
  }
  return s;
}

MetricDensity pullback(const MetricDensity& m, ComplexFn f, ComplexFn fprime, MetricDomain new_domain) {
  if (m.is_grid()) throw EvaluationError("pullback needs a closed-form metric");
  auto u = [m, f = std::move(f), fprime = std::move(fprime)](Complex z) {
    const Complex w = f(z);
    if (!m.domain().contains(w)) {
      std::ostringstream os;
      os << "pullback map sends " << z << " to " << w << ", outside the metric's domain";
      throw RangeError(os.str());
    }
    const double d = std::abs(fprime(z));
    if (d == 0.0) throw CriticalPointError("f' vanishes: pullback degenerates");
    return m.log_lambda(w) + std::log(d);
  };
  return MetricDensity::from_log_density(std::move(u), new_domain);
}

MetricDensity liouville_metric(ComplexFn f, ComplexFn fprime, MetricDomain domain) {
  // probe a circle inside the domain so degenerate maps fail at construction
  const double r_probe = domain.r_inner > 0.0 ? std::sqrt(domain.r_inner * domain.r_outer) : 0.5 * domain.r_outer;
  for (int k = 0; k < 8; ++k) {
    if (fprime(std::polar(r_probe, 2.0 * M_PI * k / 8.0)) == Complex(0.0, 0.0)) {
      throw CriticalPointError("liouville_metric needs f' != 0");
    }
  }
  auto u = [f = std::move(f), fprime = std::move(fprime)](Complex z) {
    const double a = std::abs(f(z));
    if (a >= 1.0) throw RangeError("liouville_metric needs |f| < 1");
    const double d = std::abs(fprime(z));
    if (d == 0.0) throw CriticalPointError("liouville_metric needs f' != 0");
    return std::log(d) - std::log1p(-a * a);
  };
  return MetricDensity::from_log_density(std::move(u), domain);
}

std::vector<double> completeness_probe(const MetricDensity& m, Complex z0, const std::vector<double>& radii) {
  using boost::math::quadrature::gauss_kronrod;
  const double r0 = std::abs(z0);
  const double t0 = std::arg(z0);
  std::vector<double> out;
  out.reserve(radii.size());
  double upper = r0;
  double total = 0.0;
  for (double r : radii) {
    if (!(r > 0.0) || r > upper) throw DomainError("probe radii must be positive and decreasing from |z0|");
    // integrate lambda(e^s e^{i t0}) e^s ds
    auto integrand = [&](double s) {
      const double v = std::exp(m.log_lambda(std::polar(std::exp(s), t0)) + s);
      if (!std::isfinite(v)) throw EvaluationError("density not finite along the probe ray");
      return v;
    };
    if (r < upper) {
      double err = 0.0;
      const double piece = gauss_kronrod<double, 31>::integrate(integrand, std::log(r), std::log(upper), 12, 1e-12, &err);
      if (!std::isfinite(piece)) throw EvaluationError("probe quadrature failed");
      total += piece;
    }
    out.push_back(total);
    upper = r;
  }
  return out;
}

std::string MetricRecord::to_json() const {
  nlohmann::ordered_json j;
  j["z_re"] = z.real();
  j["z_im"] = z.imag();
  j["lambda"] = lambda;
  j["kappa"] = kappa;
  j["gamma_re"] = gamma.real();
  j["gamma_im"] = gamma.imag();
  j["s_re"] = s.real();
  j["s_im"] = s.imag();
  j["method"] = curvlab::to_string(method);
  return j.dump();
}

MetricRecord evaluate_metric(const MetricDensity& m, Complex z) {
  MetricRecord rec;
  rec.z = z;
  rec.lambda = m.lambda(z);
  rec.kappa = curvature(m, z);
  rec.gamma = connection(m, z);
  rec.s = schwarzian(m, z);
  rec.method = evaluation_path(m);
  return rec;
}

}  // namespace curvlab
