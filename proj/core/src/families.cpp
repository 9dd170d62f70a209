#include "curvlab/families.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "curvlab/derivatives.hpp"
#include "curvlab/errors.hpp"

namespace curvlab {

namespace {

constexpr double kE = std::numbers::e;

double log_abs(Complex z) { return std::log(std::abs(z)); }
// L = log(1/|z|)
double big_l(Complex z) { return -log_abs(z); }

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw ParameterError(std::string(name) + " must be positive and finite");
  }
}

void attach_critical_u_z(ClosedFormSolution& s) {
  // u = -log|z| - log L + w
  auto wz = s.remainder_z;
  s.u_z = [wz](Complex z) {
    const double L = big_l(z);
    return -1.0 / (2.0 * z) + 1.0 / (2.0 * z * L) + wz(z);
  };
}

void attach_subcritical_u_z(ClosedFormSolution& s) {
  auto vz = s.remainder_z;
  const double a = s.alpha;
  s.u_z = [vz, a](Complex z) { return -a / (2.0 * z) + vz(z); };
}

ClosedFormSolution quarantine_if_residual_fails(ClosedFormSolution s) {
  s.quarantined = residual_sup(s, 16, 1e-3, 0.9, 11) > 1e-4;
  return s;
}

}  // namespace

MetricDensity ClosedFormSolution::metric() const {
  return MetricDensity::from_log_density(u, MetricDomain::punctured_disk(outer_radius), u_z);
}

ClosedFormSolution hyperbolic_disk(double A) {
  require_positive(A, "A");
  ClosedFormSolution s;
  s.id = "hyperbolic-disk";
  s.citation = "hyperbolic metric of the unit disk with constant curvature -A";
  s.alpha = 0.0;
  const double c = std::log(2.0 / std::sqrt(A));
  s.u = [c](Complex z) { return c - std::log1p(-std::norm(z)); };
  s.kappa = CurvatureField::constant(-A);
  s.kappa_at_zero = -A;
  s.remainder = s.u;
  s.remainder_z = [](Complex z) { return std::conj(z) / (1.0 - std::norm(z)); };
  s.remainder_zz = [](Complex z) {
    const Complex zb = std::conj(z);
    const double d = 1.0 - std::norm(z);
    return zb * zb / (d * d);
  };
  s.remainder_z_limit = Complex(0.0);
  s.remainder_zz_limit = Complex(0.0);
  s.u_z = s.remainder_z;
  return s;
}

ClosedFormSolution hyperbolic_punctured_disk(double A) {
  require_positive(A, "A");
  ClosedFormSolution s;
  s.id = "hyperbolic-punctured-disk";
  s.citation = "maximal solution of Delta nu = A e^{2 nu} on the punctured disk";
  s.alpha = 1.0;
  const double c = -0.5 * std::log(A);
  s.u = [c](Complex z) { return c + big_l(z) - std::log(big_l(z)); };
  s.kappa = CurvatureField::constant(-A);
  s.kappa_at_zero = -A;
  s.remainder = [c](Complex) { return c; };
  s.remainder_z = [](Complex) { return Complex(0.0); };
  s.remainder_zz = [](Complex) { return Complex(0.0); };
  s.remainder_z_limit = Complex(0.0);
  s.remainder_zz_limit = Complex(0.0);
  attach_critical_u_z(s);
  return s;
}

ClosedFormSolution supersolution_family(double alpha, double A) {
  if (!(alpha < 1.0)) {
    throw ParameterError("supersolution_family needs alpha < 1; use hyperbolic_punctured_disk for alpha = 1");
  }
  require_positive(A, "A");
  ClosedFormSolution s;
  s.id = "supersolution";
  s.citation = "supersolution family u_alpha^A of the classification proof";
  s.alpha = alpha;
  const double b = 1.0 - alpha;
  const double c = std::log(2.0 * b / std::sqrt(A));
  // v = c - log(1 - |z|^{2b}); t = |z|^{2b}
  s.remainder = [c, b](Complex z) { return c - std::log(-std::expm1(2.0 * b * log_abs(z))); };
  s.u = [c, b, alpha](Complex z) {
    const double lr = log_abs(z);
    return -alpha * lr + c - std::log(-std::expm1(2.0 * b * lr));
  };
  s.remainder_z = [b](Complex z) {
    const double lr = log_abs(z);
    const double t = std::exp(2.0 * b * lr);
    const double one_minus_t = -std::expm1(2.0 * b * lr);
    return b * t / (z * one_minus_t);
  };
  s.remainder_zz = [b, alpha](Complex z) {
    const double lr = log_abs(z);
    const double t = std::exp(2.0 * b * lr);
    const double one_minus_t = -std::expm1(2.0 * b * lr);
    return b * t * (t - alpha) / (z * z * one_minus_t * one_minus_t);
  };
  s.kappa = CurvatureField::constant(-A);
  s.kappa_at_zero = -A;
  if (alpha < 0.5) s.remainder_z_limit = Complex(0.0);
  if (alpha <= 0.0) s.remainder_zz_limit = Complex(0.0);
  attach_subcritical_u_z(s);
  return s;
}

ClosedFormSolution subsolution_family(double alpha, double a, double R) {
  if (alpha > 1.0) throw ParameterError("subsolution_family needs alpha <= 1");
  require_positive(a, "a");
  if (!(R > 1.0)) throw ParameterError("subsolution_family needs R > 1");
  const ClosedFormSolution base = alpha < 1.0 ? supersolution_family(alpha, a) : hyperbolic_punctured_disk(a);
  ClosedFormSolution s;
  s.id = "subsolution";
  s.citation = "rescaled solutions u^a_{alpha,R}(z) = u^a_alpha(z/R) + log(1/R)";
  s.alpha = alpha;
  s.outer_radius = R;
  const double logR = std::log(R);
  const RealFn bu = base.u;
  s.u = [bu, R, logR](Complex z) { return bu(z / R) - logR; };
  s.kappa = CurvatureField::constant(-a);
  s.kappa_at_zero = -a;
  const ComplexFn buz = base.u_z;
  s.u_z = [buz, R](Complex z) { return buz(z / R) / R; };
  if (alpha < 1.0) {
    const RealFn bv = base.remainder;
    const ComplexFn bvz = base.remainder_z;
    const ComplexFn bvzz = base.remainder_zz;
    s.remainder = [bv, R, logR, alpha](Complex z) { return bv(z / R) + (alpha - 1.0) * logR; };
    s.remainder_z = [bvz, R](Complex z) { return bvz(z / R) / R; };
    s.remainder_zz = [bvzz, R](Complex z) { return bvzz(z / R) / (R * R); };
  } else {
    const double c = -0.5 * std::log(a);
    // w = c + log(L / (L + log R))
    s.remainder = [c, logR](Complex z) {
      const double L = big_l(z);
      return c - std::log1p(logR / L);
    };
    s.remainder_z = [logR](Complex z) {
      const double L = big_l(z);
      return -1.0 / (2.0 * z * L) + 1.0 / (2.0 * z * (L + logR));
    };
  }
  return s;
}

namespace {

ClosedFormSolution nitsche_nonpositive(double alpha) {
  // pullback of the order-alpha solution under f(z) = (2z + z^2)/4
  ClosedFormSolution s;
  s.id = "nitsche-nonpositive";
  s.citation = "explicit C^2 solutions of Delta u = 4 e^{2u}, branch alpha <= 0";
  s.alpha = alpha;
  const double b = 1.0 - alpha;
  const double c = std::log(b);
  s.remainder = [alpha, b, c](Complex z) {
    const Complex h = z * (2.0 + z) / 4.0;
    return c - alpha * std::log(std::abs(2.0 + z) / 4.0) - std::log(-std::expm1(2.0 * b * std::log(std::abs(h)))) +
           std::log(std::abs(1.0 + z) / 2.0);
  };
  const RealFn v = s.remainder;
  s.u = [v, alpha](Complex z) { return -alpha * log_abs(z) + v(z); };
  s.remainder_z = [alpha, b](Complex z) {
    const Complex h = z * (2.0 + z) / 4.0;
    const double lh = std::log(std::abs(h));
    const double T = std::exp(2.0 * b * lh);
    const double one_minus_T = -std::expm1(2.0 * b * lh);
    const Complex q = 2.0 * (1.0 + z) / (z * (2.0 + z));
    return -alpha / (2.0 * (2.0 + z)) + b * T * q / one_minus_T + 1.0 / (2.0 * (1.0 + z));
  };
  s.remainder_zz = [alpha, b](Complex z) {
    const Complex h = z * (2.0 + z) / 4.0;
    const double lh = std::log(std::abs(h));
    const double T = std::exp(2.0 * b * lh);
    const double one_minus_T = -std::expm1(2.0 * b * lh);
    const Complex q = 2.0 * (1.0 + z) / (z * (2.0 + z));
    const Complex p2 = (2.0 + z) * (2.0 + z);
    const Complex p1 = (1.0 + z) * (1.0 + z);
    return alpha / (2.0 * p2) - 1.0 / (2.0 * p1) +
           b * T / one_minus_T * (q * q * (T - alpha) / one_minus_T + 1.0 / (2.0 * h));
  };
  s.remainder_z_limit = Complex(0.5 - alpha / 4.0);
  s.remainder_zz_limit = Complex(-0.5 + alpha / 8.0);
  s.kappa = CurvatureField::constant(-4.0);
  s.kappa_at_zero = -4.0;
  attach_subcritical_u_z(s);
  return quarantine_if_residual_fails(std::move(s));
}

}  // namespace

ClosedFormSolution nitsche_family(double alpha) {
  if (!(alpha <= 1.0)) throw ParameterError("nitsche_family needs alpha <= 1");
  if (alpha <= 0.0) return nitsche_nonpositive(alpha);
  if (alpha < 1.0) {
    ClosedFormSolution s = supersolution_family(alpha, 4.0);
    s.id = "nitsche-subcritical";
    s.citation = "explicit C^2 solutions of Delta u = 4 e^{2u}, branch 0 < alpha < 1";
    return s;
  }
  ClosedFormSolution s;
  s.id = "nitsche-critical";
  s.citation = "explicit C^2 solutions of Delta u = 4 e^{2u}, branch alpha = 1";
  s.alpha = 1.0;
  s.u = [](Complex z) {
    const double L = big_l(z);
    return -std::log(2.0) + L - std::log1p(L);
  };
  s.remainder = [](Complex z) { return -std::log(2.0) - std::log1p(1.0 / big_l(z)); };
  s.remainder_z = [](Complex z) {
    const double L = big_l(z);
    return -1.0 / (2.0 * z * L * (1.0 + L));
  };
  s.remainder_zz = [](Complex z) {
    const double L = big_l(z);
    return (2.0 * L * L - 1.0) / (4.0 * z * z * L * L * (1.0 + L) * (1.0 + L));
  };
  s.kappa = CurvatureField::constant(-4.0);
  s.kappa_at_zero = -4.0;
  attach_critical_u_z(s);
  return s;
}

std::vector<std::string> counterexample_ids() {
  return {"maxprin-superharmonic", "maxprin-order-infty",        "alpha1-bounded-kappa", "alpha-half-sharp",
          "alpha-half-continuous-kappa", "alpha1-holder-rate", "kappa-unbounded"};
}

ClosedFormSolution counterexample(const std::string& id, double beta) {
  ClosedFormSolution s;
  s.id = id;
  s.within_rate_hypotheses = false;
  if (id == "maxprin-superharmonic") {
    s.citation = "comparison fails without subharmonicity of u2 (kappa = 0)";
    s.alpha = 0.0;
    s.u = [](Complex) { return 0.0; };
    s.kappa = CurvatureField::constant(0.0);
    s.kappa_at_zero = 0.0;
    s.remainder = s.u;
    s.remainder_z = [](Complex) { return Complex(0.0); };
    s.remainder_zz = [](Complex) { return Complex(0.0); };
    s.u_z = s.remainder_z;
    ComparisonPair p;
    p.u1 = s.u;
    p.u2 = [](Complex z) {
      const double r = std::abs(z);
      return -(z.real() / r + 1.0) * std::pow(r, -1.5) * big_l(z);
    };
    s.pair = p;
  } else if (id == "maxprin-order-infty") {
    s.citation = "comparison fails when u2 has infinite order (kappa = -e^2)";
    s.alpha = 1.0;
    s.u = [](Complex z) {
      const double L = big_l(z);
      return -1.0 + L - std::log1p(L);
    };
    s.kappa = CurvatureField::constant(-kE * kE);
    s.kappa_at_zero = -kE * kE;
    s.remainder = [](Complex z) { return -1.0 - std::log1p(1.0 / big_l(z)); };
    s.remainder_z = [](Complex z) {
      const double L = big_l(z);
      return -1.0 / (2.0 * z * L * (1.0 + L));
    };
    attach_critical_u_z(s);
    s.within_rate_hypotheses = true;
    ComparisonPair p;
    p.u1 = s.u;
    p.u2 = [](Complex z) { return z.real() / std::norm(z); };
    s.pair = p;
  } else if (id == "alpha1-bounded-kappa") {
    s.citation = "bounded but discontinuous kappa and w, built from sin(log log(1/|z|))";
    s.alpha = 1.0;
    s.remainder = [](Complex z) {
      const double sb = std::sin(std::log(big_l(z)));
      return 2.0 + sb / (6.0 + sb);
    };
    const RealFn w = s.remainder;
    s.u = [w](Complex z) {
      const double L = big_l(z);
      return L - std::log(L) + w(z);
    };
    s.kappa.kappa = [](Complex z) {
      const double bt = std::log(big_l(z));
      const double sb = std::sin(bt), cb = std::cos(bt);
      const double d = 6.0 + sb;
      return (6.0 * (sb + cb) / (d * d) + 12.0 * cb * cb / (d * d * d) - 1.0) * std::exp(-6.0 + 12.0 / d);
    };
    s.kappa.label = id;
    s.remainder_z = [](Complex z) {
      const double L = big_l(z);
      const double bt = std::log(L);
      const double d = 6.0 + std::sin(bt);
      return 6.0 * std::cos(bt) / (d * d) * (-1.0 / (2.0 * z * L));
    };
    attach_critical_u_z(s);
  } else if (id == "alpha-half-sharp") {
    s.citation = "order 1/2 solution with v_z of exact size log(1/|z|)";
    s.alpha = 0.5;
    s.remainder = [](Complex z) { return std::abs(z.real()) * log_abs(z) + 4.0 * std::abs(z); };
    const RealFn v = s.remainder;
    s.u = [v](Complex z) { return -0.5 * log_abs(z) + v(z); };
    s.kappa = CurvatureField::bounded(
        [](Complex z) {
          const double r = std::abs(z), ax = std::abs(z.real());
          return -(4.0 + 2.0 * ax / r) * std::exp(-2.0 * (ax * std::log(r) + 4.0 * r));
        },
        -6.0 * kE, -4.0 * std::exp(-8.0), id);
    s.remainder_z = [](Complex z) {
      const double r = std::abs(z), x = z.real();
      const double sgn = x > 0 ? 1.0 : (x < 0 ? -1.0 : 0.0);
      return std::abs(x) / (2.0 * z) + 2.0 * std::conj(z) / r - 0.5 * sgn * big_l(z);
    };
    s.smooth_at = [](Complex z) { return std::abs(z.real()) > 0.05 * std::abs(z); };
    attach_subcritical_u_z(s);
  } else if (id == "alpha-half-continuous-kappa") {
    s.citation = "order 1/2 solution with continuous, non-Hoelder kappa and unbounded v_z";
    s.alpha = 0.5;
    s.remainder = [](Complex z) { return z.real() * std::log1p(big_l(z)) + 4.0 * std::abs(z); };
    const RealFn v = s.remainder;
    s.u = [v](Complex z) { return -0.5 * log_abs(z) + v(z); };
    s.kappa.kappa = [](Complex z) {
      const double r = std::abs(z), x = z.real(), lr = std::log(r);
      return -(4.0 + x / r * (-3.0 + 2.0 * lr) / ((1.0 - lr) * (1.0 - lr))) *
             std::exp(-2.0 * (x * std::log1p(-lr) + 4.0 * r));
    };
    s.kappa.label = id;
    s.kappa_at_zero = -4.0;
    s.remainder_z = [](Complex z) {
      const double r = std::abs(z), x = z.real();
      const double el = 1.0 + big_l(z);  // log(e/|z|)
      return 2.0 * std::conj(z) / r - 0.5 * x * std::conj(z) / (r * r * el) + 0.5 * std::log(el);
    };
    attach_subcritical_u_z(s);
  } else if (id == "alpha1-holder-rate") {
    require_positive(beta, "beta");
    std::ostringstream os;
    os << "continuous kappa with w = (log(1/|z|))^{-beta}, beta = " << beta;
    s.citation = os.str();
    s.alpha = 1.0;
    s.remainder = [beta](Complex z) { return std::pow(big_l(z), -beta); };
    s.u = [beta](Complex z) {
      const double L = big_l(z);
      return L - std::log(L) + std::pow(L, -beta);
    };
    s.kappa.kappa = [beta](Complex z) {
      const double Lb = std::pow(big_l(z), -beta);
      return -std::exp(-2.0 * Lb) * (1.0 + beta * (1.0 + beta) * Lb);
    };
    s.kappa.label = id;
    s.kappa_at_zero = -1.0;
    s.remainder_z = [beta](Complex z) { return beta / (2.0 * z) * std::pow(big_l(z), -beta - 1.0); };
    s.remainder_zz = [beta](Complex z) {
      const double L = big_l(z);
      return -beta / (2.0 * z * z) * std::pow(L, -beta - 1.0) + beta * (beta + 1.0) / (4.0 * z * z) * std::pow(L, -beta - 2.0);
    };
    attach_critical_u_z(s);
  } else if (id == "kappa-unbounded") {
    s.citation = "solution with kappa -> -infinity at the puncture";
    s.alpha = 0.5;
    s.remainder = [](Complex z) { return -0.5 * std::log1p(big_l(z)); };
    s.u = [](Complex z) { return -0.5 * log_abs(z) - 0.5 * std::log1p(big_l(z)); };
    s.kappa.kappa = [](Complex z) { return -1.0 / (std::abs(z) * (2.0 - 2.0 * log_abs(z))); };
    s.kappa.label = id;
    s.remainder_z = [](Complex z) { return 1.0 / (4.0 * z * (1.0 + big_l(z))); };
    attach_subcritical_u_z(s);
  } else {
    throw UnknownIdError("unknown catalog id '" + id + "'");
  }
  return s;
}

std::vector<CatalogEntry> catalog() {
  std::vector<CatalogEntry> out;
  auto add = [&](const ClosedFormSolution& s, std::string params) {
    out.push_back({s.id, s.alpha, s.citation, s.has_closed_derivatives(), s.quarantined, std::move(params)});
  };
  add(hyperbolic_disk(4.0), "A=4");
  add(hyperbolic_punctured_disk(4.0), "A=4");
  add(supersolution_family(0.5, 4.0), "alpha=0.5,A=4");
  add(subsolution_family(0.5, 4.0, 2.0), "alpha=0.5,a=4,R=2");
  add(nitsche_family(-1.0), "alpha=-1");
  add(nitsche_family(0.5), "alpha=0.5");
  add(nitsche_family(1.0), "alpha=1");
  for (const auto& id : counterexample_ids()) add(counterexample(id), id == "alpha1-holder-rate" ? "beta=1" : "");
  return out;
}

ClosedFormSolution lookup(const std::string& id, const FamilyParams& p) {
  auto alpha_or = [&](double d) { return p.alpha.value_or(d); };
  if (id == "hyperbolic-disk") return hyperbolic_disk(p.A.value_or(4.0));
  if (id == "hyperbolic-punctured-disk") return hyperbolic_punctured_disk(p.A.value_or(4.0));
  if (id == "supersolution") return supersolution_family(alpha_or(0.5), p.A.value_or(4.0));
  if (id == "subsolution") return subsolution_family(alpha_or(0.5), p.a.value_or(4.0), p.R.value_or(2.0));
  if (id == "nitsche") return nitsche_family(alpha_or(1.0));
  if (id == "nitsche-nonpositive") {
    if (alpha_or(-1.0) > 0.0) throw ParameterError("nitsche-nonpositive needs alpha <= 0");
    return nitsche_family(alpha_or(-1.0));
  }
  if (id == "nitsche-subcritical") {
    const double a = alpha_or(0.5);
    if (!(a > 0.0 && a < 1.0)) throw ParameterError("nitsche-subcritical needs 0 < alpha < 1");
    return nitsche_family(a);
  }
  if (id == "nitsche-critical") {
    if (alpha_or(1.0) != 1.0) throw ParameterError("nitsche-critical has alpha = 1");
    return nitsche_family(1.0);
  }
  return counterexample(id, p.beta.value_or(1.0));
}

std::vector<ClosedFormSolution> catalog_instances() {
  std::vector<ClosedFormSolution> out;
  for (const auto& e : catalog()) out.push_back(lookup(e.id));
  return out;
}

double residual_sup(const ClosedFormSolution& sol, int count, double r_lo, double r_hi, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ls(std::log(r_lo), std::log(r_hi));
  std::uniform_real_distribution<double> th(0.0, 2.0 * std::numbers::pi);
  double worst = 0.0;
  int taken = 0;
  while (taken < count) {
    const Complex z = std::polar(std::exp(ls(rng)), th(rng));
    if (!sol.is_smooth_at(z)) continue;
    ++taken;
    const double h = diff::laplacian_log_step(std::abs(z), sol.outer_radius);
    const double res = diff::laplacian(sol.u, z, h) + sol.kappa(z) * std::exp(2.0 * sol.u(z));
    worst = std::max(worst, std::abs(res));
  }
  return worst;
}

}  // namespace curvlab
