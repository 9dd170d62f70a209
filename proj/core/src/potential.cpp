#include "curvlab/potential.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/gauss.hpp>

#include "json.hpp"

#include "curvlab/asymptotics.hpp"
#include "curvlab/errors.hpp"

namespace curvlab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * kPi;
constexpr double kHessianRadius = 3.0;
constexpr double kTiny = 1e-70;  // below this the 0-centred kernel underflows; the measure is negligible
constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kAbsFloor = 1e-14;  // roundoff of log near |x| = 1
constexpr int kMaxDepth = 40;

// Integral value with the integral of its absolute integrand; tolerances are taken
// against the latter so integrals that cancel to zero still terminate.
struct Sample {
  double v = 0.0;
  double m = 0.0;
};

using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
using Gauss = boost::math::quadrature::gauss<double, 15>;

template <class F>
Sample gk_rule(F& f, double a, double b, double& err) {
  const auto& x = GK::abscissa();
  const auto& wk = GK::weights();
  const auto& wg = Gauss::weights();
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  const Sample f0 = f(c);
  double k = f0.v * wk[0], g = f0.v * wg[0], m = f0.m * wk[0];
  for (std::size_t i = 1; i < x.size(); ++i) {
    const Sample fp = f(c + h * x[i]), fm = f(c - h * x[i]);
    k += (fp.v + fm.v) * wk[i];
    m += (fp.m + fm.m) * wk[i];
    if (i % 2 == 0) g += (fp.v + fm.v) * wg[i / 2];
  }
  err = std::abs(k - g) * h;
  return {k * h, m * h};
}

template <class F>
Sample gk_panel(F& f, double a, double b, const Sample& whole, double e, double abs_tol, int depth, double& err) {
  if (e <= abs_tol || depth == 0) {
    err += e;
    return whole;
  }
  const double mid = 0.5 * (a + b);
  double el = 0.0, er = 0.0;
  const Sample left = gk_rule(f, a, mid, el), right = gk_rule(f, mid, b, er);
  const Sample l = gk_panel(f, a, mid, left, el, 0.5 * abs_tol, depth - 1, err);
  const Sample r = gk_panel(f, mid, b, right, er, 0.5 * abs_tol, depth - 1, err);
  return {l.v + r.v, l.m + r.m};
}

template <class F>
Sample gk_adaptive(F f, double a, double b, double rel_tol, double& err) {
  double e = 0.0;
  const Sample whole = gk_rule(f, a, b, e);
  return gk_panel(f, a, b, whole, e, rel_tol * whole.m + kAbsFloor * (b - a), kMaxDepth, err);
}

enum class Kernel { log, gradient, hessian };

class Engine {
public:
  Engine(const PotentialSpec& spec, const QuadratureOptions& opt, Complex z, Kernel kind, int l, int j)
      : spec_(spec), opt_(opt), z_(z), kind_(kind), l_(l), j_(j), abs_z_(std::abs(z)) {}

  PotentialValue run() {
    double total = 0.0;
    const bool hess = kind_ == Kernel::hessian;
    dz_ = hess ? spec_.density(z_) : 0.0;
    if (abs_z_ == 0.0) {
      total += hess ? centred_hessian() : weighted_inner(spec_.r);
    } else {
      delta_ = 0.5 * std::min(abs_z_, spec_.r - abs_z_);
      const double r1 = abs_z_ - delta_, r2 = abs_z_ + delta_;
      total += near_disk();
      total += weighted_inner(r1);
      total += band(true);
      total += radial(r2, spec_.r, true);
      if (hess) {
        total += radial(0.0, r1, false);
        total += band(false);
        total += radial(r2, spec_.r, false);
        total += radial(spec_.r, kHessianRadius, false);
      }
    }
    total /= kTwoPi;
    if (hess) total -= dz_ * boundary_term() / kTwoPi;
    return {total, err_ / kTwoPi, nodes_};
  }

private:
  void count(std::size_t k = 1) {
    nodes_ += k;
    if (nodes_ > opt_.node_budget) {
      throw QuadratureBudgetError("quadrature exceeded its node budget of " + std::to_string(opt_.node_budget));
    }
  }

  double axis(Complex x, int a) const { return a == 0 ? x.real() : x.imag(); }

  // kernel at x = z - xi
  double kernel(Complex x) const {
    const double n2 = std::norm(x);
    switch (kind_) {
      case Kernel::log: return 0.5 * std::log(n2);
      case Kernel::gradient: return axis(x, j_) / n2;
      case Kernel::hessian:
        return ((l_ == j_ ? n2 : 0.0) - 2.0 * axis(x, l_) * axis(x, j_)) / (n2 * n2);
    }
    return 0.0;
  }

  double q_at(Complex xi) {
    count();
    const double v = spec_.q(xi);
    if (!std::isfinite(v)) throw EvaluationError("q is not finite at a quadrature node");
    return v;
  }

  double unit(Complex) {
    count();
    return 1.0;
  }

  double tol() const { return opt_.rel_tol; }

  Sample record(Sample s, double e) {
    err_ += e;
    return s;
  }

  // Periodic trapezoid with doubling.
  template <class F>
  Sample full_circle(F f, int n0) {
    int n = 16;
    while (n < n0 && n < (1 << 16)) n *= 2;
    double sum = 0.0, l1 = 0.0;
    auto take = [&](double phi) {
      const double v = f(phi);
      if (!std::isfinite(v)) throw EvaluationError("non-finite integrand on a quadrature circle");
      sum += v;
      l1 += std::abs(v);
    };
    for (int k = 0; k < n; ++k) take(kTwoPi * k / n);
    double prev = sum * kTwoPi / n;
    while (n < (1 << 20)) {
      for (int k = 0; k < n; ++k) take(kTwoPi * (k + 0.5) / n);
      n *= 2;
      const double cur = sum * kTwoPi / n;
      const double mag = l1 * kTwoPi / n;
      if (std::abs(cur - prev) <= 0.1 * tol() * mag + kAbsFloor) return {cur, mag};
      prev = cur;
    }
    throw QuadratureBudgetError("angular trapezoid did not converge");
  }

  // f returns a Sample whose magnitude is the integrand before any cancellation
  template <class F>
  Sample arc(F f, double a, double b) {
    double e = 0.0;
    return gk_adaptive(f, a, b, 0.1 * tol(), e);
  }

  int angular_points(double rho) const {
    if (abs_z_ == 0.0) return 32;
    const double gap = std::max(std::abs(rho - abs_z_), delta_);
    return static_cast<int>(8.0 * kTwoPi * std::max(rho, abs_z_) / gap);
  }

  // int over the admissible angles at radius rho of kernel(z - xi) * g(xi);
  // inside the band the arc covered by the near disk is left out
  template <class G>
  Sample angular(double rho, G g, bool in_band) {
    auto f = [&](double phi) {
      const Complex xi = std::polar(rho, phi);
      return kernel(z_ - xi) * g(xi);
    };
    if (!in_band) return full_circle(f, angular_points(rho));
    const double c = (rho * rho + abs_z_ * abs_z_ - delta_ * delta_) / (2.0 * rho * abs_z_);
    const double a = std::acos(std::clamp(c, -1.0, 1.0));
    const double phz = std::arg(z_);
    auto fs = [&](double phi) {
      const double v = f(phi);
      return Sample{v, std::abs(v)};
    };
    return arc(fs, phz + a, phz + kTwoPi - a);
  }

  Sample angular_of(double rho, bool weighted, bool in_band) {
    if (weighted) return angular(rho, [&](Complex xi) { return q_at(xi); }, in_band);
    return angular(rho, [&](Complex xi) { return unit(xi); }, in_band);
  }

  static Sample scaled(Sample s, double f) { return {s.v * f, s.m * std::abs(f)}; }

  // Weighted part over the 0-centred disk of radius b, with the weight absorbed by a substitution.
  double weighted_inner(double b) {
    if (!(b > 0.0)) return 0.0;
    double e = 0.0;
    Sample out;
    const Complex centre_q = abs_z_ == 0.0 ? Complex(0.0) : Complex(kTwoPi * kernel(z_), 0.0);
    auto at_origin = [&](double jac) {
      if (abs_z_ == 0.0) return Sample{};
      const double v = centre_q.real() * q_at(Complex(0.0)) * jac;
      return Sample{v, std::abs(v)};
    };
    if (spec_.weight == WeightKind::power) {
      // s = rho^{2-2alpha}: rho^{1-2alpha} drho = ds / (2 - 2alpha)
      const double p = 2.0 - 2.0 * spec_.alpha;
      auto f = [&](double s) {
        const double rho = std::pow(s, 1.0 / p);
        if (rho < kTiny) return at_origin(1.0 / p);
        return scaled(angular_of(rho, true, false), 1.0 / p);
      };
      out = gk_adaptive(f, 0.0, std::pow(b, p), tol(), e);
    } else {
      // t = 1/log(1/rho): drho / (rho log^2(1/rho)) = dt
      auto f = [&](double t) {
        const double rho = t > 0.0 ? std::exp(-1.0 / t) : 0.0;
        if (rho < kTiny) return at_origin(1.0);
        return angular_of(rho, true, false);
      };
      out = gk_adaptive(f, 0.0, -1.0 / std::log(b), tol(), e);
    }
    return record(out, e).v;
  }

  // int_a^b rho w(rho) A_q(rho) drho (weighted) or -d(z) int_a^b rho A_1(rho) drho,
  // in log rho when the range spans more than a factor 4
  double radial(double a, double b, bool weighted) {
    if (!(b > a)) return 0.0;
    const double factor = weighted ? 1.0 : -dz_;
    if (factor == 0.0) return 0.0;
    auto density_factor = [&](double rho) { return weighted ? rho * spec_.weight_at(rho) : rho; };
    double e = 0.0;
    Sample out;
    if (a > 0.0 && b / a > 4.0) {
      auto f = [&](double sigma) {
        const double rho = std::exp(sigma);
        return scaled(angular_of(rho, weighted, false), factor * rho * density_factor(rho));
      };
      out = gk_adaptive(f, std::log(a), std::log(b), tol(), e);
    } else {
      auto f = [&](double rho) {
        if (rho < kTiny) return Sample{};
        return scaled(angular_of(rho, weighted, false), factor * density_factor(rho));
      };
      out = gk_adaptive(f, a, b, tol(), e);
    }
    return record(out, e).v;
  }

  // |rho - |z|| < delta; rho = |z| + delta sin(psi) removes the square-root ends of the excluded arc
  double band(bool weighted) {
    const double factor = weighted ? 1.0 : -dz_;
    if (factor == 0.0) return 0.0;
    auto f = [&](double psi) {
      const double rho = abs_z_ + delta_ * std::sin(psi);
      const double jac = delta_ * std::cos(psi);
      if (!(rho > 0.0) || jac <= 0.0) return Sample{};
      const double w = weighted ? rho * spec_.weight_at(rho) : rho;
      return scaled(angular_of(rho, weighted, true), factor * w * jac);
    };
    double e = 0.0;
    const Sample out = gk_adaptive(f, -0.5 * kPi, 0.5 * kPi, tol(), e);
    return record(out, e).v;
  }

  // Hessian at 0 (power weight, alpha <= 0): int_{K_3} H(-xi)(d(xi) - d(0)) dsigma, 0-centred
  double centred_hessian() {
    auto diff = [&](Complex xi) {
      count();
      return spec_.density(xi) - dz_;
    };
    double e = 0.0;
    auto f = [&](double rho) {
      if (rho < kTiny) return Sample{};
      return scaled(angular(rho, diff, false), rho);
    };
    const Sample in = gk_adaptive(f, 0.0, spec_.r, tol(), e);
    record(in, e);
    return in.v + radial(spec_.r, kHessianRadius, false);
  }

  // K_delta(z) in local polar coordinates, pairs psi and psi + pi, t = delta u^k.
  // The grading k follows the Hoelder exponent for the Hessian.
  double near_disk() {
    auto d = [&](Complex xi) {
      count();
      return spec_.density(xi);
    };
    const double beta = spec_.holder_exponent;
    const int k = kind_ == Kernel::hessian ? std::max(2, static_cast<int>(std::ceil(2.0 / beta))) : 2;
    auto f = [&](double u) {
      if (u <= 0.0) return Sample{};
      const double t = delta_ * std::pow(u, k);
      const double jac = delta_ * k * std::pow(u, k - 1);
      auto g = [&](double psi) {
        const Complex e = std::polar(1.0, psi);
        const double dp = d(z_ + t * e), dm = d(z_ - t * e);
        const double mag = std::abs(dp) + std::abs(dm);
        switch (kind_) {
          case Kernel::log: {
            const double c = std::log(t) * t;
            return Sample{c * (dp + dm), std::abs(c) * mag};
          }
          case Kernel::gradient: {
            const double c = -axis(e, j_);  // x = z - xi = -t e
            return Sample{c * (dp - dm), std::abs(c) * mag};
          }
          case Kernel::hessian: {
            const double c = ((l_ == j_ ? 1.0 : 0.0) - 2.0 * axis(e, l_) * axis(e, j_)) / t;
            return Sample{c * (dp + dm - 2.0 * dz_), std::abs(c) * (mag + 2.0 * std::abs(dz_))};
          }
        }
        return Sample{};
      };
      return scaled(arc(g, 0.0, kPi), jac);
    };
    double e = 0.0;
    const Sample out = gk_adaptive(f, 0.0, 1.0, tol(), e);
    return record(out, e).v;
  }

  // oint_{|xi| = 3} d/dx_l log|z - xi| nu_j ds
  double boundary_term() {
    auto f = [&](double phi) {
      count();
      const Complex xi = std::polar(kHessianRadius, phi);
      const Complex x = z_ - xi;
      const double nj = j_ == 0 ? std::cos(phi) : std::sin(phi);
      return axis(x, l_) / std::norm(x) * nj * kHessianRadius;
    };
    return full_circle(f, 64).v;
  }

  const PotentialSpec& spec_;
  QuadratureOptions opt_;
  Complex z_;
  Kernel kind_;
  int l_, j_;
  double abs_z_;
  double delta_ = 0.0;
  double dz_ = 0.0;
  std::size_t nodes_ = 0;
  double err_ = 0.0;
};

void check_inside(const PotentialSpec& spec, Complex z) {
  if (!(std::abs(z) < spec.r)) throw DomainError("potential evaluation needs |z| < r");
}

void check_axis(int axis) {
  if (axis != 0 && axis != 1) throw ParameterError("axis must be 0 (x) or 1 (y)");
}

}  // namespace

double PotentialSpec::weight_at(double rho) const {
  if (weight == WeightKind::power) return std::pow(rho, -2.0 * alpha);
  const double L = -std::log(rho);
  return 1.0 / (rho * rho * L * L);
}

double PotentialSpec::density(Complex xi) const {
  const double rho = std::abs(xi);
  if (!(rho < r)) return 0.0;
  if (rho == 0.0) {
    if (weight == WeightKind::power && alpha < 0.0) return 0.0;
    if (weight == WeightKind::power && alpha == 0.0) return q(xi);
    throw DomainError("density is singular at 0");
  }
  return weight_at(rho) * q(xi);
}

void PotentialSpec::validate() const {
  if (!q) throw ParameterError("potential density q is missing");
  if (weight == WeightKind::power) {
    if (!(alpha < 1.0)) throw ParameterError("power weight needs alpha < 1");
    if (!(r > 0.0 && r <= 1.0)) throw ParameterError("power weight needs 0 < r <= 1");
  } else if (!(r > 0.0 && r < 1.0)) {
    throw ParameterError("log2 weight needs 0 < r < 1");
  }
}

PotentialValue newton_potential(const PotentialSpec& spec, Complex z, const QuadratureOptions& opt) {
  spec.validate();
  check_inside(spec, z);
  return Engine(spec, opt, z, Kernel::log, 0, 0).run();
}

PotentialValue potential_gradient(const PotentialSpec& spec, Complex z, int axis, const QuadratureOptions& opt) {
  spec.validate();
  check_inside(spec, z);
  check_axis(axis);
  if (z == Complex(0.0) && (spec.weight == WeightKind::log2 || spec.alpha >= 0.5)) {
    throw DomainError("gradient at 0 is undefined for this weight");
  }
  return Engine(spec, opt, z, Kernel::gradient, 0, axis).run();
}

PotentialValue potential_hessian(const PotentialSpec& spec, Complex z, int l, int j, const QuadratureOptions& opt) {
  spec.validate();
  check_inside(spec, z);
  check_axis(l);
  check_axis(j);
  if (!(spec.holder_exponent > 0.0 && spec.holder_exponent <= 1.0)) {
    throw ParameterError("Hoelder exponent must lie in (0, 1]");
  }
  if (z == Complex(0.0) && !(spec.weight == WeightKind::power && spec.alpha <= 0.0)) {
    throw DomainError("Hessian at 0 needs the power weight with alpha <= 0");
  }
  return Engine(spec, opt, z, Kernel::hessian, l, j).run();
}

std::string PoissonJensenSplit::to_json() const {
  nlohmann::ordered_json j;
  j["alpha_hat"] = alpha_hat;
  j["premise_ok"] = premise_ok;
  j["circles"] = circles;
  j["mean_value_defect"] = mean_value_defect;
  j["harmonic_ok"] = harmonic_ok;
  return j.dump(2);
}

PoissonJensenSplit poisson_jensen_split(const RealFn& u, const PotentialSpec& laplacian, int circles, unsigned seed,
                                        const QuadratureOptions& opt) {
  laplacian.validate();
  PoissonJensenSplit out;
  const OrderEstimate o = estimate_order(u, dyadic_radii(8, 26));
  out.alpha_hat = o.alpha_hat;
  out.premise_ok = o.finite && std::abs(o.alpha_hat) <= 0.02;

  const PotentialSpec spec = laplacian;
  out.potential_part = [spec, opt](Complex z) { return newton_potential(spec, z, opt).value; };
  const RealFn pot = out.potential_part;
  out.harmonic = [u, pot](Complex z) { return u(z) - pot(z); };

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double r = laplacian.r;
  const int m = 32;
  for (int k = 0; k < circles;) {
    const Complex c = std::polar(0.6 * r * std::sqrt(unit(rng)), kTwoPi * unit(rng));
    const double room = 0.95 * (r - std::abs(c));
    const double rad = std::min(0.3 * r, room) * (0.2 + 0.8 * unit(rng));
    if (std::abs(std::abs(c) - rad) < 0.05 * r) continue;  // keep the circle off the puncture
    double mean = 0.0;
    for (int t = 0; t < m; ++t) mean += out.harmonic(c + std::polar(rad, kTwoPi * (t + 0.5) / m));
    mean /= m;
    out.mean_value_defect = std::max(out.mean_value_defect, std::abs(out.harmonic(c) - mean));
    ++k;
  }
  out.circles = circles;
  out.harmonic_ok = out.mean_value_defect <= 1e-4;
  return out;
}

PoissonJensenSplit poisson_jensen_split(const RealFn& u, const RealFn& laplacian_density, double r, int circles,
                                        unsigned seed) {
  PotentialSpec spec;
  spec.q = laplacian_density;
  spec.alpha = 0.0;
  spec.r = r;
  return poisson_jensen_split(u, spec, circles, seed);
}

}  // namespace curvlab
