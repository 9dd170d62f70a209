#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <string>

#include "curvlab/errors.hpp"
#include "curvlab/types.hpp"

// Numerical Wirtinger derivatives of closed-form callables.
// Callables may return double or Complex; the stencils are linear in f.
namespace curvlab::diff {

inline constexpr double kDzRelativeStep = 1e-3;
inline constexpr double kSecondRelativeStep = 1e-2;
inline constexpr double kLaplacianLogStep = 0.03;

inline double default_dz_step(Complex z) { return kDzRelativeStep * std::abs(z); }
inline double default_second_step(Complex z) { return kSecondRelativeStep * std::abs(z); }

/// Log-polar Laplacian step at radius r for a function singular on |z| = r_outer:
/// kLaplacianLogStep, shrunk to 1% of the log-distance to the outer circle.
inline double laplacian_log_step(double r, double r_outer) {
  if (!(r_outer > r)) return kLaplacianLogStep;
  return std::min(kLaplacianLogStep, 0.01 * std::log(r_outer / r));
}

inline void check_step(Complex z, double h, bool origin_is_singular) {
  if (!(h > 0.0) || !std::isfinite(h)) {
    throw StepError("derivative step must be positive and finite");
  }
  if (origin_is_singular && h >= 0.5 * std::abs(z)) {
    throw StepError("step h = " + std::to_string(h) + " reaches the singularity (need h < |z|/2)");
  }
}

namespace detail {

template <class F>
Complex cross_dz(F& f, Complex z, double h, double sign) {
  const Complex I(0.0, 1.0);
  const Complex fx = (Complex(f(z + h)) - Complex(f(z - h))) / (2.0 * h);
  const Complex fy = (Complex(f(z + I * h)) - Complex(f(z - I * h))) / (2.0 * h);
  return 0.5 * (fx + sign * I * fy);
}

// (f_xx - f_yy - 2i f_xy)/4
template <class F>
Complex cross_dzz(F& f, Complex z, double h) {
  const Complex I(0.0, 1.0);
  const Complex f0 = Complex(f(z));
  const Complex fxx = (Complex(f(z + h)) - 2.0 * f0 + Complex(f(z - h))) / (h * h);
  const Complex fyy = (Complex(f(z + I * h)) - 2.0 * f0 + Complex(f(z - I * h))) / (h * h);
  const Complex fxy = (Complex(f(z + Complex(h, h))) - Complex(f(z + Complex(h, -h))) -
                       Complex(f(z + Complex(-h, h))) + Complex(f(z + Complex(-h, -h)))) /
                      (4.0 * h * h);
  return 0.25 * (fxx - fyy - 2.0 * I * fxy);
}

}  // namespace detail

/// d/dz = (d/dx - i d/dy)/2 on the cross {z +- h, z +- ih}, one Richardson level.
/// h <= 0 selects the default relative step.
template <class F>
Complex dz(F&& f, Complex z, double h = 0.0, bool origin_is_singular = true) {
  if (h <= 0.0) h = origin_is_singular ? default_dz_step(z) : std::max(default_dz_step(z), 1e-5);
  check_step(z, h, origin_is_singular);
  const Complex coarse = detail::cross_dz(f, z, h, -1.0);
  const Complex fine = detail::cross_dz(f, z, 0.5 * h, -1.0);
  return (4.0 * fine - coarse) / 3.0;
}

template <class F>
Complex dzbar(F&& f, Complex z, double h = 0.0, bool origin_is_singular = true) {
  if (h <= 0.0) h = origin_is_singular ? default_dz_step(z) : std::max(default_dz_step(z), 1e-5);
  check_step(z, h, origin_is_singular);
  const Complex coarse = detail::cross_dz(f, z, h, +1.0);
  const Complex fine = detail::cross_dz(f, z, 0.5 * h, +1.0);
  return (4.0 * fine - coarse) / 3.0;
}

template <class F>
Complex dzz(F&& f, Complex z, double h = 0.0) {
  if (h <= 0.0) h = default_second_step(z);
  check_step(z, h, true);
  const Complex coarse = detail::cross_dzz(f, z, h);
  const Complex fine = detail::cross_dzz(f, z, 0.5 * h);
  return (4.0 * fine - coarse) / 3.0;
}

/// Laplacian in log-polar coordinates: e^{-2s}(g_ss + g_tt), steps h in s and theta,
/// one Richardson level. Accurate down to tiny |z| since the stencil scales with |z|.
template <class F>
double laplacian(F&& f, Complex z, double h = kLaplacianLogStep) {
  const double r = std::abs(z);
  if (!(r > 0.0)) throw StepError("log-polar Laplacian needs z != 0");
  if (!(h > 0.0) || h > 0.5) throw StepError("log-polar step must lie in (0, 0.5]");
  const double s = std::log(r);
  const double t = std::arg(z);
  auto g = [&](double ds, double dt) { return double(f(std::polar(std::exp(s + ds), t + dt))); };
  const double g0 = g(0.0, 0.0);
  auto five = [&](double k) {
    return (g(k, 0.0) + g(-k, 0.0) + g(0.0, k) + g(0.0, -k) - 4.0 * g0) / (k * k);
  };
  const double lap = (4.0 * five(0.5 * h) - five(h)) / 3.0;
  return lap / (r * r);
}

/// A derivative value with an error estimate.
struct Estimate {
  Complex value;
  double error;
};

/// Tries steps c|z| for a short ladder of c, picks the one whose successive
/// difference plus rounding bound is smallest.
template <class F>
Estimate dz_adaptive(F&& f, Complex z) {
  constexpr std::array<double, 5> cs{0.2, 0.05, 0.0125, 3.125e-3, 7.8125e-4};
  const double r = std::abs(z);
  const double eps = std::numeric_limits<double>::epsilon();
  const double scale = std::max(std::abs(Complex(f(z))), 1e-300);
  Estimate best{Complex(std::nan(""), 0.0), std::numeric_limits<double>::infinity()};
  Complex prev;
  for (std::size_t k = 0; k < cs.size(); ++k) {
    const double h = cs[k] * r;
    const Complex d = dz(f, z, h);
    if (k > 0) {
      const double err = std::abs(d - prev) + 10.0 * eps * scale / h;
      if (err < best.error) best = {d, err};
    }
    prev = d;
  }
  return best;
}

template <class F>
Estimate dzz_adaptive(F&& f, Complex z) {
  constexpr std::array<double, 5> cs{0.2, 0.05, 0.0125, 3.125e-3, 7.8125e-4};
  const double r = std::abs(z);
  const double eps = std::numeric_limits<double>::epsilon();
  const double scale = std::max(std::abs(Complex(f(z))), 1e-300);
  Estimate best{Complex(std::nan(""), 0.0), std::numeric_limits<double>::infinity()};
  Complex prev;
  for (std::size_t k = 0; k < cs.size(); ++k) {
    const double h = cs[k] * r;
    const Complex d = dzz(f, z, h);
    if (k > 0) {
      const double err = std::abs(d - prev) + 20.0 * eps * scale / (h * h);
      if (err < best.error) best = {d, err};
    }
    prev = d;
  }
  return best;
}

}  // namespace curvlab::diff
