#pragma once

// Closed forms written from scratch for the tests; nothing here calls the library.

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>

namespace oracle {

using C = std::complex<double>;

inline double big_l(C z) { return -std::log(std::abs(z)); }

// Liouville: lambda = |F'| / (1 - |F|^2) has curvature -4.
inline double liouville_u(C f, C fprime) { return std::log(std::abs(fprime) / (1.0 - std::norm(f))); }

// log of the Poincare density of the unit disk at curvature -A
inline double hyperbolic_disk_u(double A, C z) { return std::log(2.0 / (std::sqrt(A) * (1.0 - std::norm(z)))); }

// log of the complete density of the punctured unit disk at curvature -A
inline double punctured_disk_u(double A, C z) {
  return -std::log(std::sqrt(A) * std::abs(z) * big_l(z));
}

// Order-alpha solutions of Delta u = 4 e^{2u}:
//   0 < alpha < 1: F = z^{1-alpha};
//   alpha <= 0:    F = h^{1-alpha}, h = z(2 + z)/4 (keeps u C^2 at 0);
//   alpha = 1:     lambda = 1 / (2|z|(1 + log(1/|z|))).
inline double nitsche_u(double alpha, C z) {
  if (alpha >= 1.0) return -std::log(2.0 * std::abs(z) * (1.0 + big_l(z)));
  const double b = 1.0 - alpha;
  if (alpha > 0.0) return liouville_u(std::pow(z, b), b * std::pow(z, -alpha));
  const C h = z * (2.0 + z) / 4.0;
  const C hp = (1.0 + z) / 2.0;
  return liouville_u(std::pow(h, b), b * std::pow(h, -alpha) * hp);
}

// Laplacian by the 5-point star in (log r, theta) with one Richardson step.
inline double laplacian(const std::function<double(C)>& f, C z, double h = 0.02) {
  const double s = std::log(std::abs(z)), t = std::arg(z);
  auto g = [&](double ds, double dt) { return f(std::polar(std::exp(s + ds), t + dt)); };
  auto star = [&](double k) {
    return (g(k, 0) + g(-k, 0) + g(0, k) + g(0, -k) - 4.0 * g(0, 0)) / (k * k);
  };
  return (4.0 * star(0.5 * h) - star(h)) / 3.0 / std::norm(z);
}

// Limits at 0 for the order-alpha solution with kappa(0) = kappa0.
inline double limit_scaled_density(double alpha, double kappa0) {
  return alpha >= 1.0 ? 1.0 / std::sqrt(-kappa0) : 0.0;
}
inline double limit_connection(double alpha) { return -alpha; }
inline double limit_schwarzian(double alpha) { return alpha * (2.0 - alpha) / 2.0; }

// Growth rows of the remainder derivatives: |z|^p (log 1/|z|)^q.
struct Row {
  bool continuous;
  double p, q;
};
inline Row first_derivative_row(double alpha) {
  if (alpha < 0.5) return {true, 0.0, 0.0};
  if (alpha < 1.0) return {false, 1.0 - 2.0 * alpha, 0.0};
  return {false, -1.0, -2.0};
}
inline Row second_derivative_row(double alpha) {
  if (alpha <= 0.0) return {true, 0.0, 0.0};
  if (alpha < 1.0) return {false, -2.0 * alpha, 0.0};
  return {false, -2.0, -2.0};
}

// Newton potential of q = 1 with weight |xi|^{-2 alpha} on the unit disk, p = 2 - 2 alpha:
// omega(rho) = (rho^p - 1) / p^2 and |grad omega| = rho^{p-1} / p.
inline double unit_potential(double alpha, double rho) {
  const double p = 2.0 - 2.0 * alpha;
  return (std::pow(rho, p) - 1.0) / (p * p);
}
inline double unit_potential_gradient(double alpha, double rho) {
  const double p = 2.0 - 2.0 * alpha;
  return std::pow(rho, p - 1.0) / p;
}
// log2 weight: |grad omega| = 1 / (rho log(1/rho)) inside the support.
inline double log2_potential_gradient(double rho) { return 1.0 / (rho * -std::log(rho)); }

// B(r) = |-kappa e^{2w} - 1| log(1/r) for the critical order-1 solution: (L + 2L^2)/(1 + L)^2 -> 2.
inline double wachstum_critical(double L) { return (L + 2.0 * L * L) / ((1.0 + L) * (1.0 + L)); }
inline constexpr double kWachstumLimit = 2.0;

// w(0) = -log sqrt(-kappa(0)).
inline double critical_w_limit(double kappa0) { return -0.5 * std::log(-kappa0); }

}  // namespace oracle
