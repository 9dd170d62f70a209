#pragma once

#include <cstddef>
#include <string>

#include "curvlab/types.hpp"

namespace curvlab {

enum class WeightKind { power, log2 };

/// Density weight(xi) q(xi) on K_r, with weight |xi|^{-2 alpha} (power) or
/// 1 / (|xi|^2 log^2(1/|xi|)) (log2).
struct PotentialSpec {
  RealFn q;
  WeightKind weight = WeightKind::power;
  double alpha = 0.0;
  double r = 1.0;
  double holder_exponent = 1.0;  // declared for q; only read by the Hessian

  double weight_at(double rho) const;
  double density(Complex xi) const;  // weight * q inside K_r, 0 outside
  void validate() const;
};

struct QuadratureOptions {
  double rel_tol = 1e-12;
  std::size_t node_budget = 50'000'000;
};

struct PotentialValue {
  double value = 0.0;
  double est_error = 0.0;
  std::size_t nodes_used = 0;
};

/// (1/2pi) int_{K_r} log|z - xi| weight(xi) q(xi) dsigma(xi), |z| < r.
PotentialValue newton_potential(const PotentialSpec& spec, Complex z, const QuadratureOptions& opt = {});

/// d/dx_axis of the potential (axis 0 = x, 1 = y) by differentiating the kernel.
PotentialValue potential_gradient(const PotentialSpec& spec, Complex z, int axis, const QuadratureOptions& opt = {});

/// Second derivative d^2/dx_l dx_j: compensated integral over K_3 (density extended by zero)
/// minus the boundary term on |xi| = 3.
PotentialValue potential_hessian(const PotentialSpec& spec, Complex z, int l, int j, const QuadratureOptions& opt = {});

struct PoissonJensenSplit {
  RealFn harmonic;        // h = u - potential_part
  RealFn potential_part;
  double alpha_hat = 0.0;
  bool premise_ok = false;        // estimated order of u is 0
  double mean_value_defect = 0.0; // max |h(c) - circle mean| over the random circles
  int circles = 0;
  bool harmonic_ok = false;

  std::string to_json() const;
};

/// u = h + (1/2pi) int_{K_r} log|z - xi| Delta u dsigma; Delta u is given by `laplacian`.
/// h is checked against the mean-value property on `circles` random circles inside K_r.
PoissonJensenSplit poisson_jensen_split(const RealFn& u, const PotentialSpec& laplacian, int circles = 30,
                                        unsigned seed = 11, const QuadratureOptions& opt = {1e-10, 50'000'000});

/// Density with no singular weight (alpha = 0).
PoissonJensenSplit poisson_jensen_split(const RealFn& u, const RealFn& laplacian_density, double r,
                                        int circles = 30, unsigned seed = 11);

}  // namespace curvlab
