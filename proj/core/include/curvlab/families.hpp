#pragma once

#include <optional>
#include <string>
#include <vector>

#include "curvlab/metrics.hpp"
#include "curvlab/types.hpp"

namespace curvlab {

/// u1 <= u2 candidates for the extended maximum principle, posed on K_R \ {0}.
struct ComparisonPair {
  RealFn u1;
  RealFn u2;
  double boundary_radius = 1.0;
};

/// A closed-form solution of Delta u = -kappa e^{2u} near the puncture.
/// The remainder is v = u + alpha log|z| (alpha < 1) or w = u + log|z| + log log(1/|z|) (alpha = 1).
struct ClosedFormSolution {
  std::string id;
  std::string citation;
  double alpha = 0.0;
  RealFn u;
  CurvatureField kappa;
  std::optional<double> kappa_at_zero;

  RealFn remainder;         // v or w; empty when not given
  ComplexFn remainder_z;    // d/dz of the remainder
  ComplexFn remainder_zz;   // d^2/dz^2 of the remainder
  ComplexFn u_z;            // d/dz u, used for closed-form connections

  // Limits at 0 of remainder_z / remainder_zz when they exist.
  std::optional<Complex> remainder_z_limit;
  std::optional<Complex> remainder_zz_limit;

  // Points where u is not C^2 (kinks); residual sampling skips them.
  std::function<bool(Complex)> smooth_at;

  std::optional<ComparisonPair> pair;

  double outer_radius = 1.0;
  // kappa locally Hoelder with kappa(0) < 0: the hypotheses of the rate table.
  bool within_rate_hypotheses = true;
  bool quarantined = false;

  bool critical() const { return alpha >= 1.0; }
  bool has_closed_derivatives() const { return static_cast<bool>(remainder_z); }
  bool is_smooth_at(Complex z) const { return !smooth_at || smooth_at(z); }
  MetricDensity metric() const;
};

ClosedFormSolution hyperbolic_disk(double A);
ClosedFormSolution hyperbolic_punctured_disk(double A);
ClosedFormSolution supersolution_family(double alpha, double A);
ClosedFormSolution subsolution_family(double alpha, double a, double R);
ClosedFormSolution nitsche_family(double alpha);

// beta is only read by alpha1-holder-rate.
ClosedFormSolution counterexample(const std::string& id, double beta = 1.0);
std::vector<std::string> counterexample_ids();

struct FamilyParams {
  std::optional<double> alpha;
  std::optional<double> A;
  std::optional<double> a;
  std::optional<double> R;
  std::optional<double> beta;
};

struct CatalogEntry {
  std::string id;
  double alpha;
  std::string citation;
  bool has_closed_derivatives;
  bool quarantined;
  std::string parameters;  // human readable defaults
};

std::vector<CatalogEntry> catalog();

/// Resolves an id (catalog ids plus the alias "nitsche") with optional parameters.
ClosedFormSolution lookup(const std::string& id, const FamilyParams& params = {});

/// One instance per catalog entry at its default parameters.
std::vector<ClosedFormSolution> catalog_instances();

/// max |Delta u + kappa e^{2u}| over `count` deterministic pseudo-random points with
/// |z| in [r_lo, r_hi], skipping kinks.
double residual_sup(const ClosedFormSolution& sol, int count = 100, double r_lo = 1e-3, double r_hi = 0.9,
                    unsigned seed = 7);

}  // namespace curvlab
