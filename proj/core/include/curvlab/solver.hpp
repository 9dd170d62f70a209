#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "curvlab/grid.hpp"
#include "curvlab/metrics.hpp"
#include "curvlab/types.hpp"

namespace curvlab {

struct SolveConfig {
  int max_iters = 500;
  double tol = 1e-9;
  // Safety factor on the per-node shift 2(-kappa)e^{2u}; values below 1 may break monotonicity.
  double linearization_shift = 1.0;
  bool verbose = false;
  bool richardson = true;
  // Order used for the initial super/subsolutions; estimated from the boundary data when empty.
  std::optional<double> alpha;

  void validate() const;
};

struct IterationRecord {
  int iter = 0;
  double residual_supnorm = 0.0;  // max over interior nodes of r^2 |Delta_h u + kappa e^{2u}|
  double step_supnorm = 0.0;
  double min_gap_to_subsolution = 0.0;   // min (u - sub)
  double max_gap_to_supersolution = 0.0; // max (u - super)
  bool shift_refreshed = false;
};

struct IterationTrace {
  std::vector<IterationRecord> records;
  std::string to_json() const;
};

/// Boundary values as functions of theta on the inner and outer rings.
struct DirichletData {
  std::function<double(double)> inner;
  std::function<double(double)> outer;

  static DirichletData from_function(const RealFn& f, double r_inner, double r_outer);
};

struct SolveResult {
  GridField solution;       // second-order discrete solution on the requested grid
  GridField extrapolated;   // Richardson combination with the refined solve (== solution when disabled)
  double discretization_error_estimate = 0.0;  // estimated sup error of `solution`
  GridField subsolution;
  GridField supersolution;
  IterationTrace trace;
  IterationTrace refined_trace;
  double alpha_boundary = 0.0;
  int iterations = 0;
};

/// Monotone iteration for Delta u = -kappa e^{2u} on an annulus with Dirichlet data,
/// starting from a supersolution and bracketed below by a subsolution.
SolveResult solve_dirichlet_annulus(const CurvatureField& kappa, const DirichletData& boundary,
                                    const AnnularGrid& grid, const SolveConfig& cfg = {});

struct RadialProfile {
  std::vector<double> r;
  std::vector<double> u;       // Richardson-extrapolated
  std::vector<double> u_raw;   // second-order solution
  double residual = 0.0;       // discrete residual of the raw system
  double error_estimate = 0.0;
  int newton_iterations = 0;
};

/// u'' + u'/r = -kappa(r) e^{2u} on [r_in, r_out], uniform in log r, damped Newton.
RadialProfile solve_radial(const RadialFn& kappa, double r_in, double r_out, double u_in, double u_out, int n);

/// max over nodes of u - log(1/(sqrt(A) r log(1/r))); <= 0 when the Ahlfors bound holds.
double ahlfors_excess(const GridField& u, double A);

struct HypothesisCheck {
  std::string name;
  bool holds = false;
  double worst = 0.0;   // most violating sampled margin (negative when violated)
  std::string detail;
};

struct MaxPrincipleOptions {
  double boundary_radius = 1.0;  // circle on which (iii) is sampled
  int boundary_samples = 256;
};

struct MaxPrincipleReport {
  HypothesisCheck subharmonic_supersolution;  // (i)
  HypothesisCheck subsolution;                // (ii)
  HypothesisCheck boundary_ordering;          // (iii)
  HypothesisCheck order_comparison;           // (iv)
  double alpha_u1 = 0.0;
  double alpha_u2 = 0.0;
  bool u2_order_finite = true;
  double min_gap = 0.0;  // min over the grid of u2 - u1
  Complex argmin_gap;
  bool conclusion_holds = false;

  bool all_hypotheses() const;
  std::string to_json() const;
};

MaxPrincipleReport check_max_principle(const RealFn& u1, const RealFn& u2, const CurvatureField& kappa,
                                       const AnnularGrid& grid, const MaxPrincipleOptions& options = {});

/// Tensor cubic interpolation of a grid field in (log r, theta); periodic in theta.
RealFn grid_interpolant(const GridField& field);

}  // namespace curvlab
