#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "curvlab/grid.hpp"
#include "curvlab/types.hpp"

namespace curvlab {

/// kappa with optional declared bounds lower <= kappa <= upper (i.e. -a <= kappa <= -A).
struct CurvatureField {
  RealFn kappa;
  std::optional<double> lower;
  std::optional<double> upper;
  std::string label;

  static CurvatureField constant(double value);
  static CurvatureField bounded(RealFn kappa, double lower, double upper, std::string label = {});

  double operator()(Complex z) const { return kappa(z); }
  bool strictly_negative() const { return upper.has_value() && *upper < 0.0; }
  // Throws ParameterError when a declared bound is violated at z.
  void check_bounds(Complex z) const;
};

/// {r_inner < |z| < r_outer}; when punctured is false and r_inner == 0 the centre belongs too.
struct MetricDomain {
  double r_inner = 0.0;
  double r_outer = 1.0;
  bool punctured = true;

  static MetricDomain punctured_disk(double r = 1.0) { return {0.0, r, true}; }
  static MetricDomain disk(double r = 1.0) { return {0.0, r, false}; }
  static MetricDomain annulus(double r_in, double r_out) { return {r_in, r_out, true}; }
  bool contains(Complex z) const;
};

enum class EvalPath { closed_form, callable_stencil, grid_stencil };
std::string to_string(EvalPath p);

class MetricDensity {
public:
  // u = log lambda given directly (preferred: no under/overflow for singular densities).
  // u_z, when supplied, is used for the connection instead of a stencil.
  static MetricDensity from_log_density(RealFn u, MetricDomain domain, ComplexFn u_z = {});
  static MetricDensity from_density(RealFn lambda, MetricDomain domain);
  // Grid-backed metric: samples of u = log lambda.
  static MetricDensity from_grid(GridField log_lambda);

  double lambda(Complex z) const;
  double log_lambda(Complex z) const;

  bool is_grid() const { return grid_ != nullptr; }
  const GridField& grid_field() const;
  const MetricDomain& domain() const { return domain_; }
  bool has_closed_connection() const { return static_cast<bool>(u_z_); }
  Complex closed_log_density_z(Complex z) const { return u_z_(z); }
  const RealFn& log_density_fn() const { return u_; }

  // Locates the grid node at z (|difference| <= 1e-12 relative), throwing DomainError otherwise.
  std::pair<int, int> grid_node(Complex z) const;

private:
  MetricDensity() = default;

  RealFn u_;
  ComplexFn u_z_;
  MetricDomain domain_;
  std::shared_ptr<const GridField> grid_;
};

/// -(Delta log lambda)/lambda^2.
double curvature(const MetricDensity& m, Complex z);
/// 2 d/dz log lambda.
Complex connection(const MetricDensity& m, Complex z);
/// d/dz Gamma - Gamma^2 / 2.
Complex schwarzian(const MetricDensity& m, Complex z);
EvalPath evaluation_path(const MetricDensity& m);

// Per-node fields for grid-backed metrics.
GridField curvature_field(const GridField& log_lambda);
std::vector<Complex> connection_field(const GridField& log_lambda);
std::vector<Complex> schwarzian_field(const GridField& log_lambda);

/// z -> lambda(f(z)) |f'(z)| on new_domain.
MetricDensity pullback(const MetricDensity& m, ComplexFn f, ComplexFn fprime, MetricDomain new_domain);

/// |f'| / (1 - |f|^2), curvature -4.
MetricDensity liouville_metric(ComplexFn f, ComplexFn fprime, MetricDomain domain);

/// Cumulative length of the radial segment from |z0| inward to each radius.
/// An upper bound on the distance d_lambda; radii must be decreasing.
std::vector<double> completeness_probe(const MetricDensity& m, Complex z0, const std::vector<double>& radii);

struct MetricRecord {
  Complex z;
  double lambda;
  double kappa;
  Complex gamma;
  Complex s;
  EvalPath method;

  // {z_re, z_im, lambda, kappa, gamma_re, gamma_im, s_re, s_im, method}
  std::string to_json() const;
};

MetricRecord evaluate_metric(const MetricDensity& m, Complex z);

}  // namespace curvlab
