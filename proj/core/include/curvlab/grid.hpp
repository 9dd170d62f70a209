#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "curvlab/types.hpp"

namespace curvlab {

/// Log-polar discretization of {r_min <= |z| <= r_max}.
/// Node (i, j) sits at exp(s_i) e^{i theta_j}; s is uniform on [log r_min, log r_max],
/// theta uniform on [0, 2pi) with no duplicated seam.
class AnnularGrid {
public:
  static AnnularGrid build(double r_min, double r_max, int n_radial, int n_angular);

  double r_min() const { return r_min_; }
  double r_max() const { return r_max_; }
  int n_radial() const { return n_radial_; }
  int n_angular() const { return n_angular_; }
  std::size_t size() const { return static_cast<std::size_t>(n_radial_) * n_angular_; }

  double h_s() const { return h_s_; }
  double h_theta() const { return h_theta_; }
  double s(int i) const;
  double radius(int i) const;
  double theta(int j) const;
  Complex node(int i, int j) const;

  int wrap(int j) const {
    const int m = j % n_angular_;
    return m < 0 ? m + n_angular_ : m;
  }
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(i) * n_angular_ + wrap(j);
  }

  bool is_boundary_ring(int i) const { return i == 0 || i == n_radial_ - 1; }

  // {"r_min":..,"r_max":..,"n_radial":..,"n_angular":..}
  std::string header_json() const;
  static AnnularGrid from_header_json(const std::string& text);

  bool operator==(const AnnularGrid& o) const;

private:
  AnnularGrid(double r_min, double r_max, int n_radial, int n_angular);

  double r_min_, r_max_;
  int n_radial_, n_angular_;
  double h_s_, h_theta_;
};

class GridField {
public:
  GridField(AnnularGrid grid, std::vector<double> values, bool one_sided_boundary = false);

  static GridField sample(const AnnularGrid& grid, const RealFn& f);

  const AnnularGrid& grid() const { return grid_; }
  const std::vector<double>& values() const { return values_; }
  double at(int i, int j) const { return values_[grid_.index(i, j)]; }

  // True when the boundary rings were produced by one-sided stencils.
  bool one_sided_boundary() const { return one_sided_boundary_; }

  double interior_max_abs() const;
  double max_abs_difference(const GridField& other, bool interior_only = false) const;

  // CSV rows "s,theta,value" at round-trip precision.
  void write_csv(std::ostream& os) const;
  static GridField read_csv(const AnnularGrid& grid, std::istream& is);

private:
  AnnularGrid grid_;
  std::vector<double> values_;
  bool one_sided_boundary_;
};

// Delta u = e^{-2s}(u_ss + u_theta theta); interior rings use central differences,
// the two boundary rings a second-order one-sided stencil in s.
GridField apply_laplacian(const GridField& field);

// Second-order d/dz of a grid field at every node (one-sided in s on the boundary rings).
std::vector<Complex> grid_dz(const GridField& field);

}  // namespace curvlab
