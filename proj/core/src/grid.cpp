#include "curvlab/grid.hpp"

#include <cmath>
#include <iomanip>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "json.hpp"

#include "curvlab/errors.hpp"

namespace curvlab {

AnnularGrid::AnnularGrid(double r_min, double r_max, int n_radial, int n_angular)
    : r_min_(r_min),
      r_max_(r_max),
      n_radial_(n_radial),
      n_angular_(n_angular),
      h_s_((std::log(r_max) - std::log(r_min)) / (n_radial - 1)),
      h_theta_(2.0 * std::numbers::pi / n_angular) {}

AnnularGrid AnnularGrid::build(double r_min, double r_max, int n_radial, int n_angular) {
  if (!(r_min > 0.0) || !(r_max < 1.0) || !(r_min < r_max)) {
    std::ostringstream msg;
    msg << "annulus radii must satisfy 0 < r_min < r_max < 1 (got " << r_min << ", " << r_max << ")";
    throw DomainError(msg.str());
  }
  if (n_radial < 4) throw SizeError("n_radial must be at least 4");
  if (n_angular < 8 || n_angular % 2 != 0) throw SizeError("n_angular must be even and at least 8");
  return AnnularGrid(r_min, r_max, n_radial, n_angular);
}

double AnnularGrid::s(int i) const {
  if (i == n_radial_ - 1) return std::log(r_max_);
  return std::log(r_min_) + i * h_s_;
}

double AnnularGrid::radius(int i) const {
  if (i == 0) return r_min_;
  if (i == n_radial_ - 1) return r_max_;
  return std::exp(s(i));
}

double AnnularGrid::theta(int j) const { return wrap(j) * h_theta_; }

Complex AnnularGrid::node(int i, int j) const { return std::polar(radius(i), theta(j)); }

std::string AnnularGrid::header_json() const {
  nlohmann::ordered_json j;
  j["r_min"] = r_min_;
  j["r_max"] = r_max_;
  j["n_radial"] = n_radial_;
  j["n_angular"] = n_angular_;
  return j.dump();
}

AnnularGrid AnnularGrid::from_header_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  return build(j.at("r_min").get<double>(), j.at("r_max").get<double>(),
               j.at("n_radial").get<int>(), j.at("n_angular").get<int>());
}

bool AnnularGrid::operator==(const AnnularGrid& o) const {
  return r_min_ == o.r_min_ && r_max_ == o.r_max_ && n_radial_ == o.n_radial_ &&
         n_angular_ == o.n_angular_;
}

GridField::GridField(AnnularGrid grid, std::vector<double> values, bool one_sided_boundary)
    : grid_(grid), values_(std::move(values)), one_sided_boundary_(one_sided_boundary) {
  if (values_.size() != grid_.size()) throw SizeError("field size does not match grid");
  for (double v : values_) {
    if (!std::isfinite(v)) throw EvaluationError("grid field value is not finite");
  }
}

GridField GridField::sample(const AnnularGrid& grid, const RealFn& f) {
  std::vector<double> v(grid.size());
  for (int i = 0; i < grid.n_radial(); ++i) {
    for (int j = 0; j < grid.n_angular(); ++j) v[grid.index(i, j)] = f(grid.node(i, j));
  }
  return GridField(grid, std::move(v));
}

double GridField::interior_max_abs() const {
  double m = 0.0;
  for (int i = 1; i + 1 < grid_.n_radial(); ++i) {
    for (int j = 0; j < grid_.n_angular(); ++j) m = std::max(m, std::abs(at(i, j)));
  }
  return m;
}

double GridField::max_abs_difference(const GridField& other, bool interior_only) const {
  if (!(grid_ == other.grid_)) throw SizeError("fields live on different grids");
  double m = 0.0;
  const int lo = interior_only ? 1 : 0;
  const int hi = interior_only ? grid_.n_radial() - 1 : grid_.n_radial();
  for (int i = lo; i < hi; ++i) {
    for (int j = 0; j < grid_.n_angular(); ++j) {
      m = std::max(m, std::abs(at(i, j) - other.at(i, j)));
    }
  }
  return m;
}

void GridField::write_csv(std::ostream& os) const {
  os << "s,theta,value\n";
  os << std::setprecision(17);
  for (int i = 0; i < grid_.n_radial(); ++i) {
    for (int j = 0; j < grid_.n_angular(); ++j) {
      os << grid_.s(i) << ',' << grid_.theta(j) << ',' << at(i, j) << '\n';
    }
  }
}

GridField GridField::read_csv(const AnnularGrid& grid, std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != "s,theta,value") {
    throw EvaluationError("grid CSV must start with the header 's,theta,value'");
  }
  std::vector<double> v;
  v.reserve(grid.size());
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto last = line.rfind(',');
    if (last == std::string::npos) throw EvaluationError("malformed grid CSV row: " + line);
    v.push_back(std::stod(line.substr(last + 1)));
  }
  return GridField(grid, std::move(v));
}

GridField apply_laplacian(const GridField& field) {
  const AnnularGrid& g = field.grid();
  const int nr = g.n_radial();
  const int na = g.n_angular();
  const double hs2 = g.h_s() * g.h_s();
  const double ht2 = g.h_theta() * g.h_theta();
  std::vector<double> out(g.size());
  for (int i = 0; i < nr; ++i) {
    const double e2s = std::exp(-2.0 * g.s(i));
    for (int j = 0; j < na; ++j) {
      double u_ss;
      if (i == 0) {
        u_ss = (2.0 * field.at(0, j) - 5.0 * field.at(1, j) + 4.0 * field.at(2, j) - field.at(3, j)) / hs2;
      } else if (i == nr - 1) {
        u_ss = (2.0 * field.at(i, j) - 5.0 * field.at(i - 1, j) + 4.0 * field.at(i - 2, j) -
                field.at(i - 3, j)) / hs2;
      } else {
        u_ss = (field.at(i + 1, j) - 2.0 * field.at(i, j) + field.at(i - 1, j)) / hs2;
      }
      const double u_tt = (field.at(i, j + 1) - 2.0 * field.at(i, j) + field.at(i, j - 1)) / ht2;
      out[g.index(i, j)] = e2s * (u_ss + u_tt);
    }
  }
  return GridField(g, std::move(out), true);
}

std::vector<Complex> grid_dz(const GridField& field) {
  const AnnularGrid& g = field.grid();
  const int nr = g.n_radial();
  const double hs = g.h_s();
  const double ht = g.h_theta();
  const Complex I(0.0, 1.0);
  std::vector<Complex> out(g.size());
  for (int i = 0; i < nr; ++i) {
    for (int j = 0; j < g.n_angular(); ++j) {
      double u_s;
      if (i == 0) {
        u_s = (-3.0 * field.at(0, j) + 4.0 * field.at(1, j) - field.at(2, j)) / (2.0 * hs);
      } else if (i == nr - 1) {
        u_s = (3.0 * field.at(i, j) - 4.0 * field.at(i - 1, j) + field.at(i - 2, j)) / (2.0 * hs);
      } else {
        u_s = (field.at(i + 1, j) - field.at(i - 1, j)) / (2.0 * hs);
      }
      const double u_t = (field.at(i, j + 1) - field.at(i, j - 1)) / (2.0 * ht);
      // d/dz = e^{-s} e^{-i theta} (d/ds - i d/dtheta) / 2
      out[g.index(i, j)] = 0.5 * std::polar(std::exp(-g.s(i)), -g.theta(j)) * (u_s - I * u_t);
    }
  }
  return out;
}

}  // namespace curvlab
