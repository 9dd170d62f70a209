#include "curvlab/solver.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <numbers>

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include "json.hpp"

#include "curvlab/asymptotics.hpp"
#include "curvlab/derivatives.hpp"
#include "curvlab/errors.hpp"
#include "curvlab/families.hpp"

namespace curvlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSafetyFactor = 1.25;  // grid-convergence-index safety factor on the Richardson estimate

struct CurvatureBounds {
  double A;  // min of -kappa
  double a;  // max of -kappa
};

CurvatureBounds sample_bounds(const CurvatureField& kappa, const AnnularGrid& g, std::vector<double>& values) {
  values.assign(g.size(), 0.0);
  double lo = kInf, hi = -kInf;
  for (int i = 0; i < g.n_radial(); ++i) {
    for (int j = 0; j < g.n_angular(); ++j) {
      const double k = kappa(g.node(i, j));
      if (!std::isfinite(k)) throw EvaluationError("kappa is not finite on the grid");
      values[g.index(i, j)] = k;
      lo = std::min(lo, -k);
      hi = std::max(hi, -k);
    }
  }
  if (!(lo > 0.0)) throw ParameterError("kappa must be strictly negative on the annulus");
  CurvatureBounds b{lo, hi};
  if (kappa.upper) b.A = std::min(b.A, -*kappa.upper);
  if (kappa.lower) b.a = std::max(b.a, -*kappa.lower);
  if (!(b.A > 0.0)) throw ParameterError("declared curvature bounds are not strictly negative");
  return b;
}

// Discrete log-polar operator u_ss + u_tt at an interior node.
double scaled_laplacian(const AnnularGrid& g, const std::vector<double>& u, int i, int j) {
  const double hs2 = g.h_s() * g.h_s(), ht2 = g.h_theta() * g.h_theta();
  const double c = u[g.index(i, j)];
  return (u[g.index(i + 1, j)] - 2.0 * c + u[g.index(i - 1, j)]) / hs2 +
         (u[g.index(i, j + 1)] - 2.0 * c + u[g.index(i, j - 1)]) / ht2;
}

class AnnulusProblem {
public:
  AnnulusProblem(const CurvatureField& kappa, const DirichletData& bc, const AnnularGrid& grid)
      : g_(grid) {
    bounds_ = sample_bounds(kappa, g_, kappa_);
    r2_.resize(g_.n_radial());
    for (int i = 0; i < g_.n_radial(); ++i) r2_[i] = g_.radius(i) * g_.radius(i);
    inner_.resize(g_.n_angular());
    outer_.resize(g_.n_angular());
    for (int j = 0; j < g_.n_angular(); ++j) {
      inner_[j] = bc.inner(g_.theta(j));
      outer_[j] = bc.outer(g_.theta(j));
      if (!std::isfinite(inner_[j]) || !std::isfinite(outer_[j])) throw EvaluationError("boundary data not finite");
    }
  }

  const AnnularGrid& grid() const { return g_; }
  const CurvatureBounds& bounds() const { return bounds_; }
  int interior_rings() const { return g_.n_radial() - 2; }
  std::size_t unknowns() const { return static_cast<std::size_t>(interior_rings()) * g_.n_angular(); }
  std::size_t unknown(int i, int j) const { return static_cast<std::size_t>(i - 1) * g_.n_angular() + g_.wrap(j); }

  // -kappa e^{2u} r^2 at node (i, j)
  double source(int i, int j, double u) const { return -kappa_[g_.index(i, j)] * std::exp(2.0 * u) * r2_[i]; }
  double source_slope(int i, int j, double u) const { return 2.0 * source(i, j, u); }

  double residual(const std::vector<double>& u, int i, int j) const {
    return scaled_laplacian(g_, u, i, j) - source(i, j, u[g_.index(i, j)]);
  }

  double residual_supnorm(const std::vector<double>& u) const {
    double m = 0.0;
    for (int i = 1; i + 1 < g_.n_radial(); ++i) {
      for (int j = 0; j < g_.n_angular(); ++j) m = std::max(m, std::abs(residual(u, i, j)));
    }
    return m;
  }

  void impose_boundary(std::vector<double>& u) const {
    const int last = g_.n_radial() - 1;
    for (int j = 0; j < g_.n_angular(); ++j) {
      u[g_.index(0, j)] = inner_[j];
      u[g_.index(last, j)] = outer_[j];
    }
  }

  double boundary_value(int i, int j) const { return i == 0 ? inner_[g_.wrap(j)] : outer_[g_.wrap(j)]; }

  double alpha_from_boundary() const {
    double mi = 0.0, mo = 0.0;
    for (int j = 0; j < g_.n_angular(); ++j) {
      mi += inner_[j];
      mo += outer_[j];
    }
    mi /= g_.n_angular();
    mo /= g_.n_angular();
    return std::min(1.0, (mi - mo) / std::log(g_.r_max() / g_.r_min()));
  }

  std::vector<double> sample(const RealFn& f) const {
    std::vector<double> v(g_.size());
    for (int i = 0; i < g_.n_radial(); ++i) {
      for (int j = 0; j < g_.n_angular(); ++j) v[g_.index(i, j)] = f(g_.node(i, j));
    }
    return v;
  }

private:
  AnnularGrid g_;
  CurvatureBounds bounds_;
  std::vector<double> kappa_;
  std::vector<double> r2_;
  std::vector<double> inner_, outer_;
};

RealFn rescaled(const RealFn& u, double R) {
  if (R == 1.0) return u;
  const double lr = std::log(R);
  return [u, R, lr](Complex z) { return u(z / R) - lr; };
}

// Exact solution of curvature -A (supersolution for kappa <= -A) shifted up until it dominates
// the data and satisfies the discrete inequality.
std::vector<double> initial_supersolution(const AnnulusProblem& p, double alpha) {
  const AnnularGrid& g = p.grid();
  const double A = p.bounds().A;
  const double R = g.r_max() < 0.99 ? 1.0 : 1.1 * g.r_max();
  const RealFn base = rescaled(alpha < 1.0 ? supersolution_family(alpha, A).u : hyperbolic_punctured_disk(A).u, R);
  std::vector<double> b = p.sample(base);
  double shift = 0.0;
  const int last = g.n_radial() - 1;
  for (int j = 0; j < g.n_angular(); ++j) {
    shift = std::max(shift, p.boundary_value(0, j) - b[g.index(0, j)]);
    shift = std::max(shift, p.boundary_value(last, j) - b[g.index(last, j)]);
  }
  // L b <= e^{2C} src(b) at every interior node
  for (int i = 1; i < last; ++i) {
    for (int j = 0; j < g.n_angular(); ++j) {
      const double lb = scaled_laplacian(g, b, i, j);
      const double src = p.source(i, j, b[g.index(i, j)]);
      if (lb > src) shift = std::max(shift, 0.5 * std::log(lb / src) + 1e-12);
    }
  }
  for (double& v : b) v += shift;
  return b;
}

std::vector<double> initial_subsolution(const AnnulusProblem& p, double alpha) {
  const AnnularGrid& g = p.grid();
  const double a = p.bounds().a;
  const int last = g.n_radial() - 1;
  double R = 2.0 * std::max(1.0, g.r_max());
  for (int attempt = 0; attempt < 12; ++attempt, R *= 2.0) {
    std::vector<double> b = p.sample(subsolution_family(alpha, a, R).u);
    double shift = 0.0;
    for (int j = 0; j < g.n_angular(); ++j) {
      shift = std::max(shift, b[g.index(0, j)] - p.boundary_value(0, j));
      shift = std::max(shift, b[g.index(last, j)] - p.boundary_value(last, j));
    }
    bool ok = true;
    // L b >= e^{-2C} src(b)
    for (int i = 1; i < last && ok; ++i) {
      for (int j = 0; j < g.n_angular(); ++j) {
        const double lb = scaled_laplacian(g, b, i, j);
        const double src = p.source(i, j, b[g.index(i, j)]);
        if (lb >= src) continue;
        if (!(lb > 0.0)) {
          ok = false;
          break;
        }
        shift = std::max(shift, 0.5 * std::log(src / lb) + 1e-12);
      }
    }
    if (!ok) continue;
    for (double& v : b) v -= shift;
    return b;
  }
  throw NonConvergenceError("could not construct a discrete subsolution");
}

struct RunOutput {
  std::vector<double> u;
  IterationTrace trace;
};

RunOutput monotone_iteration(const AnnulusProblem& p, const std::vector<double>& sub, const std::vector<double>& super,
                             const SolveConfig& cfg) {
  const AnnularGrid& g = p.grid();
  const int nt = g.n_angular();
  const int last = g.n_radial() - 1;
  const double hs2 = g.h_s() * g.h_s(), ht2 = g.h_theta() * g.h_theta();
  const auto n = static_cast<Eigen::Index>(p.unknowns());

  std::vector<double> u = super;
  p.impose_boundary(u);

  for (std::size_t k = 0; k < u.size(); ++k) {
    if (sub[k] > super[k] + cfg.tol) throw BracketViolationError("subsolution exceeds supersolution");
  }

  std::vector<double> shift(static_cast<std::size_t>(n));
  auto refresh_shift = [&](const std::vector<double>& from) {
    for (int i = 1; i < last; ++i) {
      for (int j = 0; j < nt; ++j) {
        shift[p.unknown(i, j)] = cfg.linearization_shift * p.source_slope(i, j, from[g.index(i, j)]);
      }
    }
  };

  // -(L) + diag(shift): symmetric positive definite
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<std::size_t>(n) * 5);
  for (int i = 1; i < last; ++i) {
    for (int j = 0; j < nt; ++j) {
      const auto row = static_cast<Eigen::Index>(p.unknown(i, j));
      trips.emplace_back(row, row, 2.0 / hs2 + 2.0 / ht2);
      trips.emplace_back(row, static_cast<Eigen::Index>(p.unknown(i, j + 1)), -1.0 / ht2);
      trips.emplace_back(row, static_cast<Eigen::Index>(p.unknown(i, j - 1)), -1.0 / ht2);
      if (i > 1) trips.emplace_back(row, static_cast<Eigen::Index>(p.unknown(i - 1, j)), -1.0 / hs2);
      if (i + 1 < last) trips.emplace_back(row, static_cast<Eigen::Index>(p.unknown(i + 1, j)), -1.0 / hs2);
    }
  }
  Eigen::SparseMatrix<double> base(n, n);
  base.setFromTriplets(trips.begin(), trips.end());
  Eigen::SparseMatrix<double> M = base;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
  ldlt.analyzePattern(M);

  auto factorize = [&]() {
    M = base;
    for (Eigen::Index d = 0; d < n; ++d) M.coeffRef(d, d) += shift[static_cast<std::size_t>(d)];
    ldlt.factorize(M);
    if (ldlt.info() != Eigen::Success) throw NonConvergenceError("linear factorization failed");
  };

  refresh_shift(u);
  factorize();

  RunOutput out;
  Eigen::VectorXd rhs(n);
  double prev_step = kInf;
  bool refreshed = true;
  for (int it = 1; it <= cfg.max_iters; ++it) {
    // (-L + c) u_new = c u - src(u) + boundary couplings
    for (int i = 1; i < last; ++i) {
      for (int j = 0; j < nt; ++j) {
        const std::size_t q = p.unknown(i, j);
        const double uk = u[g.index(i, j)];
        double b = shift[q] * uk - p.source(i, j, uk);
        if (i == 1) b += u[g.index(0, j)] / hs2;
        if (i + 1 == last) b += u[g.index(last, j)] / hs2;
        rhs(static_cast<Eigen::Index>(q)) = b;
      }
    }
    const Eigen::VectorXd x = ldlt.solve(rhs);

    IterationRecord rec;
    rec.iter = it;
    rec.shift_refreshed = refreshed;
    rec.min_gap_to_subsolution = kInf;
    rec.max_gap_to_supersolution = -kInf;
    double rise = -kInf;
    for (int i = 1; i < last; ++i) {
      for (int j = 0; j < nt; ++j) {
        const std::size_t idx = g.index(i, j);
        const double nv = x(static_cast<Eigen::Index>(p.unknown(i, j)));
        if (!std::isfinite(nv)) throw NonConvergenceError("iterate is not finite");
        rise = std::max(rise, nv - u[idx]);
        rec.step_supnorm = std::max(rec.step_supnorm, std::abs(nv - u[idx]));
        u[idx] = nv;
      }
    }
    for (std::size_t k = 0; k < u.size(); ++k) {
      rec.min_gap_to_subsolution = std::min(rec.min_gap_to_subsolution, u[k] - sub[k]);
      rec.max_gap_to_supersolution = std::max(rec.max_gap_to_supersolution, u[k] - super[k]);
    }
    rec.residual_supnorm = p.residual_supnorm(u);
    out.trace.records.push_back(rec);
    if (cfg.verbose) {
      std::cerr << "iter " << it << " step " << rec.step_supnorm << " residual " << rec.residual_supnorm
                << " sub-gap " << rec.min_gap_to_subsolution << " super-gap " << rec.max_gap_to_supersolution
                << (refreshed ? " (shift refreshed)" : "") << '\n';
    }
    if (!std::isfinite(rec.residual_supnorm)) throw NonConvergenceError("residual is not finite");
    if (rise > cfg.tol) throw BracketViolationError("iterate increased by " + std::to_string(rise) + "; shift too small");
    if (rec.min_gap_to_subsolution < -cfg.tol || rec.max_gap_to_supersolution > cfg.tol) {
      throw BracketViolationError("iterate left the sub/supersolution bracket");
    }
    if (rec.step_supnorm <= cfg.tol && rec.residual_supnorm <= cfg.tol) {
      out.u = std::move(u);
      return out;
    }
    refreshed = false;
    if (rec.step_supnorm > 0.3 * prev_step) {
      refresh_shift(u);
      factorize();
      refreshed = true;
    }
    prev_step = rec.step_supnorm;
  }
  throw NonConvergenceError("monotone iteration did not converge in " + std::to_string(cfg.max_iters) +
                            " iterations");
}

}  // namespace

void SolveConfig::validate() const {
  if (!(tol > 0.0)) throw ParameterError("tol must be positive");
  if (max_iters < 1) throw ParameterError("max_iters must be at least 1");
  if (!(linearization_shift > 0.0)) throw ParameterError("linearization_shift must be positive");
  if (alpha && !(*alpha <= 1.0)) throw ParameterError("alpha must be <= 1");
}

std::string IterationTrace::to_json() const {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& r : records) {
    nlohmann::ordered_json j;
    j["iter"] = r.iter;
    j["residual_supnorm"] = r.residual_supnorm;
    j["step_supnorm"] = r.step_supnorm;
    j["min_gap_to_subsolution"] = r.min_gap_to_subsolution;
    j["max_gap_to_supersolution"] = r.max_gap_to_supersolution;
    j["shift_refreshed"] = r.shift_refreshed;
    arr.push_back(j);
  }
  return arr.dump(2);
}

DirichletData DirichletData::from_function(const RealFn& f, double r_inner, double r_outer) {
  DirichletData d;
  d.inner = [f, r_inner](double t) { return f(std::polar(r_inner, t)); };
  d.outer = [f, r_outer](double t) { return f(std::polar(r_outer, t)); };
  return d;
}

SolveResult solve_dirichlet_annulus(const CurvatureField& kappa, const DirichletData& boundary,
                                    const AnnularGrid& grid, const SolveConfig& cfg) {
  cfg.validate();
  if (!boundary.inner || !boundary.outer) throw ParameterError("boundary data missing");

  auto run = [&](const AnnularGrid& g, const SolveConfig& c, double& alpha_b, std::vector<double>& sub,
                 std::vector<double>& super) {
    const AnnulusProblem p(kappa, boundary, g);
    alpha_b = c.alpha ? *c.alpha : p.alpha_from_boundary();
    if (alpha_b > 0.98) alpha_b = 1.0;
    super = initial_supersolution(p, alpha_b);
    sub = initial_subsolution(p, alpha_b);
    p.impose_boundary(super);
    p.impose_boundary(sub);
    return monotone_iteration(p, sub, super, c);
  };

  double alpha_b = 0.0;
  std::vector<double> sub, super;
  RunOutput coarse = run(grid, cfg, alpha_b, sub, super);

  SolveResult res{GridField(grid, coarse.u), GridField(grid, coarse.u), 0.0, GridField(grid, sub),
                  GridField(grid, super), coarse.trace, {}, alpha_b,
                  static_cast<int>(coarse.trace.records.size())};
  if (!cfg.richardson) return res;

  const AnnularGrid fine =
      AnnularGrid::build(grid.r_min(), grid.r_max(), 2 * grid.n_radial() - 1, 2 * grid.n_angular());
  double alpha_f = 0.0;
  std::vector<double> sub_f, super_f;
  SolveConfig fine_cfg = cfg;
  fine_cfg.alpha = alpha_b;
  RunOutput refined = run(fine, fine_cfg, alpha_f, sub_f, super_f);

  std::vector<double> ext(grid.size());
  double est = 0.0;
  for (int i = 0; i < grid.n_radial(); ++i) {
    for (int j = 0; j < grid.n_angular(); ++j) {
      const double c = coarse.u[grid.index(i, j)];
      const double f = refined.u[fine.index(2 * i, 2 * j)];
      ext[grid.index(i, j)] = (4.0 * f - c) / 3.0;
      est = std::max(est, kSafetyFactor * 4.0 * std::abs(f - c) / 3.0);  // error of the coarse solution
    }
  }
  res.extrapolated = GridField(grid, ext);
  res.discretization_error_estimate = est;
  res.refined_trace = refined.trace;
  return res;
}

// ---------------------------------------------------------------------------------------------

namespace {

struct RadialSystem {
  std::vector<double> r, r2, kappa;
  double h;
  double u_in, u_out;

  RadialSystem(const RadialFn& k, double r_in, double r_out, double a, double b, int n) : u_in(a), u_out(b) {
    const double s0 = std::log(r_in), s1 = std::log(r_out);
    h = (s1 - s0) / (n - 1);
    for (int i = 0; i < n; ++i) {
      const double ri = i == n - 1 ? r_out : std::exp(s0 + i * h);
      r.push_back(ri);
      r2.push_back(ri * ri);
      const double kv = k(ri);
      if (!std::isfinite(kv)) throw EvaluationError("kappa is not finite on the radial grid");
      if (!(kv < 0.0)) throw ParameterError("solve_radial needs kappa strictly negative");
      kappa.push_back(kv);
    }
  }

  // h^2-scaled residual u_{i+1} - 2u_i + u_{i-1} + h^2 r^2 kappa e^{2u}
  void residual(const std::vector<double>& u, std::vector<double>& F) const {
    const std::size_t n = u.size();
    F.assign(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
      F[i] = u[i + 1] - 2.0 * u[i] + u[i - 1] + h * h * r2[i] * kappa[i] * std::exp(2.0 * u[i]);
    }
  }

  static double supnorm(const std::vector<double>& F) {
    double m = 0.0;
    for (double v : F) m = std::max(m, std::abs(v));
    return m;
  }

  // Newton with backtracking; returns (solution, residual, iterations)
  std::vector<double> solve(double& resid, int& iters) const {
    const std::size_t n = r.size();
    std::vector<double> u(n);
    for (std::size_t i = 0; i < n; ++i) u[i] = u_in + (u_out - u_in) * static_cast<double>(i) / (n - 1);
    std::vector<double> F, Ft, lo(n), di(n), up(n), d(n), trial(n);
    residual(u, F);
    double norm = supnorm(F);
    for (iters = 0; iters < 200; ++iters) {
      if (norm <= 1e-13) break;
      // J = tridiag(1, -2 + 2 h^2 r^2 kappa e^{2u}, 1) on interior rows
      for (std::size_t i = 1; i + 1 < n; ++i) {
        lo[i] = i > 1 ? 1.0 : 0.0;
        up[i] = i + 2 < n ? 1.0 : 0.0;
        di[i] = -2.0 + 2.0 * h * h * r2[i] * kappa[i] * std::exp(2.0 * u[i]);
        d[i] = -F[i];
      }
      // Thomas
      for (std::size_t i = 2; i + 1 < n; ++i) {
        const double w = lo[i] / di[i - 1];
        di[i] -= w * up[i - 1];
        d[i] -= w * d[i - 1];
      }
      d[n - 2] /= di[n - 2];
      for (std::size_t i = n - 2; i-- > 1;) d[i] = (d[i] - up[i] * d[i + 1]) / di[i];

      double lambda = 1.0;
      bool accepted = false;
      for (int half = 0; half < 40; ++half, lambda *= 0.5) {
        trial = u;
        for (std::size_t i = 1; i + 1 < n; ++i) trial[i] += lambda * d[i];
        residual(trial, Ft);
        const double tn = supnorm(Ft);
        if (std::isfinite(tn) && tn < (1.0 - 1e-4 * lambda) * norm) {
          u.swap(trial);
          F.swap(Ft);
          norm = tn;
          accepted = true;
          break;
        }
      }
      if (!accepted) {
        if (norm <= 1e-10) break;  // stagnated at roundoff
        throw NewtonDivergenceError("damped Newton failed to reduce the residual (" + std::to_string(norm) + ")");
      }
    }
    if (!(norm <= 1e-10)) throw NewtonDivergenceError("Newton did not reach residual 1e-10");
    resid = norm;
    return u;
  }
};

}  // namespace

RadialProfile solve_radial(const RadialFn& kappa, double r_in, double r_out, double u_in, double u_out, int n) {
  if (!(r_in > 0.0 && r_in < r_out && r_out < 1.0)) throw DomainError("solve_radial needs 0 < r_in < r_out < 1");
  if (n < 5) throw SizeError("solve_radial needs n >= 5");
  if (!std::isfinite(u_in) || !std::isfinite(u_out)) throw EvaluationError("boundary values not finite");

  const RadialSystem coarse(kappa, r_in, r_out, u_in, u_out, n);
  const RadialSystem fine(kappa, r_in, r_out, u_in, u_out, 2 * n - 1);
  RadialProfile out;
  double res_f = 0.0;
  int it_f = 0;
  out.u_raw = coarse.solve(out.residual, out.newton_iterations);
  const std::vector<double> uf = fine.solve(res_f, it_f);
  out.r = coarse.r;
  out.u.resize(n);
  for (int i = 0; i < n; ++i) {
    out.u[i] = (4.0 * uf[2 * i] - out.u_raw[i]) / 3.0;
    out.error_estimate = std::max(out.error_estimate, std::abs(uf[2 * i] - out.u_raw[i]) / 3.0);
  }
  return out;
}

double ahlfors_excess(const GridField& u, double A) {
  if (!(A > 0.0)) throw ParameterError("ahlfors_excess needs A > 0");
  const AnnularGrid& g = u.grid();
  double worst = -kInf;
  for (int i = 0; i < g.n_radial(); ++i) {
    const double r = g.radius(i);
    if (!(r < 1.0)) continue;
    const double bound = -0.5 * std::log(A) - std::log(r) - std::log(-std::log(r));
    for (int j = 0; j < g.n_angular(); ++j) worst = std::max(worst, u.at(i, j) - bound);
  }
  return worst;
}

// ---------------------------------------------------------------------------------------------

bool MaxPrincipleReport::all_hypotheses() const {
  return subharmonic_supersolution.holds && subsolution.holds && boundary_ordering.holds && order_comparison.holds;
}

std::string MaxPrincipleReport::to_json() const {
  auto hyp = [](const HypothesisCheck& h) {
    nlohmann::ordered_json j;
    j["name"] = h.name;
    j["holds"] = h.holds;
    j["worst_margin"] = h.worst;
    j["detail"] = h.detail;
    return j;
  };
  nlohmann::ordered_json j;
  j["hypotheses"] = {hyp(subharmonic_supersolution), hyp(subsolution), hyp(boundary_ordering),
                     hyp(order_comparison)};
  j["alpha_u1"] = alpha_u1;
  j["alpha_u2"] = u2_order_finite ? nlohmann::ordered_json(alpha_u2) : nlohmann::ordered_json("infinite");
  j["min_gap"] = min_gap;
  j["argmin_gap"] = {argmin_gap.real(), argmin_gap.imag()};
  j["conclusion_holds"] = conclusion_holds;
  j["all_hypotheses"] = all_hypotheses();
  return j.dump(2);
}

MaxPrincipleReport check_max_principle(const RealFn& u1, const RealFn& u2, const CurvatureField& kappa,
                                       const AnnularGrid& grid, const MaxPrincipleOptions& options) {
  MaxPrincipleReport rep;
  rep.subharmonic_supersolution = {"(i) u2 subharmonic supersolution", true, kInf, ""};
  rep.subsolution = {"(ii) u1 subsolution", true, kInf, ""};
  rep.boundary_ordering = {"(iii) u1 <= u2 on the boundary circle", true, kInf, ""};
  rep.order_comparison = {"(iv) order(u1) <= order(u2) < infinity", true, 0.0, ""};

  auto note_worst = [](HypothesisCheck& h, double margin, Complex z) {
    if (margin < h.worst) {
      h.worst = margin;
      if (margin < 0.0) {
        h.holds = false;
        h.detail = "violated at z = (" + std::to_string(z.real()) + ", " + std::to_string(z.imag()) + ")";
      }
    }
  };

  rep.min_gap = kInf;
  for (int i = 0; i < grid.n_radial(); ++i) {
    for (int j = 0; j < grid.n_angular(); ++j) {
      const Complex z = grid.node(i, j);
      const double a = u1(z), b = u2(z);
      if (b - a < rep.min_gap) {
        rep.min_gap = b - a;
        rep.argmin_gap = z;
      }
      if (grid.is_boundary_ring(i)) continue;
      const double r = std::abs(z);
      const double k = kappa(z);
      const double lap2 = diff::laplacian(u2, z);
      const double lap1 = diff::laplacian(u1, z);
      const double tol2 = 1e-6 * (1.0 + std::abs(b)) / (r * r);
      const double tol1 = 1e-6 * (1.0 + std::abs(a)) / (r * r);
      note_worst(rep.subharmonic_supersolution, lap2 + tol2, z);
      note_worst(rep.subharmonic_supersolution, -k * std::exp(2.0 * b) - lap2 + tol2 * (1.0 + std::abs(lap2)), z);
      note_worst(rep.subsolution, lap1 + k * std::exp(2.0 * a) + tol1 * (1.0 + std::abs(lap1)), z);
    }
  }

  const int nb = options.boundary_samples;
  for (int j = 0; j < nb; ++j) {
    const Complex z = std::polar(options.boundary_radius, 2.0 * std::numbers::pi * j / nb);
    const double a = u1(z), b = u2(z);
    const double margin = std::isinf(b) && b > 0 ? kInf : b - a + 1e-12 * (1.0 + std::abs(a));
    note_worst(rep.boundary_ordering, margin, z);
  }

  const auto radii = dyadic_radii(8, 26);
  const OrderEstimate o1 = estimate_order(u1, radii);
  const OrderEstimate o2 = estimate_order(u2, radii);
  rep.alpha_u1 = o1.alpha_hat;
  rep.alpha_u2 = o2.alpha_hat;
  rep.u2_order_finite = o2.finite;
  if (!o2.finite) {
    rep.order_comparison.holds = false;
    rep.order_comparison.worst = -kInf;
    rep.order_comparison.detail = "circle maxima of u2 grow faster than log(1/r): infinite order";
  } else {
    const double slack = 3.0 * std::max(o1.alpha_stderr, o2.alpha_stderr) + 1e-9;
    rep.order_comparison.worst = o2.alpha_hat - o1.alpha_hat + slack;
    rep.order_comparison.holds = o1.finite && rep.order_comparison.worst >= 0.0;
    if (!rep.order_comparison.holds) rep.order_comparison.detail = "order(u1) exceeds order(u2)";
  }
  rep.conclusion_holds = rep.min_gap >= -1e-9;
  return rep;
}

// ---------------------------------------------------------------------------------------------

RealFn grid_interpolant(const GridField& field) {
  const auto shared = std::make_shared<const GridField>(field);
  return [shared](Complex z) {
    const GridField& f = *shared;
    const AnnularGrid& g = f.grid();
    const double r = std::abs(z);
    const double s = std::log(r);
    const double s0 = std::log(g.r_min());
    const double tol = 1e-12 * g.h_s();
    if (s < s0 - tol || s > std::log(g.r_max()) + tol) throw DomainError("point outside the grid annulus");
    double t = std::arg(z);
    if (t < 0.0) t += 2.0 * std::numbers::pi;

    const double xs = (s - s0) / g.h_s();
    const double xt = t / g.h_theta();
    int i0 = static_cast<int>(std::floor(xs)) - 1;
    i0 = std::clamp(i0, 0, g.n_radial() - 4);
    const int j0 = static_cast<int>(std::floor(xt)) - 1;

    auto lagrange = [](double x, double x0, double w[4]) {
      for (int a = 0; a < 4; ++a) {
        double p = 1.0;
        for (int b = 0; b < 4; ++b) {
          if (b != a) p *= (x - (x0 + b)) / static_cast<double>(a - b);
        }
        w[a] = p;
      }
    };
    double ws[4], wt[4];
    lagrange(xs, i0, ws);
    lagrange(xt, j0, wt);
    double v = 0.0;
    for (int a = 0; a < 4; ++a) {
      double row = 0.0;
      for (int b = 0; b < 4; ++b) row += wt[b] * f.at(i0 + a, j0 + b);
      v += ws[a] * row;
    }
    return v;
  };
}

}  // namespace curvlab
