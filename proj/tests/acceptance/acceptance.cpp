// One line per acceptance criterion; exit status is nonzero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "curvlab/asymptotics.hpp"
#include "curvlab/derivatives.hpp"
#include "curvlab/families.hpp"
#include "curvlab/potential.hpp"
#include "curvlab/solver.hpp"
#include "oracles/oracles.hpp"

using namespace curvlab;

namespace {

struct Check {
  bool ok = true;
  std::ostringstream detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      detail << " [failed: " << what << "]";
    }
  }
};

using Criterion = std::function<void(Check&)>;

double dist(Complex a, double b) { return std::abs(a - b); }

void catalog_residuals(Check& c) {
  double worst = 0.0;
  for (const auto& s : catalog_instances()) {
    c.require(!s.quarantined, s.id + " quarantined");
    const double res = residual_sup(s);
    worst = std::max(worst, res);
    c.require(res <= 1e-4, s.id);
  }
  // the library's u against closed forms derived independently
  double mismatch = 0.0;
  for (double a : {-1.0, 0.0, 0.3, 0.5, 0.75, 1.0}) {
    const auto s = nitsche_family(a);
    for (Complex z : {Complex(0.2, 0.1), Complex(-1e-3, 6e-4), Complex(0.0, -0.7)}) {
      mismatch = std::max(mismatch, std::abs(s.u(z) - oracle::nitsche_u(a, z)));
      const double lap = oracle::laplacian(s.u, z, std::min(0.03, 0.01 * oracle::big_l(z)));
      c.require(std::abs(lap + s.kappa(z) * std::exp(2.0 * s.u(z))) <= 1e-4, "independent stencil residual");
    }
  }
  c.require(mismatch <= 1e-12, "nitsche closed form");
  c.detail << "worst residual " << worst << ", closed-form mismatch " << mismatch;
}

void order_recovery(Check& c) {
  const auto radii = dyadic_radii(8, 26);
  double worst = 0.0;
  for (double a : {-1.0, -0.5, 0.0, 0.3, 0.5, 0.75, 0.9, 1.0}) {
    const auto est = estimate_order([a](Complex z) { return oracle::nitsche_u(a, z); }, radii);
    worst = std::max(worst, std::abs(est.alpha_hat - a));
    c.require(std::abs(est.alpha_hat - a) <= 1e-2, "alpha " + std::to_string(a));
  }
  c.detail << "worst |alpha_hat - alpha| " << worst;
}

void main_theorem(Check& c) {
  double worst = 0.0;
  for (double a : {-1.0, 0.3, 0.75, 1.0}) {
    const auto rep = verify_main_theorem(TheoremSubject::from(nitsche_family(a)));
    const std::string tag = "alpha " + std::to_string(a);
    c.require(rep.all_pass(), tag + " report");
    int seen = 0;
    for (const auto& claim : rep.claims) {
      const bool first = claim.quantity == "v_z" || claim.quantity == "w_z";
      const bool second = claim.quantity == "v_zz" || claim.quantity == "w_zz";
      if (!first && !second) continue;
      ++seen;
      const auto row = first ? oracle::first_derivative_row(a) : oracle::second_derivative_row(a);
      c.require(claim.verdict == Verdict::pass, tag + " " + claim.quantity + " verdict");
      c.require((claim.shape == RateShape::continuous) == row.continuous, tag + " " + claim.quantity + " row");
      if (!row.continuous) {
        const double dev = std::max(std::abs(claim.fit.p - row.p), std::abs(claim.fit.q - row.q));
        worst = std::max(worst, dev);
        c.require(dev <= 0.05, tag + " " + claim.quantity + " exponents");
      }
    }
    c.require(seen == 2, tag + " claims present");
  }
  c.detail << "worst exponent deviation " << worst;
}

void geometric(Check& c) {
  double worst = 0.0;
  for (double a : {-1.0, 0.3, 0.5, 0.75, 1.0}) {
    const auto lim = verify_geometric_limits(nitsche_family(a).metric(), -4.0, a);
    const double da = dist(lim.a.extrapolated, oracle::limit_scaled_density(a, -4.0));
    const double db = dist(lim.b.extrapolated, oracle::limit_connection(a));
    const double dc = dist(lim.c.extrapolated, oracle::limit_schwarzian(a));
    worst = std::max({worst, da, db, dc});
    c.require(std::max({da, db, dc}) <= 1e-2, "alpha " + std::to_string(a));
    c.require(std::abs(lim.a.radii.back() - 1e-7) <= 1e-12, "innermost radius 1e-7");
  }
  c.detail << "worst limit deviation " << worst;
}

void continuity(Check& c) {
  const auto s = nitsche_family(1.0);
  const auto prof = critical_continuity_check(s.u, s.kappa.kappa);
  const double target = oracle::critical_w_limit(-4.0);
  const Complex z(1e-8, 0.0);
  const double w_at = s.u(z) + std::log(std::abs(z)) + std::log(oracle::big_l(z));
  c.require(prof.verdict == Verdict::pass, "nitsche(1) verdict");
  c.require(std::abs(prof.w_limit - target) <= 6e-2, "extrapolated w limit");
  c.require(std::abs(w_at - target) <= 6e-2, "w at 1e-8");
  const auto bk = counterexample("alpha1-bounded-kappa");
  const auto neg = critical_continuity_check(bk.u, bk.kappa.kappa);
  c.require(neg.verdict == Verdict::fail, "alpha1-bounded-kappa must fail");
  c.detail << "w limit " << prof.w_limit << ", w(1e-8) " << w_at << ", control " << to_string(neg.verdict);
}

void yau(Check& c) {
  const auto rep = verify_yau_ratios(nitsche_family(1.0).metric());
  const double d = std::max({dist(rep.lambda_ratio.extrapolated, 1.0), dist(rep.gamma_ratio.extrapolated, 1.0),
                             dist(rep.s_ratio.extrapolated, 1.0)});
  c.require(rep.precondition_ok, "precondition");
  c.require(rep.verdict == Verdict::pass, "verdict");
  c.require(d <= 1e-2, "ratios");
  c.detail << "worst |ratio - 1| " << d;
}

void solver(Check& c) {
  const auto kconst = [](double) { return -4.0; };
  double radial_err = 0.0;
  for (auto exact : {std::function<double(double)>([](double r) { return oracle::hyperbolic_disk_u(4.0, r); }),
                     std::function<double(double)>([](double r) { return oracle::punctured_disk_u(4.0, r); })}) {
    const auto p = solve_radial(kconst, 1e-3, 0.9, exact(1e-3), exact(0.9), 2049);
    for (std::size_t k = 0; k < p.r.size(); ++k) radial_err = std::max(radial_err, std::abs(p.u[k] - exact(p.r[k])));
  }
  c.require(radial_err <= 1e-6, "radial");

  const auto grid = AnnularGrid::build(1e-3, 0.9, 257, 256);
  const std::pair<const char*, RealFn> oracles[] = {
      {"hyperbolic disk", [](Complex z) { return oracle::hyperbolic_disk_u(4.0, z); }},
      {"punctured disk", [](Complex z) { return oracle::punctured_disk_u(4.0, z); }},
  };
  double err = 0.0, secs = 0.0, excess = -1e300;
  for (const auto& [name, u] : oracles) {
    SolveConfig cfg;
    const auto t0 = std::chrono::steady_clock::now();
    const auto res = solve_dirichlet_annulus(CurvatureField::constant(-4.0),
                                             DirichletData::from_function(u, 1e-3, 0.9), grid, cfg);
    const double t = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    secs = std::max(secs, t);
    const double e = res.extrapolated.max_abs_difference(GridField::sample(grid, u));
    err = std::max(err, e);
    c.require(e <= 1e-4, std::string(name) + " 2D oracle");
    c.require(t <= 300.0, std::string(name) + " 2D wall time");

    bool bracketed = !res.trace.records.empty();
    for (const auto* tr : {&res.trace, &res.refined_trace}) {
      for (const auto& r : tr->records) {
        bracketed = bracketed && r.min_gap_to_subsolution >= -cfg.tol && r.max_gap_to_supersolution <= cfg.tol;
      }
    }
    c.require(bracketed, std::string(name) + " bracketing");
    const double x = ahlfors_excess(res.solution, 4.0);
    excess = std::max(excess, x);
    c.require(x <= 10.0 * cfg.tol + res.discretization_error_estimate, std::string(name) + " Ahlfors bound");
  }
  c.detail << "radial " << radial_err << ", 2D " << err << " in " << secs << " s, Ahlfors excess " << excess;
}

void max_principle(Check& c) {
  const auto grid = AnnularGrid::build(1e-3, 0.9, 65, 64);
  const auto pair = check_max_principle(subsolution_family(0.5, 8.0, 2.0).u, supersolution_family(0.5, 2.0).u,
                                        CurvatureField::constant(-4.0), grid);
  c.require(pair.all_hypotheses() && pair.conclusion_holds && pair.min_gap >= 0.0, "theorem pair");

  const auto sh = counterexample("maxprin-superharmonic");
  const auto a = check_max_principle(sh.pair->u1, sh.pair->u2, sh.kappa, grid);
  c.require(!a.subharmonic_supersolution.holds && a.subsolution.holds && a.boundary_ordering.holds &&
                a.order_comparison.holds && a.min_gap < 0.0,
            "superharmonic pair breaks only (i)");

  const auto oi = counterexample("maxprin-order-infty");
  const auto b = check_max_principle(oi.pair->u1, oi.pair->u2, oi.kappa, grid);
  c.require(b.subharmonic_supersolution.holds && b.subsolution.holds && b.boundary_ordering.holds &&
                !b.order_comparison.holds && b.min_gap < 0.0,
            "infinite-order pair breaks only (iv)");
  c.detail << "gaps " << pair.min_gap << ", " << a.min_gap << ", " << b.min_gap;
}

void potential(Check& c) {
  auto spec = [](double alpha, RealFn q) {
    PotentialSpec s;
    s.q = std::move(q);
    s.alpha = alpha;
    return s;
  };
  const RealFn one = [](Complex) { return 1.0; };
  const double w0 = newton_potential(spec(0.0, one), Complex(0, 0)).value;
  const double w5 = newton_potential(spec(0.5, one), Complex(0, 0)).value;
  c.require(std::abs(w0 - oracle::unit_potential(0.0, 0.0)) <= 1e-5, "omega(0), alpha 0");
  c.require(std::abs(w5 - oracle::unit_potential(0.5, 0.0)) <= 1e-5, "omega(0), alpha 1/2");

  const RealFn qs[] = {one, [](Complex xi) { return xi.real() + 2.0; }, [](Complex xi) { return std::abs(xi); }};
  double worst_lap = 0.0;
  for (const auto& q : qs) {
    for (double a : {0.0, 0.25, 0.5, 0.75}) {
      const auto s = spec(a, q);
      for (Complex z : {Complex(0.1, 0.0), Complex(-0.2, 0.3), Complex(0.35, -0.45), Complex(0.0, 0.8)}) {
        const double lap = diff::laplacian([&](Complex w) { return newton_potential(s, w).value; }, z, 0.02);
        worst_lap = std::max(worst_lap, std::abs(lap / s.density(z) - 1.0));
      }
    }
  }
  c.require(worst_lap <= 1e-4, "Laplacian recovers the density");

  double worst_p = 0.0;
  FitOptions power_fit;
  power_fit.log_log_regressor = false;
  for (double a : {0.6, 0.75, 0.9}) {
    std::vector<double> radii, g;
    for (int k = 0; k <= 12; ++k) {
      radii.push_back(std::pow(10.0, -2.0 - 0.5 * k));
      g.push_back(std::abs(potential_gradient(spec(a, one), Complex(radii.back(), 0), 0).value));
    }
    worst_p = std::max(worst_p, std::abs(fit_growth_samples(radii, g, power_fit).p - (1.0 - 2.0 * a)));
  }
  c.require(worst_p <= 0.05, "power-weight gradient exponent");

  PotentialSpec lg = spec(0.0, one);
  lg.weight = WeightKind::log2;
  lg.r = 0.5;
  std::vector<double> radii, g;
  for (int k = 0; k <= 16; ++k) {
    radii.push_back(std::pow(10.0, -2.0 - 0.5 * k));
    g.push_back(std::abs(potential_gradient(lg, Complex(radii.back(), 0), 0).value));
  }
  const auto fit = fit_growth_samples(radii, g);
  c.require(std::abs(fit.p + 1.0) <= 0.05 && std::abs(fit.q + 1.0) <= 0.05, "log2 gradient exponents");
  c.detail << "omega(0) " << w0 << ", " << w5 << "; Laplacian rel " << worst_lap << "; p dev " << worst_p
           << "; log2 (p, q) (" << fit.p << ", " << fit.q << ")";
}

void wachstum(Check& c) {
  const auto s = nitsche_family(1.0);
  const auto prof = wachstum_check(s.u, s.kappa.kappa);
  c.require(prof.verdict == Verdict::pass, "nitsche(1) bounded");
  c.require(std::abs(prof.limit - oracle::kWachstumLimit) <= 0.1, "limit 2");
  double dev = 0.0;
  for (std::size_t k = 0; k < prof.radii.size(); ++k) {
    dev = std::max(dev, std::abs(prof.bound[k] - oracle::wachstum_critical(-std::log(prof.radii[k]))));
  }
  c.require(dev <= 1e-6, "B(r) profile");
  const auto pd = hyperbolic_punctured_disk(4.0);
  const auto zero = wachstum_check(pd.u, pd.kappa.kappa);
  c.require(zero.identically_zero, "punctured disk B = 0");
  c.detail << "limit " << prof.limit << ", profile dev " << dev;
}

}  // namespace

int main() {
  const std::vector<std::pair<int, Criterion>> criteria = {
      {1, catalog_residuals}, {2, order_recovery}, {3, main_theorem}, {4, geometric}, {5, continuity},
      {6, yau},               {7, solver},         {8, max_principle}, {9, potential}, {10, wachstum},
  };
  int failed = 0;
  for (const auto& [n, run] : criteria) {
    Check c;
    try {
      run(c);
    } catch (const std::exception& e) {
      c.ok = false;
      c.detail << " [exception: " << e.what() << "]";
    }
    std::printf("criterion %d: %s  %s\n", n, c.ok ? "PASS" : "FAIL", c.detail.str().c_str());
    std::fflush(stdout);
    failed += c.ok ? 0 : 1;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
