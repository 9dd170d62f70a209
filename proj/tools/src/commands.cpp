#include "commands.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

#include "curvlab/asymptotics.hpp"
#include "curvlab/derivatives.hpp"
#include "curvlab/errors.hpp"
#include "curvlab/metrics.hpp"
#include "curvlab/potential.hpp"
#include "curvlab/solver.hpp"

namespace curvlab::cli {

namespace {

Json pair_json(Complex z) { return Json::array({z.real(), z.imag()}); }

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(10) << v;
  return os.str();
}

std::string fmt(Complex z) { return "(" + fmt(z.real()) + ", " + fmt(z.imag()) + ")"; }

double parse_number(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ParameterError("not a number: '" + s + "'");
  }
  if (used != s.size()) throw ParameterError("not a number: '" + s + "'");
  return v;
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_number(item));
  return out;
}

ClosedFormSolution resolve(const FamilyArgs& fam) {
  if (fam.id.empty()) throw ParameterError("--id is required");
  return lookup(fam.id, fam.params());
}

Json limit_json(const LimitSequence& s) {
  Json j;
  j["name"] = s.name;
  j["target"] = s.target;
  j["innermost"] = pair_json(s.innermost);
  j["extrapolated"] = pair_json(s.extrapolated);
  j["verdict"] = to_string(s.verdict);
  auto rows = Json::array();
  for (std::size_t k = 0; k < s.radii.size(); ++k) rows.push_back({s.radii[k], s.values[k].real(), s.values[k].imag()});
  j["samples"] = rows;
  return j;
}

Json order_json(const OrderEstimate& o) {
  Json j;
  j["alpha_hat"] = o.alpha_hat;
  j["alpha_stderr"] = o.alpha_stderr;
  j["branch"] = to_string(o.branch);
  j["finite"] = o.finite;
  j["ratio_cross_check"] = o.ratio_cross_check;
  j["radii"] = o.radii;
  j["circle_max"] = o.circle_max;
  j["quotients"] = o.quotients;
  j["corrected_quotients"] = o.corrected_quotients;
  return j;
}

std::string csv_rows(const std::vector<double>& r, const std::vector<std::vector<double>>& cols,
                     const std::string& header) {
  std::ostringstream os;
  os << header << "\n" << std::setprecision(17);
  for (std::size_t k = 0; k < r.size(); ++k) {
    os << r[k];
    for (const auto& c : cols) os << "," << c[k];
    os << "\n";
  }
  return os.str();
}

bool passes(Verdict v) { return v != Verdict::fail; }

}  // namespace

Complex parse_point(const std::string& text) {
  const std::vector<double> v = parse_list(text);
  if (v.size() == 1) return {v[0], 0.0};
  if (v.size() == 2) return {v[0], v[1]};
  throw ParameterError("a point is written re,im");
}

// ---------------------------------------------------------------------------------------------
// families, curvature

Outcome families_list() {
  Outcome out;
  out.result = Json::array();
  std::ostringstream os;
  for (const auto& e : catalog()) {
    Json j;
    j["id"] = e.id;
    j["alpha"] = e.alpha;
    j["citation"] = e.citation;
    j["has_closed_derivatives"] = e.has_closed_derivatives;
    j["quarantined"] = e.quarantined;
    j["parameters"] = e.parameters;
    out.result.push_back(j);
    os << std::left << std::setw(30) << e.id << " alpha=" << std::setw(6) << fmt(e.alpha) << " " << e.citation;
    if (!e.parameters.empty()) os << " [" << e.parameters << "]";
    os << "\n";
  }
  out.summary = os.str();
  return out;
}

Outcome families_eval(const FamilyArgs& fam, const std::string& zs) {
  const ClosedFormSolution sol = resolve(fam);
  const Complex z = parse_point(zs);
  if (!sol.metric().domain().contains(z)) throw DomainError("z lies outside the family's domain");
  Outcome out;
  Json& j = out.result;
  j["id"] = sol.id;
  j["alpha"] = sol.alpha;
  j["z"] = pair_json(z);
  j["u"] = sol.u(z);
  j["kappa"] = sol.kappa(z);
  if (sol.remainder) j["remainder"] = sol.remainder(z);
  if (sol.remainder_z) j["remainder_z"] = pair_json(sol.remainder_z(z));
  if (sol.remainder_zz) j["remainder_zz"] = pair_json(sol.remainder_zz(z));
  const double residual = diff::laplacian(sol.u, z) + sol.kappa(z) * std::exp(2.0 * sol.u(z));
  j["residual"] = std::abs(residual);
  std::ostringstream os;
  os << sol.id << " at " << fmt(z) << ": u = " << fmt(sol.u(z));
  if (sol.remainder) os << ", " << (sol.critical() ? "w" : "v") << " = " << fmt(sol.remainder(z));
  if (sol.remainder_z) os << ", " << (sol.critical() ? "w_z" : "v_z") << " = " << fmt(sol.remainder_z(z));
  os << ", |residual| = " << fmt(std::abs(residual)) << "\n";
  out.summary = os.str();
  return out;
}

Outcome curvature_at(const FamilyArgs& fam, const std::string& zs) {
  const ClosedFormSolution sol = resolve(fam);
  const Complex z = parse_point(zs);
  const MetricRecord rec = evaluate_metric(sol.metric(), z);
  Outcome out;
  out.result = Json::parse(rec.to_json());
  out.summary = "lambda = " + fmt(rec.lambda) + ", kappa = " + fmt(rec.kappa) + ", Gamma = " + fmt(rec.gamma) +
                ", S = " + fmt(rec.s) + " [" + to_string(rec.method) + "]\n";
  return out;
}

// ---------------------------------------------------------------------------------------------
// solve

Outcome solve(const SolveArgs& args) {
  CurvatureField kappa;
  std::optional<ClosedFormSolution> oracle;
  std::string boundary_id = args.boundary;
  FamilyParams params = args.fam.params();
  if (args.kappa.rfind("const:", 0) == 0) {
    const double k = parse_number(args.kappa.substr(6));
    if (!(k < 0.0)) throw ParameterError("solve needs strictly negative curvature");
    kappa = CurvatureField::constant(k);
    if (boundary_id.empty()) {
      boundary_id = "hyperbolic-punctured-disk";
      if (!params.A) params.A = -k;
    }
  } else {
    const ClosedFormSolution s = lookup(args.kappa, params);
    kappa = s.kappa;
    if (boundary_id.empty()) boundary_id = args.kappa;
  }
  oracle = lookup(boundary_id, params);

  Outcome out;
  Json& j = out.result;
  j["kappa"] = args.kappa;
  j["boundary"] = boundary_id;

  if (args.radial) {
    const CurvatureField kf = kappa;
    const RadialFn kr = [kf](double r) { return kf(Complex(r, 0.0)); };
    for (double r : {args.rmin, 0.5 * (args.rmin + args.rmax), args.rmax}) {
      if (!(kr(r) < 0.0)) throw ParameterError("solve needs strictly negative curvature");
    }
    const RadialProfile p =
        solve_radial(kr, args.rmin, args.rmax, oracle->u(args.rmin), oracle->u(args.rmax), args.nr);
    double err = 0.0;
    for (std::size_t k = 0; k < p.r.size(); ++k) err = std::max(err, std::abs(p.u[k] - oracle->u(p.r[k])));
    j["mode"] = "radial";
    j["n"] = args.nr;
    j["newton_iterations"] = p.newton_iterations;
    j["residual"] = p.residual;
    j["error_estimate"] = p.error_estimate;
    j["oracle_sup_error"] = err;
    out.files.emplace_back("profile.csv", csv_rows(p.r, {p.u, p.u_raw}, "r,u,u_raw"));
    out.summary = "radial solve: " + std::to_string(p.newton_iterations) + " Newton steps, sup error vs " +
                  boundary_id + " = " + fmt(err) + "\n";
    return out;
  }

  const AnnularGrid grid = AnnularGrid::build(args.rmin, args.rmax, args.nr, args.ntheta);
  for (int i = 0; i < grid.n_radial(); ++i) {
    for (int jj = 0; jj < grid.n_angular(); ++jj) {
      if (!(kappa(grid.node(i, jj)) < 0.0)) throw ParameterError("solve needs strictly negative curvature");
    }
  }
  SolveConfig cfg;
  cfg.tol = args.tol;
  cfg.max_iters = args.max_iters;
  cfg.linearization_shift = args.shift;
  cfg.richardson = !args.no_richardson;
  if (args.fam.alpha) cfg.alpha = args.fam.alpha;
  cfg.validate();

  const SolveResult res = solve_dirichlet_annulus(kappa, DirichletData::from_function(oracle->u, args.rmin, args.rmax),
                                                  grid, cfg);
  const GridField exact = GridField::sample(grid, oracle->u);
  const double err = res.extrapolated.max_abs_difference(exact);
  const double err_raw = res.solution.max_abs_difference(exact);
  j["mode"] = "annulus";
  j["grid"] = Json::parse(grid.header_json());
  j["iterations"] = res.iterations;
  j["alpha_boundary"] = res.alpha_boundary;
  j["final_residual"] = res.trace.records.empty() ? 0.0 : res.trace.records.back().residual_supnorm;
  j["discretization_error_estimate"] = res.discretization_error_estimate;
  j["oracle_sup_error"] = err;
  j["oracle_sup_error_raw"] = err_raw;
  if (kappa.upper && *kappa.upper < 0.0) j["ahlfors_excess"] = ahlfors_excess(res.solution, -*kappa.upper);

  std::ostringstream sol_csv, ext_csv;
  res.solution.write_csv(sol_csv);
  res.extrapolated.write_csv(ext_csv);
  out.files.emplace_back("grid.json", grid.header_json());
  out.files.emplace_back("solution.csv", sol_csv.str());
  out.files.emplace_back("extrapolated.csv", ext_csv.str());
  out.files.emplace_back("trace.json", res.trace.to_json());
  out.summary = "annulus solve: " + std::to_string(res.iterations) + " iterations, sup error vs " + boundary_id +
                " = " + fmt(err) + " (raw " + fmt(err_raw) + ")\n";
  return out;
}

// ---------------------------------------------------------------------------------------------
// classify, verify

Outcome classify(const ClassifyArgs& args) {
  const ClosedFormSolution sol = resolve(args.fam);
  const OrderEstimate o = estimate_order(sol.u, dyadic_radii(args.k_first, args.k_last));
  Outcome out;
  out.result = order_json(o);
  out.result["declared_alpha"] = sol.alpha;
  out.files.emplace_back("order.csv", csv_rows(o.radii, {o.circle_max}, "r,circle_max"));
  out.summary = sol.id + ": alpha_hat = " + fmt(o.alpha_hat) + " +- " + fmt(o.alpha_stderr) + " (" +
                to_string(o.branch) + (o.finite ? "" : ", infinite order") + "), declared " + fmt(sol.alpha) + "\n";
  return out;
}

Outcome verify_main_theorem_cmd(const VerifyArgs& args) {
  const ClosedFormSolution sol = resolve(args.fam);
  const SingularityReport rep = verify_main_theorem(TheoremSubject::from(sol));
  Outcome out;
  out.result = Json::parse(rep.to_json());
  out.claim_passed = rep.all_pass();
  std::ostringstream os;
  os << sol.id << ": alpha_hat = " << fmt(rep.order.alpha_hat) << " (" << to_string(rep.branch) << ")\n";
  for (const auto& c : rep.claims) {
    os << "  " << std::left << std::setw(10) << c.quantity << to_string(c.verdict);
    if (!c.fit.radii.empty()) os << "  p=" << fmt(c.fit.p) << " q=" << fmt(c.fit.q);
    if (!c.note.empty()) os << "  " << c.note;
    os << "\n";
  }
  out.summary = os.str();
  std::vector<double> r, v;
  for (const auto& [rr, vv] : rep.remainder_samples) {
    r.push_back(rr);
    v.push_back(vv);
  }
  out.files.emplace_back("remainder.csv", csv_rows(r, {v}, "r,remainder_mean"));
  return out;
}

Outcome verify_geometric(const VerifyArgs& args) {
  const ClosedFormSolution sol = resolve(args.fam);
  if (!sol.kappa_at_zero) throw ParameterError(sol.id + " has no curvature value at 0");
  const GeometricLimits g = verify_geometric_limits(sol.metric(), *sol.kappa_at_zero, sol.alpha);
  Outcome out;
  out.result["id"] = sol.id;
  out.result["alpha"] = sol.alpha;
  out.result["limits"] = {limit_json(g.a), limit_json(g.b), limit_json(g.c)};
  out.result["all_pass"] = g.all_pass();
  out.claim_passed = g.all_pass();
  std::ostringstream os;
  for (const LimitSequence* s : {&g.a, &g.b, &g.c}) {
    os << "  " << std::left << std::setw(22) << s->name << fmt(s->extrapolated.real()) << " (target "
       << fmt(s->target) << ") " << to_string(s->verdict) << "\n";
  }
  out.summary = os.str();
  return out;
}

Outcome verify_yau(const VerifyArgs& args) {
  const ClosedFormSolution sol = resolve(args.fam);
  const YauReport y = verify_yau_ratios(sol.metric());
  Outcome out;
  Json& j = out.result;
  j["id"] = sol.id;
  j["precondition_ok"] = y.precondition_ok;
  j["precondition_note"] = y.precondition_note;
  j["probe_slope"] = y.probe_slope;
  j["ratios"] = {limit_json(y.lambda_ratio), limit_json(y.gamma_ratio), limit_json(y.s_ratio)};
  j["verdict"] = to_string(y.verdict);
  out.claim_passed = passes(y.verdict);
  std::ostringstream os;
  os << sol.id << ": " << to_string(y.verdict);
  if (!y.precondition_ok) os << " (" << y.precondition_note << ")";
  os << "\n";
  for (const LimitSequence* s : {&y.lambda_ratio, &y.gamma_ratio, &y.s_ratio}) {
    if (!s->radii.empty()) os << "  " << std::left << std::setw(14) << s->name << fmt(s->extrapolated) << "\n";
  }
  out.summary = os.str();
  return out;
}

Outcome verify_wachstum(const VerifyArgs& args) {
  const ClosedFormSolution sol = resolve(args.fam);
  const WachstumProfile w = wachstum_check(sol.u, sol.kappa.kappa);
  Outcome out;
  Json& j = out.result;
  j["id"] = sol.id;
  j["radii"] = w.radii;
  j["bound"] = w.bound;
  j["growth_exponent"] = w.growth_exponent;
  j["limit"] = w.limit;
  j["identically_zero"] = w.identically_zero;
  j["nonincreasing"] = w.nonincreasing;
  j["verdict"] = to_string(w.verdict);
  out.claim_passed = passes(w.verdict);
  out.files.emplace_back("wachstum.csv", csv_rows(w.radii, {w.bound}, "r,B"));
  out.summary = sol.id + ": B limit " + fmt(w.limit) + ", growth exponent " + fmt(w.growth_exponent) +
                (w.identically_zero ? ", identically zero" : "") + " -> " + to_string(w.verdict) + "\n";
  return out;
}

Outcome verify_continuity(const VerifyArgs& args) {
  const ClosedFormSolution sol = resolve(args.fam);
  const ContinuityProfile c = critical_continuity_check(sol.u, sol.kappa.kappa, {}, sol.kappa_at_zero);
  Outcome out;
  Json& j = out.result;
  j["id"] = sol.id;
  j["radii"] = c.radii;
  j["mean"] = c.mean;
  j["oscillation"] = c.oscillation;
  j["target"] = c.target;
  j["w_limit"] = c.w_limit;
  j["oscillation_decays"] = c.oscillation_decays;
  j["drift_monotone"] = c.drift_monotone;
  j["verdict"] = to_string(c.verdict);
  out.claim_passed = passes(c.verdict);
  out.files.emplace_back("continuity.csv", csv_rows(c.radii, {c.mean, c.oscillation}, "r,mean,oscillation"));
  out.summary = sol.id + ": w limit " + fmt(c.w_limit) + " (target " + fmt(c.target) + "), oscillation " +
                (c.oscillation_decays ? "decays" : "persists") + ", drift " +
                (c.drift_monotone ? "monotone" : "non-monotone") + " -> " + to_string(c.verdict) + "\n";
  return out;
}

Outcome verify_max_principle(const VerifyArgs& args) {
  RealFn u1, u2;
  CurvatureField kappa;
  if (args.pair == "theorem-pair") {
    // sub u^a_{alpha,R} below super u_alpha^A for A <= -kappa <= a
    const double alpha = args.fam.alpha.value_or(0.5);
    const double A = args.fam.A.value_or(-0.5 * args.kappa);
    const double a = args.fam.a.value_or(-2.0 * args.kappa);
    const double R = args.fam.R.value_or(2.0);
    u1 = subsolution_family(alpha, a, R).u;
    u2 = alpha < 1.0 ? supersolution_family(alpha, A).u : hyperbolic_punctured_disk(A).u;
    kappa = CurvatureField::constant(args.kappa);
  } else {
    const ClosedFormSolution s = lookup(args.pair, args.fam.params());
    if (!s.pair) throw ParameterError(args.pair + " carries no comparison pair");
    u1 = s.pair->u1;
    u2 = s.pair->u2;
    kappa = s.kappa;
  }
  MaxPrincipleOptions opt;
  opt.boundary_radius = args.boundary_radius;
  const AnnularGrid grid = AnnularGrid::build(args.rmin, args.rmax, args.nr, args.ntheta);
  const MaxPrincipleReport rep = check_max_principle(u1, u2, kappa, grid, opt);
  Outcome out;
  out.result = Json::parse(rep.to_json());
  out.result["pair"] = args.pair;
  // the theorem is only refuted when every hypothesis holds and the ordering fails
  out.claim_passed = !rep.all_hypotheses() || rep.conclusion_holds;
  std::ostringstream os;
  os << args.pair << ":\n";
  for (const HypothesisCheck* h :
       {&rep.subharmonic_supersolution, &rep.subsolution, &rep.boundary_ordering, &rep.order_comparison}) {
    os << "  " << std::left << std::setw(40) << h->name << (h->holds ? "holds" : "FAILS") << "\n";
  }
  os << "  min(u2 - u1) = " << fmt(rep.min_gap) << " at " << fmt(rep.argmin_gap) << "\n";
  out.summary = os.str();
  return out;
}

// ---------------------------------------------------------------------------------------------
// potential

Outcome potential(const PotentialArgs& args) {
  PotentialSpec spec;
  spec.r = args.r;
  spec.holder_exponent = args.holder;
  if (args.weight == "power") {
    spec.weight = WeightKind::power;
  } else if (args.weight == "log2") {
    spec.weight = WeightKind::log2;
  } else {
    throw ParameterError("--weight is power or log2");
  }
  double alpha = args.alpha.value_or(0.0);
  const std::string& q = args.q;
  if (q.rfind("const:", 0) == 0) {
    const double c = parse_number(q.substr(6));
    spec.q = [c](Complex) { return c; };
  } else if (q.rfind("linear:", 0) == 0) {
    const std::vector<double> c = parse_list(q.substr(7));
    if (c.size() != 3) throw ParameterError("linear:a,b,c means a + b x + c y");
    spec.q = [c](Complex x) { return c[0] + c[1] * x.real() + c[2] * x.imag(); };
  } else if (q.rfind("abs:", 0) == 0) {
    const double c = parse_number(q.substr(4));
    spec.q = [c](Complex x) { return c * std::abs(x); };
  } else if (q.rfind("catalog:", 0) == 0) {
    // -kappa e^{2v}: the Laplacian of u = v - alpha log|z| carries the weight |z|^{-2 alpha}
    const ClosedFormSolution s = lookup(q.substr(8), {args.alpha, {}, {}, {}, {}});
    if (s.critical() || !s.remainder) throw ParameterError("catalog densities need a subcritical family with v");
    const RealFn v = s.remainder;
    const CurvatureField k = s.kappa;
    spec.q = [v, k](Complex x) { return -k(x) * std::exp(2.0 * v(x)); };
    alpha = s.alpha;
  } else {
    throw ParameterError("--q is const:V, linear:a,b,c, abs:c or catalog:ID");
  }
  spec.alpha = alpha;
  spec.validate();

  const Complex z = parse_point(args.z);
  QuadratureOptions opt;
  opt.rel_tol = args.rel_tol;
  Outcome out;
  Json& j = out.result;
  PotentialValue pv;
  if (args.deriv == "none") {
    pv = newton_potential(spec, z, opt);
  } else if (args.deriv == "grad") {
    if (args.component != "x" && args.component != "y") throw ParameterError("gradient component is x or y");
    const int axis = args.component == "x" ? 0 : 1;
    pv = potential_gradient(spec, z, axis, opt);
    const Complex e = axis == 0 ? Complex(1.0, 0.0) : Complex(0.0, 1.0);
    const double h = args.fd_step;
    const double fd =
        (newton_potential(spec, z + h * e, opt).value - newton_potential(spec, z - h * e, opt).value) / (2.0 * h);
    j["finite_difference"] = fd;
    j["fd_step"] = h;
  } else if (args.deriv == "hess") {
    const std::string& c = args.component;
    if (c.size() != 2 || (c[0] != 'x' && c[0] != 'y') || (c[1] != 'x' && c[1] != 'y')) {
      throw ParameterError("Hessian component is xx, xy, yx or yy");
    }
    pv = potential_hessian(spec, z, c[0] == 'x' ? 0 : 1, c[1] == 'x' ? 0 : 1, opt);
  } else {
    throw ParameterError("--deriv is none, grad or hess");
  }
  j["value"] = pv.value;
  j["est_error"] = pv.est_error;
  j["nodes_used"] = pv.nodes_used;
  j["z"] = pair_json(z);
  j["deriv"] = args.deriv;
  std::string s = "value = " + fmt(pv.value) + " (est. error " + fmt(pv.est_error) + ", " +
                  std::to_string(pv.nodes_used) + " nodes)";
  if (j.contains("finite_difference")) s += ", finite difference " + fmt(j["finite_difference"].get<double>());
  out.summary = s + "\n";
  return out;
}

}  // namespace curvlab::cli
