#include <filesystem>
#include <functional>
#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"
#include "curvlab/errors.hpp"

using namespace curvlab::cli;

namespace {

void add_family_options(CLI::App* sub, FamilyArgs& f, bool require_id = true) {
  auto* id = sub->add_option("--id", f.id, "catalog id (see `families list`; `nitsche` takes --alpha)");
  if (require_id) id->required();
  sub->add_option("--alpha", f.alpha, "order parameter");
  sub->add_option("--A", f.A, "curvature bound A");
  sub->add_option("--a", f.a, "curvature bound a");
  sub->add_option("--R", f.R, "rescaling radius R > 1");
  sub->add_option("--beta", f.beta, "Hoelder rate of alpha1-holder-rate");
}

int exit_code_for(const std::exception& e) {
  using namespace curvlab;
  if (dynamic_cast<const NonConvergenceError*>(&e) || dynamic_cast<const BracketViolationError*>(&e) ||
      dynamic_cast<const NewtonDivergenceError*>(&e) || dynamic_cast<const QuadratureBudgetError*>(&e)) {
    return kExitNonConvergence;
  }
  if (dynamic_cast<const curvlab::Error*>(&e)) return kExitUsage;
  return kExitError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Conformal metrics of negative curvature near an isolated singularity", "curvlab"};
  app.set_version_flag("--version", CURVLAB_VERSION);
  app.require_subcommand(1);
  app.fallthrough();

  std::string out_dir;
  bool as_json = false;
  bool expect_fail = false;
  app.add_option("--out", out_dir, "write the report and data files into this directory");
  app.add_flag("--json", as_json, "print the report as JSON");
  app.add_flag("--expect-fail", expect_fail, "negative control: a failed claim exits 0, a passing one exits 4");

  std::string command;
  std::function<Outcome()> action;
  auto bind = [&](CLI::App* sub, std::string name, std::function<Outcome()> fn) {
    sub->callback([&command, &action, name = std::move(name), fn = std::move(fn)] {
      command = name;
      action = fn;
    });
  };

  // families
  auto* families = app.add_subcommand("families", "closed-form catalog");
  families->require_subcommand(1);
  auto* fam_list = families->add_subcommand("list", "list catalog entries");
  bind(fam_list, "families-list", [] { return families_list(); });
  FamilyArgs eval_fam;
  std::string eval_z;
  auto* fam_eval = families->add_subcommand("eval", "evaluate a closed form at a point");
  add_family_options(fam_eval, eval_fam);
  fam_eval->add_option("--z", eval_z, "point re,im")->required();
  bind(fam_eval, "families-eval", [&] { return families_eval(eval_fam, eval_z); });

  // curvature
  FamilyArgs curv_fam;
  std::string curv_z;
  auto* curv = app.add_subcommand("curvature", "metric record (lambda, kappa, Gamma, S) of a catalog metric");
  add_family_options(curv, curv_fam);
  curv->add_option("--z", curv_z, "point re,im")->required();
  bind(curv, "curvature", [&] { return curvature_at(curv_fam, curv_z); });

  // solve
  SolveArgs sa;
  auto* sol = app.add_subcommand("solve", "Dirichlet problem on an annulus by monotone iteration");
  sol->add_option("--kappa", sa.kappa, "curvature: const:VALUE or a catalog id")->capture_default_str();
  sol->add_option("--boundary", sa.boundary, "catalog id supplying boundary data and the oracle");
  sol->add_option("--alpha", sa.fam.alpha, "order used for the initial bracket");
  sol->add_option("--A", sa.fam.A, "family parameter A");
  sol->add_option("--a", sa.fam.a, "family parameter a");
  sol->add_option("--R", sa.fam.R, "family parameter R");
  sol->add_option("--rmin", sa.rmin, "inner radius")->capture_default_str();
  sol->add_option("--rmax", sa.rmax, "outer radius")->capture_default_str();
  sol->add_option("--nr", sa.nr, "radial nodes")->capture_default_str();
  sol->add_option("--ntheta", sa.ntheta, "angular nodes")->capture_default_str();
  sol->add_option("--tol", sa.tol, "residual and step tolerance")->capture_default_str();
  sol->add_option("--max-iters", sa.max_iters, "iteration cap")->capture_default_str();
  sol->add_option("--shift", sa.shift, "safety factor on the linearization shift")->capture_default_str();
  sol->add_flag("--no-richardson", sa.no_richardson, "skip the refined solve");
  sol->add_flag("--radial", sa.radial, "radial ODE solve instead of the annulus");
  bind(sol, "solve", [&] { return solve(sa); });

  // classify
  ClassifyArgs ca;
  auto* cls = app.add_subcommand("classify", "estimate the order of the singularity");
  add_family_options(cls, ca.fam);
  cls->add_option("--k-first", ca.k_first, "outermost radius 2^-k")->capture_default_str();
  cls->add_option("--k-last", ca.k_last, "innermost radius 2^-k")->capture_default_str();
  bind(cls, "classify", [&] { return classify(ca); });

  // verify
  VerifyArgs va;
  auto* ver = app.add_subcommand("verify", "adjudicate a claim about a catalog entry");
  ver->require_subcommand(1);
  struct Target {
    const char* name;
    const char* help;
    Outcome (*fn)(const VerifyArgs&);
  };
  const Target targets[] = {
      {"main-theorem", "derivative growth rates of the remainder", verify_main_theorem_cmd},
      {"geometric", "limits of the scaled density, connection and Schwarzian", verify_geometric},
      {"yau", "ratios against the punctured-disk metric", verify_yau},
      {"wachstum", "B(r) = |-kappa e^{2w} - 1| log(1/r) stays bounded", verify_wachstum},
      {"continuity", "w has a limit at 0 in the critical case", verify_continuity},
  };
  for (const auto& t : targets) {
    auto* sub = ver->add_subcommand(t.name, t.help);
    add_family_options(sub, va.fam);
    bind(sub, std::string("verify-") + t.name, [&va, fn = t.fn] { return fn(va); });
  }
  auto* mp = ver->add_subcommand("max-principle", "hypotheses and conclusion of the extended maximum principle");
  mp->add_option("--pair", va.pair, "theorem-pair or a counterexample id")->capture_default_str();
  add_family_options(mp, va.fam, false);
  mp->add_option("--kappa", va.kappa, "constant curvature for theorem-pair")->capture_default_str();
  mp->add_option("--rmin", va.rmin, "inner radius of the sampling grid")->capture_default_str();
  mp->add_option("--rmax", va.rmax, "outer radius of the sampling grid")->capture_default_str();
  mp->add_option("--nr", va.nr, "radial nodes")->capture_default_str();
  mp->add_option("--ntheta", va.ntheta, "angular nodes")->capture_default_str();
  mp->add_option("--boundary-radius", va.boundary_radius, "circle carrying the boundary ordering")
      ->capture_default_str();
  bind(mp, "verify-max-principle", [&] { return verify_max_principle(va); });

  // potential
  PotentialArgs pa;
  auto* pot = app.add_subcommand("potential", "singular Newton potential and its derivatives");
  pot->add_option("--q", pa.q, "density numerator: const:V, linear:a,b,c, abs:c or catalog:ID")
      ->capture_default_str();
  pot->add_option("--alpha", pa.alpha, "power weight exponent");
  pot->add_option("--weight", pa.weight, "power or log2")->capture_default_str();
  pot->add_option("--r", pa.r, "disk radius")->capture_default_str();
  pot->add_option("--z", pa.z, "point re,im")->capture_default_str();
  pot->add_option("--deriv", pa.deriv, "none, grad or hess")->capture_default_str();
  pot->add_option("--component", pa.component, "x|y for grad, xx|xy|yy for hess")->capture_default_str();
  pot->add_option("--holder", pa.holder, "declared Hoelder exponent of q")->capture_default_str();
  pot->add_option("--fd-step", pa.fd_step, "finite-difference step for the gradient cross-check")
      ->capture_default_str();
  pot->add_option("--rel-tol", pa.rel_tol, "relative quadrature tolerance")->capture_default_str();
  bind(pot, "potential", [&] { return potential(pa); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  RunManifest manifest;
  manifest.command_line.assign(argv, argv + argc);
  manifest.tool_version = CURVLAB_VERSION;
  manifest.started_utc = utc_now();
  std::string joined;
  for (int k = 1; k < argc; ++k) joined += std::string(argv[k]) + '\0';
  manifest.digest("arguments", joined);

  Outcome outcome;
  try {
    outcome = action();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  }
  manifest.finished_utc = utc_now();

  int rc = kExitOk;
  if (outcome.claim_passed) {
    const bool failed = !*outcome.claim_passed;
    rc = failed != expect_fail ? kExitClaimFailed : kExitOk;
  }

  try {
    if (!out_dir.empty()) {
      const std::filesystem::path dir(out_dir);
      for (const auto& [name, contents] : outcome.files) {
        write_atomic(dir / name, contents);
        manifest.outputs.push_back((dir / name).string());
      }
      manifest.outputs.push_back((dir / (command + ".json")).string());
    }
    Json envelope;
    envelope["command"] = command;
    envelope["manifest"] = manifest.to_json();
    if (outcome.claim_passed) {
      envelope["claim_passed"] = *outcome.claim_passed;
      envelope["expect_fail"] = expect_fail;
    }
    envelope["result"] = outcome.result;
    const std::string text = envelope.dump(2) + "\n";
    if (!out_dir.empty()) write_atomic(std::filesystem::path(out_dir) / (command + ".json"), text);
    if (as_json) {
      std::cout << text;
    } else {
      std::cout << outcome.summary;
      if (outcome.claim_passed) {
        std::cout << (*outcome.claim_passed ? "claim holds" : "claim FAILS")
                  << (expect_fail ? " (expected to fail)" : "") << "\n";
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return rc;
}
