#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "curvlab/families.hpp"
#include "manifest.hpp"

namespace curvlab::cli {

enum ExitCode { kExitOk = 0, kExitError = 1, kExitUsage = 2, kExitNonConvergence = 3, kExitClaimFailed = 4 };

struct Outcome {
  Json result;
  std::string summary;
  std::optional<bool> claim_passed;  // set by verdict commands
  std::vector<std::pair<std::string, std::string>> files;  // name under --out -> contents
};

struct FamilyArgs {
  std::string id;
  std::optional<double> alpha, A, a, R, beta;

  FamilyParams params() const { return {alpha, A, a, R, beta}; }
};

/// "re,im" or "re"
Complex parse_point(const std::string& text);

Outcome families_list();
Outcome families_eval(const FamilyArgs& fam, const std::string& z);
Outcome curvature_at(const FamilyArgs& fam, const std::string& z);

struct SolveArgs {
  std::string kappa = "const:-4";
  std::string boundary;  // catalog id; defaults from --kappa
  FamilyArgs fam;        // parameters for catalog ids
  double rmin = 1e-3, rmax = 0.9;
  int nr = 65, ntheta = 64;
  double tol = 1e-9;
  int max_iters = 500;
  double shift = 1.0;
  bool no_richardson = false;
  bool radial = false;
};
Outcome solve(const SolveArgs& args);

struct ClassifyArgs {
  FamilyArgs fam;
  int k_first = 8, k_last = 26;
};
Outcome classify(const ClassifyArgs& args);

struct VerifyArgs {
  FamilyArgs fam;
  // max-principle
  std::string pair = "theorem-pair";
  double kappa = -4.0;
  double rmin = 1e-3, rmax = 0.9;
  int nr = 65, ntheta = 64;
  double boundary_radius = 1.0;
};
Outcome verify_main_theorem_cmd(const VerifyArgs& args);
Outcome verify_geometric(const VerifyArgs& args);
Outcome verify_yau(const VerifyArgs& args);
Outcome verify_wachstum(const VerifyArgs& args);
Outcome verify_continuity(const VerifyArgs& args);
Outcome verify_max_principle(const VerifyArgs& args);

struct PotentialArgs {
  std::string q = "const:1";
  std::optional<double> alpha;
  std::string weight = "power";
  double r = 1.0;
  std::string z = "0,0";
  std::string deriv = "none";
  std::string component = "x";  // grad: x|y; hess: xx|xy|yx|yy
  double holder = 1.0;
  double fd_step = 1e-4;
  double rel_tol = 1e-12;
};
Outcome potential(const PotentialArgs& args);

}  // namespace curvlab::cli
