#pragma once

#include <optional>
#include <string>
#include <vector>

#include "curvlab/families.hpp"
#include "curvlab/metrics.hpp"
#include "curvlab/types.hpp"

namespace curvlab {

enum class Branch { subcritical, critical };
enum class Verdict { pass, fail, indeterminate };
std::string to_string(Branch b);
std::string to_string(Verdict v);

/// r_k = 2^{-k}, k = k_first..k_last (decreasing radii).
std::vector<double> dyadic_radii(int k_first, int k_last);
/// r_k = 10^{-k}, k = k_first..k_last.
std::vector<double> decade_radii(int k_first, int k_last);

/// M_u(r): max over n_theta equispaced angles, then one golden-section pass
/// around the discrete argmax.
double max_on_circle(const RealFn& u, double r, int n_theta = 256);

struct OrderEstimate {
  double alpha_hat = 0.0;
  double alpha_stderr = 0.0;
  Branch branch = Branch::subcritical;
  bool finite = true;             // false when the quotients blow up (infinite order)
  double ratio_cross_check = 0.0; // M_u(r)/log(1/r) at the innermost radius
  std::vector<double> radii;
  std::vector<double> circle_max;
  std::vector<double> quotients;            // slopes of M_u against log(1/r)
  std::vector<double> corrected_quotients;  // quotients + 1/L (log log term removed)
};

/// alpha from difference quotients of M_u against log(1/r) on the innermost three pairs.
/// The critical model (order 1 with a -log log(1/r) term) is selected when the
/// log log-corrected quotients sit at 1.
OrderEstimate estimate_order(const RealFn& u, const std::vector<double>& radii);

/// v = u + alpha log|z| (subcritical) or w = u + log|z| + log log(1/|z|) (critical).
RealFn remainder(const RealFn& u, double alpha, Branch branch);

struct FitOptions {
  bool inverse_log_nuisance = false;  // extra 1/log(1/r) regressor
  bool log_log_regressor = true;      // false fixes q = 0
  double condition_limit = 1e6;
  double residual_limit = 0.02;       // rms in log space
  double min_decades = 5.0;
};

/// log g ~ c + p log r + q log log(1/r) [+ d / log(1/r)].
struct GrowthFit {
  double p = 0.0, q = 0.0, c = 0.0, d = 0.0;
  double p_halfwidth = 0.0, q_halfwidth = 0.0;
  double residual_rms = 0.0;
  double condition = 0.0;
  bool indeterminate = false;
  std::vector<double> radii;
  std::vector<double> values;
};

/// Fits max_{|z|=r} |g| over the radii; needs >= 8 radii over >= 5 decades.
GrowthFit fit_growth(const RealFn& g, const std::vector<double>& radii, const FitOptions& opt = {});
/// Same fit from precomputed positive samples.
GrowthFit fit_growth_samples(const std::vector<double>& radii, const std::vector<double>& values,
                             const FitOptions& opt = {});

enum class RateShape { continuous, bounded, power };

struct RateClaim {
  std::string quantity;  // "v_z", "v_zz", "v_zzbar" (w_* in the critical branch)
  RateShape shape = RateShape::power;
  double p = 0.0, q = 0.0;  // row exponents for bounded/power shapes
  Verdict verdict = Verdict::indeterminate;
  bool sharp = false;       // fitted exponents within tolerance of the row
  GrowthFit fit;
  double oscillation = 0.0;     // continuity proxy at the innermost usable decade
  double mean_difference = 0.0;
  std::vector<double> radii_used;
  std::string note;
};

struct LimitSequence {
  std::string name;
  std::vector<double> radii;
  std::vector<Complex> values;  // worst angle per radius
  Complex innermost;
  Complex extrapolated;
  double target = 0.0;
  Verdict verdict = Verdict::indeterminate;
};

struct GeometricLimits {
  LimitSequence a;  // (|z| log(1/|z|)) lambda
  LimitSequence b;  // z Gamma
  LimitSequence c;  // z^2 S
  bool all_pass() const;
};

/// Something whose singularity can be analysed: a closed form or an interpolated solve.
struct TheoremSubject {
  std::string id;
  RealFn u;
  RealFn kappa;
  std::optional<double> declared_alpha;
  std::optional<double> kappa_at_zero;
  ComplexFn u_z;
  RealFn remainder;          // closed-form v or w for the declared order; avoids cancellation in u + alpha log|z|
  double r_floor = 0.0;      // smallest usable radius (grid inner ring); 0 for closed forms
  double outer_radius = 1.0;
  bool low_confidence = false;

  static TheoremSubject from(const ClosedFormSolution& sol);
};

struct SingularityReport {
  std::string subject;
  OrderEstimate order;
  double alpha_used = 0.0;
  Branch branch = Branch::subcritical;
  bool low_confidence = false;
  std::vector<std::pair<double, double>> remainder_samples;  // (r, circle mean of v or w)
  std::vector<RateClaim> claims;
  std::optional<GeometricLimits> limits;
  std::vector<std::string> notes;

  // every claim passes or is explicitly indeterminate
  bool all_pass() const;
  std::string to_json() const;
};

struct MainTheoremOptions {
  std::vector<double> order_radii;       // default 2^-8..2^-26
  std::vector<double> rate_radii;        // default 2^-16..2^-48, widened outward to 2^-4 when needed
  std::vector<double> continuity_radii;  // default 2^-2..2^-48; continuity fits accept 4 decades
  double exponent_tolerance = 0.05;
  double continuity_epsilon = 1e-3;
  bool include_limits = true;
};

SingularityReport verify_main_theorem(const TheoremSubject& subject, const MainTheoremOptions& opt = {});

/// Default radii: 1e-7 * 2^k, k = 12..0.
GeometricLimits verify_geometric_limits(const MetricDensity& m, double kappa0, double alpha,
                                        std::vector<double> radii = {});

struct YauReport {
  bool precondition_ok = false;
  std::string precondition_note;
  std::vector<double> probe;   // completeness probe lengths
  double probe_slope = 0.0;    // d(length)/d(log log(1/r)) at the innermost step
  LimitSequence lambda_ratio;
  LimitSequence gamma_ratio;
  LimitSequence s_ratio;
  Verdict verdict = Verdict::indeterminate;
};

YauReport verify_yau_ratios(const MetricDensity& m, std::vector<double> radii = {});

struct WachstumProfile {
  std::vector<double> radii;
  std::vector<double> bound;   // B(r)
  double growth_exponent = 0.0;  // slope of log B against log log(1/r), last 3 decades
  double limit = 0.0;            // extrapolated in 1/log(1/r)
  bool identically_zero = false;
  bool nonincreasing = false;
  Verdict verdict = Verdict::indeterminate;
};

/// B(r) = max_{|z|=r} |-kappa e^{2w} - 1| log(1/r); default radii 10^{-2 - k/4} down to 1e-8.
WachstumProfile wachstum_check(const RealFn& u, const RealFn& kappa, std::vector<double> radii = {});

struct ContinuityProfile {
  std::vector<double> radii;
  std::vector<double> oscillation;
  std::vector<double> mean;
  double target = 0.0;
  double w_limit = 0.0;   // extrapolated in 1/log(1/r)
  bool oscillation_decays = false;
  bool drift_monotone = false;
  Verdict verdict = Verdict::indeterminate;
};

/// Default radii r = exp(-L) with L geometric on [4, 690]: the log log scale on which
/// critical remainders move. kappa0 defaults to kappa at the innermost radius.
ContinuityProfile critical_continuity_check(const RealFn& u, const RealFn& kappa, std::vector<double> radii = {},
                                            std::optional<double> kappa0 = std::nullopt);

/// Circle mean and (max - min) of f on |z| = r over n equispaced angles.
std::pair<double, double> circle_mean_and_oscillation(const RealFn& f, double r, int n = 64);

}  // namespace curvlab
