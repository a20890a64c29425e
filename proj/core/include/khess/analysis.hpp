#pragma once

#include <optional>
#include <string>
#include <vector>

#include "khess/integrator.hpp"
#include "khess/model.hpp"

namespace khess {

struct LEstimate {
  double L = 0.0;
  double uncertainty = 0.0;
  /// Radius at which the estimator was evaluated (0 for a collapsed profile).
  double radius = 0.0;
  /// Analytic tail correction added to J_kappa at that radius.
  double tail = 0.0;
};

/// L = lim r^kappa v, estimated as J_kappa(R) plus the integral of J_kappa'
/// beyond R using the leading-order tail v ~ L r^{-kappa}. The uncertainty is
/// the larger of |tail| and the spread of the estimator over the tail window.
/// Collapsed profiles give exactly (0, 0); ToleranceFailure throws NumericalError.
LEstimate estimate_L(const ProfileSolution& profile);

enum class ProfileKind { Crossing, Slow, Fast };
const char* to_string(ProfileKind kind);

struct ClassificationDiagnostics {
  Termination termination = Termination::ReachedSMax;
  double threshold = 0.0;
  /// uncertainty > |L|.
  bool inconclusive = false;
  /// Fast verdict on a profile that also changes sign (kappa >= n only).
  bool sign_changing_fast = false;
  /// L < 0 with no zero located before the truncation point.
  bool zero_beyond_horizon = false;
  double s_end = 0.0;
  std::size_t steps = 0;
  std::string note;
};

struct ClassificationResult {
  ProfileKind kind = ProfileKind::Slow;
  double gamma = 0.0;
  double L_estimate = 0.0;
  double L_uncertainty = 0.0;
  std::size_t zero_count = 0;
  /// Zeros as physical radii.
  std::vector<double> zeros;
  /// Support edge as a physical radius.
  std::optional<double> support_edge;
  ClassificationDiagnostics diagnostics;
};

/// Everything the verdict depends on, so a sweep can reclassify rows against
/// a common threshold without integrating again.
struct VerdictInputs {
  double L = 0.0;
  double L_uncertainty = 0.0;
  std::size_t zero_count = 0;
  bool collapsed = false;
  bool kappa_at_least_n = false;
};

struct Verdict {
  ProfileKind kind = ProfileKind::Slow;
  bool inconclusive = false;
  bool sign_changing_fast = false;
  bool zero_beyond_horizon = false;
};

Verdict decide(const VerdictInputs& in, double threshold);

/// Relative size of the fast-decay band: |L| <= fast_threshold_factor * scale.
inline constexpr double fast_threshold_factor = 1e-4;

/// Classifies an already integrated profile. `threshold_scale` defaults to gamma.
/// A ToleranceFailure profile that has located zeros is still reported as
/// Crossing (with L = NaN); without zeros it throws NumericalError.
ClassificationResult classify_profile(const ProfileSolution& profile,
                                      std::optional<double> threshold_scale = std::nullopt);

ClassificationResult classify(const Params& p, const IntegratorConfig& cfg = {},
                              std::optional<double> threshold_scale = std::nullopt);

struct ZeroCount {
  std::size_t count = 0;
  std::vector<double> s;
  std::vector<double> r;
};
ZeroCount count_zeros(const ProfileSolution& profile);

enum class AsymptoticRegime { Above, Boundary, Below };
const char* to_string(AsymptoticRegime regime);

/// Second-order behaviour of a slow profile:
///   r^kappa v(r) - L ~ correction_coefficient * r^{-correction_power}.
struct AsymptoticExpansion {
  AsymptoticRegime regime = AsymptoticRegime::Above;
  double nu = 0.0;  ///< (k-1) kappa + 2k
  double A = 0.0;
  double B = 0.0;
  double L = 0.0;
  double nu_tilde = 0.0;
  double A_tilde = 0.0;
  double B_tilde = 0.0;
  double L_tilde = 0.0;
  double correction_power = 0.0;
  double correction_coefficient = 0.0;
};

/// Regime by the sign of (q-k) kappa - 2k (relative tolerance 1e-12).
/// Throws DomainError for L <= 0.
AsymptoticExpansion asymptotic_coefficients(const Params& p, double L);

struct TailFit {
  double coefficient = 0.0;
  double residual = 0.0;  ///< RMS of the fit residual
  double power = 0.0;     ///< power used for the coefficient fit
  double fitted_power = 0.0;  ///< slope of log|r^kappa v - L| against log r
  std::size_t samples = 0;
};

/// Least squares fit of g = C r^{-power} (and of the power itself) to data.
/// Throws NumericalError with fewer than 3 points.
TailFit fit_power_tail(const std::vector<double>& r, const std::vector<double>& g, double power);

/// Fits r^kappa v - L over the last decade of radii against the power
/// predicted by asymptotic_coefficients.
TailFit fit_tail(const ProfileSolution& profile, double L);

struct AprioriReport {
  double theta_bound = 0.0;
  double theta_prime_bound = 0.0;
  double max_abs_theta = 0.0;
  double max_abs_theta_prime = 0.0;
  double theta_slack = 0.0;        ///< theta_bound - max |theta|
  double theta_prime_slack = 0.0;  ///< theta_prime_bound - max |theta'|
  /// Largest increase of the energy between consecutive samples.
  double max_energy_increase = 0.0;
  /// 10 (abs_tol + rel_tol E(s0)).
  double energy_tolerance = 0.0;
  bool ok = true;
};

/// |theta| <= gamma, |theta'| <= ((k+1)/k)^{1/(k+1)} E(0)^{1/(k+1)} and
/// monotone energy along the samples.
AprioriReport check_apriori_bounds(const ProfileSolution& profile);

}  // namespace khess
