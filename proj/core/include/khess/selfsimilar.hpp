#pragma once

#include <optional>
#include <vector>

#include "khess/integrator.hpp"
#include "khess/model.hpp"

namespace khess {

/// u(t, x) = T^{-alpha0} v(T^{-beta0} |x|), T = c_nk t / beta0, built from a
/// profile computed at kappa = kappa0.
class SelfSimilarFrame {
 public:
  Params params;
  TypeIExponents exps;
  double c_nk = 0.0;
  /// Profile radii (starting at 0), values and slopes used by the monotone
  /// cubic interpolant.
  std::vector<double> r;
  std::vector<double> v;
  std::vector<double> slope;
  /// Physical radius of the support edge, when the profile collapsed.
  std::optional<double> support_edge;
  /// Decay limit used for the power-law tail beyond the data.
  double L = 0.0;
  double L_uncertainty = 0.0;

  double r_max() const { return r.back(); }
  /// T = c_nk t / beta0.
  double time_scale(double t) const;
  /// Interpolated profile; 0 past the support edge, DomainError past the data
  /// otherwise.
  double profile(double rho) const;
};

/// Throws ParameterDomainError unless |kappa - kappa0| <= 1e-12 max(1, kappa0),
/// NumericalError for a ToleranceFailure profile.
SelfSimilarFrame make_frame(const ProfileSolution& profile);

/// Requires t > 0 and x_norm >= 0.
double eval_u(const SelfSimilarFrame& frame, double t, double x_norm);

/// |S^{n-1}| = 2 pi^{n/2} / Gamma(n/2).
double sphere_area(int n);

/// (omega_{n-1} int_0^inf |u(t,r)|^p r^{n-1} dr)^{1/p}: 4-point Gauss-Legendre
/// on every data interval, plus L^p R'^{n-p kappa0}/(p kappa0 - n) for the
/// rescaled data end R' when the support is not compact. Throws
/// DivergenceError when that tail diverges (p kappa0 <= n with L != 0).
double lp_norm(const SelfSimilarFrame& frame, double p, double t);

struct ScalingMeasurement {
  double measured = 0.0;
  double predicted = 0.0;  ///< n beta0 / p - 1/(q-1)
  std::vector<double> times;
  std::vector<double> norms;
};

/// Least-squares slope of log ||u(t)||_p against log t.
ScalingMeasurement measure_scaling_exponent(const SelfSimilarFrame& frame, double p,
                                            const std::vector<double>& times = {1, 2, 4, 8});

/// n (q-k) / (2k); ParameterDomainError for q <= k.
double invariant_exponent(int n, int k, double q);

struct SmallTimeReport {
  double epsilon = 0.0;
  /// Largest time at which supp u(t) lies inside |x| < epsilon.
  double t_epsilon = 0.0;
  /// max |u(t_epsilon, x)| over a grid of |x| >= epsilon (exactly 0).
  double sup_at_t_epsilon = 0.0;
  /// Same at t = 1.
  double sup_at_unit_time = 0.0;
  double support_radius_at_unit_time = 0.0;
  double p = 1.0;
  /// ||u(t)||_p at t = 1, 1/10, 1/100.
  std::vector<double> times;
  std::vector<double> norms;
  bool norms_decreasing = false;
};

/// Needs a compactly supported profile (RegimeError otherwise) and
/// p < n / kappa0 for the norm part (ParameterDomainError otherwise).
SmallTimeReport small_time_limits(const SelfSimilarFrame& frame, double epsilon, double p = 1.0);

struct SingularityComparison {
  double profile_rate = 0.0;     ///< 1/(q-1)
  double barenblatt_rate = 0.0;  ///< n / (n(k-1) + 2k)
};

/// Requires 1 < q < q_c(k) (RegimeError for q >= q_c).
SingularityComparison singularity_comparison(int n, int k, double q);

}  // namespace khess
