#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "khess/model.hpp"

namespace khess {

/// Point of the transformed initial-value problem. The flux variable
/// w = (theta')^k is integrated instead of theta': the equation is smooth in
/// w, and theta' = signed_root(w, k) is recovered on demand.
struct State {
  double s = 0.0;
  double theta = 0.0;
  double w = 0.0;
};

/// sgn(x) |x|^{1/k} for odd k; exact at 0 and the identity for k == 1.
double signed_root(double x, int k);

/// |x|^{q-1} x, with an exact zero branch so fractional q never meets log(0).
double signed_power(double x, double q);

struct Derivative {
  double dtheta_ds = 0.0;
  double dw_ds = 0.0;
};

/// Which terms of the profile equation are active. SourceFree drops the
/// c_nk^{-1} |theta|^{q-1} theta term (Barenblatt mode).
enum class SourceMode { WithSource, SourceFree };

/// Right-hand side of
///   w' = -(delta/s) w - b s theta' - kappa theta - c_nk^{-1} |theta|^{q-1} theta.
/// Throws DomainError for s <= 0.
Derivative rhs(const Params& p, const DerivedConstants& c, const State& st,
               SourceMode mode = SourceMode::WithSource);

/// Leading-order series seed at s0 > 0:
///   w(s0)     = -(gamma / n_tilde) (kappa + c_nk^{-1} gamma^{q-1}) s0
///   theta(s0) = gamma - k/(k+1) * signed_root((gamma/n_tilde)(...), k) * s0^{(k+1)/k}
State seed_state(const Params& p, const DerivedConstants& c, double s0,
                 SourceMode mode = SourceMode::WithSource);

struct IntegratorConfig {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  /// Seed abscissa; <= 0 selects default_s0().
  double s0 = 0.0;
  /// Truncation point (in the integration coordinate); <= 0 selects default_s_max().
  double s_max = 0.0;
  std::size_t max_steps = 4'000'000;
  SourceMode source = SourceMode::WithSource;
  /// Relative size of the (0,0) neighbourhood treated as support collapse.
  double c_support = 1e-9;
  /// Absolute resolution of event location.
  double event_tol = 1e-12;
  /// For k > 1, integration stops once the flux relaxation rate times s
  /// exceeds this ratio while theta decreases monotonically toward zero.
  double stiff_ratio = 1e7;
};

double default_s0(const Params& p);
/// 1e3 for k = 1, 1e2 (1 + kappa/b) for k > 1.
double default_s_max(const Params& p);

/// Replaces the automatic fields of cfg by their defaults for p and checks
/// the remaining invariants (0 < s0 < s_max, tolerances positive).
IntegratorConfig resolve(const IntegratorConfig& cfg, const Params& p);

/// StiffTail: the trajectory reached the slow tail theta' ~ -kappa theta/(b s)
/// of a positive profile (k > 1) where explicit steps become
/// stability-limited; the tail beyond is described by its asymptotics.
enum class Termination { ReachedSMax, SupportCollapse, StiffTail, ToleranceFailure };
const char* to_string(Termination t);

/// Which radial variable a profile is sampled in.
enum class Coordinate { Transformed, Radial };

/// One accepted point. For Coordinate::Radial the fields hold (r, v, v').
struct Sample {
  double s = 0.0;
  double theta = 0.0;
  double theta_prime = 0.0;
};

/// Continuous extension of one accepted Dormand-Prince step.
struct DenseSegment {
  double x0 = 0.0;
  double h = 0.0;
  std::array<std::array<double, 5>, 2> coef{};
};

/// A sampled trajectory with its located events. Immutable once returned by
/// integrate(); safe to share across threads.
class ProfileSolution {
 public:
  Params params;
  DerivedConstants constants;
  Coordinate coordinate = Coordinate::Transformed;
  SourceMode source = SourceMode::WithSource;
  IntegratorConfig config;

  /// Strictly increasing in s, starting at the seed point.
  std::vector<Sample> samples;
  /// Isolated zeros of theta, increasing.
  std::vector<double> zeros;
  /// Zeros of theta' (sign changes of w), increasing.
  std::vector<double> critical_points;
  /// Abscissa beyond which theta = theta' = 0 exactly.
  std::optional<double> support_edge;
  Termination termination = Termination::ReachedSMax;
  std::string diagnostic;
  std::size_t steps_accepted = 0;
  std::size_t steps_rejected = 0;

  double s_begin() const { return samples.front().s; }
  double s_end() const { return samples.back().s; }

  /// Dense-output evaluation anywhere in [s_begin, s_end]; exact zeros past
  /// the support edge. Throws DomainError outside the sampled range.
  Sample at(double s) const;

  /// Profile value at physical radius r (v(r) = theta(a r^b)). Falls back to
  /// the exact seed value gamma for r below the seed point.
  double v_at_radius(double r) const;
  /// v'(r) = r^{b-1} theta'(s).
  double v_prime_at_radius(double r) const;

  /// Physical radius / transformed abscissa of a point given in this
  /// profile's own coordinate.
  double radius_of(double x) const;
  double s_of(double x) const;
  /// Samples as (s, theta, theta') regardless of coordinate.
  std::vector<Sample> transformed_samples() const;

  /// Continuous extension, one segment per accepted step.
  std::vector<DenseSegment> dense;
};

/// Integrates the transformed problem from seed_state(s0) to s_max or to
/// support collapse, locating zeros and critical points on dense output.
/// Never throws for numerical trouble: failures return a partial profile
/// with termination == ToleranceFailure and a diagnostic.
ProfileSolution integrate(const Params& p, const IntegratorConfig& cfg = {});

/// Same problem on the untransformed radial equation
///   (r^{n-k} (v')^k)' + r^{n-1} (r v' + kappa v + c_nk^{-1} |v|^{q-1} v) = 0,
/// integrated in (v, (v')^k). cfg.s0 / cfg.s_max are interpreted as radii;
/// when left automatic they are mapped from the transformed defaults.
ProfileSolution integrate_r_form(const Params& p, const IntegratorConfig& cfg = {});

/// CSV with header s,theta,theta_prime,r,v; events as '#' footer lines.
void write_profile_csv(std::ostream& os, const ProfileSolution& prof);

}  // namespace khess
