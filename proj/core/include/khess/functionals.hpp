#pragma once

#include <vector>

#include "khess/integrator.hpp"
#include "khess/model.hpp"

namespace khess {

/// E = k/(k+1) (theta')^{k+1} + (kappa/2) theta^2 + c_nk^{-1}/(q+1) |theta|^{q+1}.
double energy(const Params& p, double theta, double theta_prime);

/// E' = -delta s^{-1} (theta')^{k+1} - b s (theta')^2. Throws DomainError for s <= 0.
double energy_derivative(const Params& p, const DerivedConstants& c, double s, double theta,
                         double theta_prime);

struct PohozaevParams {
  double lambda = 0.0;
  double sigma = 0.0;
  double mu = 0.0;
};

/// V = s^lambda (k/(k+1) (theta')^{k+1} + c_nk^{-1}/(q+1) |theta|^{q+1}
///               + mu theta^2/2 + sigma s^{-1} (theta')^k theta).
double pohozaev(const Params& p, const DerivedConstants& c, const PohozaevParams& pp, double s,
                double theta, double theta_prime);

/// Closed form of V' along solutions of the transformed equation.
double pohozaev_derivative(const Params& p, const DerivedConstants& c, const PohozaevParams& pp,
                           double s, double theta, double theta_prime);

/// The three coefficients of s^{1-lambda} V' that multiply (theta')^{k+1},
/// |theta|^{q+1} and s^{-1} theta (theta')^k.
struct PohozaevPowerCoefficients {
  double flux_power = 0.0;
  double source_power = 0.0;
  double cross = 0.0;
};
PohozaevPowerCoefficients pohozaev_power_coefficients(const Params& p, const DerivedConstants& c,
                                                      const PohozaevParams& pp);

/// J_n = r^n (v + r^{-k} (v')^k).
double j_n(const Params& p, double r, double v, double v_prime);
/// J_kappa = r^kappa (v + r^{-k} (v')^k).
double j_kappa(const Params& p, double r, double v, double v_prime);
/// J_delta = s^{delta+1} (b theta + s^{-1} (theta')^k).
double j_delta(const Params& p, const DerivedConstants& c, double s, double theta,
               double theta_prime);

/// J_n' = r^{n-1} (n - kappa - c_nk^{-1} |v|^{q-1}) v.
double j_n_derivative(const Params& p, double r, double v);
/// J_kappa' = r^{kappa-1} ((kappa - n) r^{-k} (v')^k - c_nk^{-1} |v|^{q-1} v).
double j_kappa_derivative(const Params& p, double r, double v, double v_prime);
/// J_delta' = s^delta (n - kappa - c_nk^{-1} |theta|^{q-1}) theta.
double j_delta_derivative(const Params& p, const DerivedConstants& c, double s, double theta);

struct EmdenFowlerPoint {
  double d = 0.0;
  double tau = 0.0;  ///< ln s
  double y = 0.0;    ///< s^d theta
  double Y = 0.0;    ///< -s^{(d+1)k} (theta')^k
};

EmdenFowlerPoint emden_fowler_point(const Params& p, double d, double s, double theta,
                                    double theta_prime);

/// Emden-Fowler coordinates of every sample (converted to s for radial profiles).
/// Samples at or beyond a support edge are skipped.
std::vector<EmdenFowlerPoint> emden_fowler(const Params& p, const DerivedConstants& c, double d,
                                           const ProfileSolution& profile);

/// Which terms of the radial equation a residual includes.
enum class EquationVariant {
  /// r^{1-n} (r^{n-k} (v')^k)' + r v' + kappa v + c_nk^{-1} |v|^{q-1} v
  Profile,
  /// Profile without the source term.
  ProfileSourceFree,
  /// c_nk r^{1-n} (r^{n-k} (v')^k)' + |v|^{q-1} v
  SourceOnly,
};

/// Pointwise residual with caller-supplied derivatives. Throws DomainError for r <= 0.
double residual_r_form(const Params& p, double r, double v, double v_prime, double v_second,
                       EquationVariant variant = EquationVariant::Profile);

/// ((theta')^k)' + (delta/s) (theta')^k + b s theta' + kappa theta + c_nk^{-1} |theta|^{q-1} theta.
double residual_s_form(const Params& p, const DerivedConstants& c, double s, double theta,
                       double theta_prime, double theta_second,
                       SourceMode mode = SourceMode::WithSource);

}  // namespace khess
