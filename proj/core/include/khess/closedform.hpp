#pragma once

#include "khess/model.hpp"

namespace khess {

/// Exact k = 1 profile v(r) = A (1 + B r^2)^{-2/(q-1)} with kappa = 4/(q-1),
/// defined for q > (n+2)/(n-2).
struct ExactProfileK1 {
  int n = 0;
  double q = 0.0;
  double kappa = 0.0;
  double A_coef = 0.0;  ///< (kappa (kappa+2) / (n-2-kappa))^{1/(q-1)}
  double B_coef = 0.0;  ///< 1 / (n-2-kappa)

  double v(double r) const;
  double v_prime(double r) const;
  double v_second(double r) const;
  /// lim r^kappa v = (kappa (kappa+2) (n-2-kappa))^{1/(q-1)}.
  double L() const;
  /// (n, 1, q, kappa, A_coef).
  Params params() const;
};

/// Throws DomainError unless q > (n+2)/(n-2).
ExactProfileK1 exact_profile_k1(int n, double q);

/// Source-free compactly supported family w(rho) = (C - gamma_B rho^2)_+^{k/(k-1)},
/// solving c_nk rho^{1-n} (rho^{n-k} (w')^k)' + beta rho w' + alpha w = 0.
struct BarenblattProfile {
  int n = 0;
  int k = 0;
  double C = 0.0;
  double c_nk = 0.0;
  double alpha = 0.0;    ///< n / (n(k-1) + 2k)
  double beta = 0.0;     ///< 1 / (n(k-1) + 2k)
  double gamma_B = 0.0;  ///< ((k-1)/(2k)) (beta / c_nk)^{1/k}

  double support_edge() const;
  double w(double rho) const;
  double w_prime(double rho) const;
  double w_second(double rho) const;
  /// Residual of the equation above with analytic derivatives.
  double residual(double rho) const;

  /// In the profile variable r = rho / lambda, lambda = (c_nk/beta)^{1/(2k)},
  /// v(r) = w(lambda r) solves the source-free profile equation with kappa = n.
  double scale() const;
  double v(double r) const;
  double v_prime(double r) const;
  double v_second(double r) const;
  double v_support_edge() const;
  /// (n, k, q, n, C^{k/(k-1)}) for use with SourceMode::SourceFree; q only
  /// needs to satisfy the model invariants and is set to k + 1.
  Params params() const;
};

/// Throws DomainError for k == 1, even k, or C <= 0.
BarenblattProfile barenblatt_profile(int n, int k, double C);

/// Profile v(r) = [P / (1 + mu r^2)]^{(n-2k)/(2k)},
/// P = (binom(n,k) ((n-2k) mu / k)^k)^{1/(k+1)}, solving
/// c_nk r^{1-n} (r^{n-k} (v')^k)' + |v|^{q-1} v = 0 with q = q*(k).
struct TsoCriticalProfile {
  int n = 0;
  int k = 0;
  double mu = 0.0;
  double q = 0.0;
  double prefactor = 0.0;  ///< P
  double exponent = 0.0;   ///< (n-2k)/(2k)

  double v(double r) const;
  double v_prime(double r) const;
  double v_second(double r) const;
  /// Residual of the source-only equation with analytic derivatives.
  double residual(double r) const;
};

/// Throws DomainError unless n > 2k, k odd and mu > 0.
TsoCriticalProfile tso_profile(int n, int k, double mu);

}  // namespace khess
