#include "khess/closedform.hpp"

#include <cmath>
#include <string>

#include "khess/errors.hpp"
#include "khess/functionals.hpp"
#include "khess/integrator.hpp"

namespace khess {

namespace {

// g(r) = A (1 + B r^2)^{-m} and its first two derivatives.
double bump(double A, double B, double m, double r) { return A * std::pow(1.0 + B * r * r, -m); }

double bump_prime(double A, double B, double m, double r) {
  return -2.0 * A * B * m * r * std::pow(1.0 + B * r * r, -m - 1.0);
}

double bump_second(double A, double B, double m, double r) {
  const double g = 1.0 + B * r * r;
  return -2.0 * A * B * m * std::pow(g, -m - 1.0) +
         4.0 * A * B * B * m * (m + 1.0) * r * r * std::pow(g, -m - 2.0);
}

}  // namespace

double ExactProfileK1::v(double r) const { return bump(A_coef, B_coef, 2.0 / (q - 1.0), r); }
double ExactProfileK1::v_prime(double r) const {
  return bump_prime(A_coef, B_coef, 2.0 / (q - 1.0), r);
}
double ExactProfileK1::v_second(double r) const {
  return bump_second(A_coef, B_coef, 2.0 / (q - 1.0), r);
}
double ExactProfileK1::L() const {
  return std::pow(kappa * (kappa + 2.0) * (n - 2.0 - kappa), 1.0 / (q - 1.0));
}
Params ExactProfileK1::params() const { return make_params(n, 1, q, kappa, A_coef); }

ExactProfileK1 exact_profile_k1(int n, double q) {
  if (n <= 2) throw DomainError("exact k=1 profile needs n > 2");
  const double q_star = (n + 2.0) / (n - 2.0);
  if (!(q > q_star)) {
    throw DomainError("exact k=1 profile needs q > (n+2)/(n-2) = " + std::to_string(q_star));
  }
  ExactProfileK1 e;
  e.n = n;
  e.q = q;
  e.kappa = 4.0 / (q - 1.0);
  const double gap = n - 2.0 - e.kappa;
  e.A_coef = std::pow(e.kappa * (e.kappa + 2.0) / gap, 1.0 / (q - 1.0));
  e.B_coef = 1.0 / gap;
  return e;
}

double BarenblattProfile::support_edge() const { return std::sqrt(C / gamma_B); }

double BarenblattProfile::w(double rho) const {
  const double g = C - gamma_B * rho * rho;
  if (g <= 0.0) return 0.0;
  return std::pow(g, double(k) / (k - 1));
}

double BarenblattProfile::w_prime(double rho) const {
  const double g = C - gamma_B * rho * rho;
  if (g <= 0.0) return 0.0;
  const double p = double(k) / (k - 1);
  return -2.0 * gamma_B * rho * p * std::pow(g, p - 1.0);
}

double BarenblattProfile::w_second(double rho) const {
  const double g = C - gamma_B * rho * rho;
  if (g <= 0.0) return 0.0;
  const double p = double(k) / (k - 1);
  return -2.0 * gamma_B * p * std::pow(g, p - 1.0) +
         4.0 * gamma_B * gamma_B * rho * rho * p * (p - 1.0) * std::pow(g, p - 2.0);
}

double BarenblattProfile::residual(double rho) const {
  if (!(rho > 0.0)) throw DomainError("rho must be > 0");
  const double wp = w_prime(rho);
  const double flux = (n - k) * std::pow(rho, -k) * std::pow(wp, k) +
                      k * std::pow(rho, 1 - k) * std::pow(wp, k - 1) * w_second(rho);
  return c_nk * flux + beta * rho * wp + alpha * w(rho);
}

double BarenblattProfile::scale() const { return std::pow(c_nk / beta, 1.0 / (2.0 * k)); }
double BarenblattProfile::v(double r) const { return w(scale() * r); }
double BarenblattProfile::v_prime(double r) const { return scale() * w_prime(scale() * r); }
double BarenblattProfile::v_second(double r) const {
  const double l = scale();
  return l * l * w_second(l * r);
}
double BarenblattProfile::v_support_edge() const { return support_edge() / scale(); }

Params BarenblattProfile::params() const {
  return make_params(n, k, k + 1.0, n, std::pow(C, double(k) / (k - 1)));
}

BarenblattProfile barenblatt_profile(int n, int k, double C) {
  if (k <= 1 || k % 2 == 0) throw DomainError("Barenblatt profile needs odd k > 1");
  if (n <= 2 || k > n) throw DomainError("Barenblatt profile needs n > 2 and k <= n");
  if (!(C > 0.0)) throw DomainError("Barenblatt profile needs C > 0");
  BarenblattProfile bp;
  bp.n = n;
  bp.k = k;
  bp.C = C;
  bp.c_nk = derive_constants(n, k, 0.0).c_nk;
  const double den = n * (k - 1.0) + 2.0 * k;
  bp.alpha = n / den;
  bp.beta = 1.0 / den;
  bp.gamma_B = (k - 1.0) / (2.0 * k) * std::pow(bp.beta / bp.c_nk, 1.0 / k);
  return bp;
}

double TsoCriticalProfile::v(double r) const { return bump(std::pow(prefactor, exponent), mu, exponent, r); }
double TsoCriticalProfile::v_prime(double r) const {
  return bump_prime(std::pow(prefactor, exponent), mu, exponent, r);
}
double TsoCriticalProfile::v_second(double r) const {
  return bump_second(std::pow(prefactor, exponent), mu, exponent, r);
}

double TsoCriticalProfile::residual(double r) const {
  Params p;
  p.n = n;
  p.k = k;
  p.q = q;
  p.kappa = 0.0;
  p.gamma = v(0.0);
  return residual_r_form(p, r, v(r), v_prime(r), v_second(r), EquationVariant::SourceOnly);
}

TsoCriticalProfile tso_profile(int n, int k, double mu) {
  if (k < 1 || k % 2 == 0) throw DomainError("Tso profile needs odd k");
  if (n <= 2 * k) throw DomainError("Tso profile needs n > 2k");
  if (!(mu > 0.0)) throw DomainError("Tso profile needs mu > 0");
  TsoCriticalProfile t;
  t.n = n;
  t.k = k;
  t.mu = mu;
  t.q = critical_exponents(n, k).q_star.value();
  t.exponent = (n - 2.0 * k) / (2.0 * k);
  t.prefactor = std::pow(double(binomial(n, k)) * std::pow((n - 2.0 * k) * mu / k, k), 1.0 / (k + 1.0));
  return t;
}

}  // namespace khess
