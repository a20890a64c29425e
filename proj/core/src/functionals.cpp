#include "khess/functionals.hpp"

#include <cmath>

#include "khess/errors.hpp"

namespace khess {

namespace {

void require_positive(double x, const char* what) {
  if (!(x > 0.0)) throw DomainError(std::string(what) + " must be > 0");
}

double ipow(double x, int m) { return std::pow(x, m); }

}  // namespace

double energy(const Params& p, double theta, double theta_prime) {
  const double k = p.k;
  const double c_nk = derive_constants(p.n, p.k, p.kappa).c_nk;
  return k / (k + 1.0) * ipow(theta_prime, p.k + 1) + 0.5 * p.kappa * theta * theta +
         std::abs(signed_power(theta, p.q + 1.0)) / (c_nk * (p.q + 1.0));
}

double energy_derivative(const Params& p, const DerivedConstants& c, double s, double theta,
                         double theta_prime) {
  require_positive(s, "s");
  (void)theta;
  return -c.delta / s * ipow(theta_prime, p.k + 1) - c.b * s * theta_prime * theta_prime;
}

double pohozaev(const Params& p, const DerivedConstants& c, const PohozaevParams& pp, double s,
                double theta, double theta_prime) {
  require_positive(s, "s");
  const double k = p.k;
  const double inner = k / (k + 1.0) * ipow(theta_prime, p.k + 1) +
                       std::abs(signed_power(theta, p.q + 1.0)) / (c.c_nk * (p.q + 1.0)) +
                       0.5 * pp.mu * theta * theta + pp.sigma / s * ipow(theta_prime, p.k) * theta;
  return std::pow(s, pp.lambda) * inner;
}

PohozaevPowerCoefficients pohozaev_power_coefficients(const Params& p, const DerivedConstants& c,
                                                      const PohozaevParams& pp) {
  const double k = p.k;
  PohozaevPowerCoefficients out;
  out.flux_power = -(c.delta - pp.sigma - k * pp.lambda / (k + 1.0));
  out.source_power = -(pp.sigma - pp.lambda / (p.q + 1.0)) / c.c_nk;
  out.cross = pp.sigma * (pp.lambda - c.delta - 1.0);
  return out;
}

double pohozaev_derivative(const Params& p, const DerivedConstants& c, const PohozaevParams& pp,
                           double s, double theta, double theta_prime) {
  require_positive(s, "s");
  const PohozaevPowerCoefficients pc = pohozaev_power_coefficients(p, c, pp);
  const double b = c.b;
  const double shift = b * pp.sigma - pp.mu + p.kappa;
  const double square = s * theta_prime + shift / (2.0 * b) * theta;
  const double quad =
      (b * p.kappa * pp.sigma - 0.5 * b * pp.lambda * pp.mu - 0.25 * shift * shift) / b;
  const double scaled = pc.flux_power * ipow(theta_prime, p.k + 1) +
                        pc.source_power * std::abs(signed_power(theta, p.q + 1.0)) +
                        pc.cross / s * theta * ipow(theta_prime, p.k) - b * square * square -
                        quad * theta * theta;
  return std::pow(s, pp.lambda - 1.0) * scaled;
}

double j_n(const Params& p, double r, double v, double v_prime) {
  require_positive(r, "r");
  return std::pow(r, p.n) * (v + std::pow(r, -p.k) * ipow(v_prime, p.k));
}

double j_kappa(const Params& p, double r, double v, double v_prime) {
  require_positive(r, "r");
  return std::pow(r, p.kappa) * (v + std::pow(r, -p.k) * ipow(v_prime, p.k));
}

double j_delta(const Params& p, const DerivedConstants& c, double s, double theta,
               double theta_prime) {
  require_positive(s, "s");
  return std::pow(s, c.delta + 1.0) * (c.b * theta + ipow(theta_prime, p.k) / s);
}

double j_n_derivative(const Params& p, double r, double v) {
  require_positive(r, "r");
  const double c_nk = derive_constants(p.n, p.k, p.kappa).c_nk;
  return std::pow(r, p.n - 1) * ((p.n - p.kappa) * v - signed_power(v, p.q) / c_nk);
}

double j_kappa_derivative(const Params& p, double r, double v, double v_prime) {
  require_positive(r, "r");
  const double c_nk = derive_constants(p.n, p.k, p.kappa).c_nk;
  return std::pow(r, p.kappa - 1.0) *
         ((p.kappa - p.n) * std::pow(r, -p.k) * ipow(v_prime, p.k) - signed_power(v, p.q) / c_nk);
}

double j_delta_derivative(const Params& p, const DerivedConstants& c, double s, double theta) {
  require_positive(s, "s");
  return std::pow(s, c.delta) * ((p.n - p.kappa) * theta - signed_power(theta, p.q) / c.c_nk);
}

EmdenFowlerPoint emden_fowler_point(const Params& p, double d, double s, double theta,
                                    double theta_prime) {
  require_positive(s, "s");
  EmdenFowlerPoint pt;
  pt.d = d;
  pt.tau = std::log(s);
  pt.y = std::pow(s, d) * theta;
  pt.Y = -std::pow(s, (d + 1.0) * p.k) * ipow(theta_prime, p.k);
  return pt;
}

std::vector<EmdenFowlerPoint> emden_fowler(const Params& p, const DerivedConstants& c, double d,
                                           const ProfileSolution& profile) {
  std::vector<EmdenFowlerPoint> out;
  out.reserve(profile.samples.size());
  for (const Sample& smp : profile.samples) {
    if (profile.support_edge && smp.s >= *profile.support_edge) break;
    if (!(smp.s > 0.0)) continue;
    if (profile.coordinate == Coordinate::Transformed) {
      out.push_back(emden_fowler_point(p, d, smp.s, smp.theta, smp.theta_prime));
    } else {
      const double s = r_to_s(c, smp.s);
      const double tp = smp.theta_prime * std::pow(smp.s, 1.0 - c.b);
      out.push_back(emden_fowler_point(p, d, s, smp.theta, tp));
    }
  }
  return out;
}

double residual_r_form(const Params& p, double r, double v, double v_prime, double v_second,
                       EquationVariant variant) {
  require_positive(r, "r");
  const int k = p.k;
  // r^{1-n} (r^{n-k} (v')^k)' expanded.
  const double flux = (p.n - k) * std::pow(r, -k) * ipow(v_prime, k) +
                      k * std::pow(r, 1 - k) * ipow(v_prime, k - 1) * v_second;
  const double c_nk = derive_constants(p.n, p.k, p.kappa).c_nk;
  switch (variant) {
    case EquationVariant::Profile:
      return flux + r * v_prime + p.kappa * v + signed_power(v, p.q) / c_nk;
    case EquationVariant::ProfileSourceFree:
      return flux + r * v_prime + p.kappa * v;
    case EquationVariant::SourceOnly:
      return c_nk * flux + signed_power(v, p.q);
  }
  return 0.0;
}

double residual_s_form(const Params& p, const DerivedConstants& c, double s, double theta,
                       double theta_prime, double theta_second, SourceMode mode) {
  require_positive(s, "s");
  const int k = p.k;
  double res = k * ipow(theta_prime, k - 1) * theta_second + c.delta / s * ipow(theta_prime, k) +
               c.b * s * theta_prime + p.kappa * theta;
  if (mode == SourceMode::WithSource) res += signed_power(theta, p.q) / c.c_nk;
  return res;
}

}  // namespace khess
