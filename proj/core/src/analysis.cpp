#include "khess/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "khess/errors.hpp"
#include "khess/functionals.hpp"

namespace khess {

namespace {

struct EstimatorPoint {
  double L;
  double tail;
  double radius;
};

EstimatorPoint estimator_at(const ProfileSolution& prof, double x) {
  const Params& p = prof.params;
  const DerivedConstants& c = prof.constants;
  const Sample smp = prof.at(x);
  const double R = prof.radius_of(x);
  const double v = smp.theta;
  const double vp = prof.coordinate == Coordinate::Radial
                        ? smp.theta_prime
                        : std::pow(R, c.b - 1.0) * smp.theta_prime;
  const double flux = std::pow(vp, p.k) * std::pow(R, -p.k);
  const double rk = std::pow(R, p.kappa);
  const double nu = (p.k - 1) * p.kappa + 2.0 * p.k;
  double tail = rk * (p.kappa - p.n) * flux / nu;
  if (prof.source == SourceMode::WithSource) {
    tail -= rk * signed_power(v, p.q) / (c.c_nk * p.kappa * (p.q - 1.0));
  }
  return {rk * (v + flux) + tail, tail, R};
}

}  // namespace

LEstimate estimate_L(const ProfileSolution& profile) {
  if (profile.termination == Termination::ToleranceFailure) {
    throw NumericalError("cannot estimate L from a failed integration: " + profile.diagnostic);
  }
  if (profile.termination == Termination::SupportCollapse || profile.params.gamma == 0.0) {
    return {};
  }
  if (!(profile.params.kappa > 0.0)) {
    throw DomainError("L = lim r^kappa v is only defined for kappa > 0");
  }
  const std::vector<Sample>& smp = profile.samples;
  const double x_end = profile.s_end();
  const EstimatorPoint end = estimator_at(profile, x_end);

  // Tail window: the last decade for a full-length run; the last stretch of
  // accepted steps when the run stopped on the stiff slow tail.
  std::size_t first = 0;
  if (profile.termination == Termination::StiffTail) {
    const std::size_t span = std::max<std::size_t>(10, smp.size() / 100);
    first = smp.size() > span ? smp.size() - span : 0;
  } else {
    const double lo = x_end / 10.0;
    first = static_cast<std::size_t>(
        std::lower_bound(smp.begin(), smp.end(), lo,
                         [](const Sample& a, double v) { return a.s < v; }) -
        smp.begin());
  }
  const std::size_t count = smp.size() - first;
  const std::size_t stride = std::max<std::size_t>(1, count / 400);
  double spread = 0.0;
  for (std::size_t i = first; i < smp.size(); i += stride) {
    spread = std::max(spread, std::abs(estimator_at(profile, smp[i].s).L - end.L));
  }
  LEstimate out;
  out.L = end.L;
  out.tail = end.tail;
  out.radius = end.radius;
  out.uncertainty = std::max(std::abs(end.tail), spread);
  return out;
}

const char* to_string(ProfileKind kind) {
  switch (kind) {
    case ProfileKind::Crossing:
      return "crossing";
    case ProfileKind::Slow:
      return "slow";
    case ProfileKind::Fast:
      return "fast";
  }
  return "unknown";
}

Verdict decide(const VerdictInputs& in, double threshold) {
  Verdict v;
  const bool small = std::abs(in.L) <= threshold;
  if (in.zero_count > 0) {
    if ((in.collapsed || small) && in.kappa_at_least_n) {
      v.kind = ProfileKind::Fast;
      v.sign_changing_fast = true;
    } else {
      v.kind = ProfileKind::Crossing;
    }
  } else if (in.collapsed || small) {
    v.kind = ProfileKind::Fast;
  } else if (in.L < 0.0) {
    v.kind = ProfileKind::Crossing;
    v.zero_beyond_horizon = true;
  } else {
    v.kind = ProfileKind::Slow;
  }
  v.inconclusive = !in.collapsed && std::isfinite(in.L) && in.L_uncertainty > std::abs(in.L);
  return v;
}

ClassificationResult classify_profile(const ProfileSolution& profile,
                                      std::optional<double> threshold_scale) {
  const Params& p = profile.params;
  ClassificationResult res;
  res.gamma = p.gamma;
  res.zero_count = profile.zeros.size();
  for (double z : profile.zeros) res.zeros.push_back(profile.radius_of(z));
  if (profile.support_edge) res.support_edge = profile.radius_of(*profile.support_edge);
  res.diagnostics.termination = profile.termination;
  res.diagnostics.s_end = profile.s_of(profile.s_end());
  res.diagnostics.steps = profile.steps_accepted;
  const double scale = threshold_scale.value_or(p.gamma);
  res.diagnostics.threshold = fast_threshold_factor * std::abs(scale);

  if (profile.termination == Termination::ToleranceFailure) {
    if (profile.zeros.empty()) {
      throw NumericalError("classification failed: " + profile.diagnostic);
    }
    res.kind = ProfileKind::Crossing;
    res.L_estimate = std::numeric_limits<double>::quiet_NaN();
    res.L_uncertainty = std::numeric_limits<double>::quiet_NaN();
    res.diagnostics.note = "integration stopped after the last zero: " + profile.diagnostic;
    return res;
  }

  const LEstimate est = estimate_L(profile);
  res.L_estimate = est.L;
  res.L_uncertainty = est.uncertainty;
  VerdictInputs in;
  in.L = est.L;
  in.L_uncertainty = est.uncertainty;
  in.zero_count = res.zero_count;
  in.collapsed = profile.termination == Termination::SupportCollapse;
  in.kappa_at_least_n = p.kappa >= p.n;
  const Verdict v = decide(in, res.diagnostics.threshold);
  res.kind = v.kind;
  res.diagnostics.inconclusive = v.inconclusive;
  res.diagnostics.sign_changing_fast = v.sign_changing_fast;
  res.diagnostics.zero_beyond_horizon = v.zero_beyond_horizon;
  return res;
}

ClassificationResult classify(const Params& p, const IntegratorConfig& cfg,
                              std::optional<double> threshold_scale) {
  return classify_profile(integrate(p, cfg), threshold_scale);
}

ZeroCount count_zeros(const ProfileSolution& profile) {
  ZeroCount zc;
  zc.count = profile.zeros.size();
  for (double z : profile.zeros) {
    zc.s.push_back(profile.s_of(z));
    zc.r.push_back(profile.radius_of(z));
  }
  return zc;
}

const char* to_string(AsymptoticRegime regime) {
  switch (regime) {
    case AsymptoticRegime::Above:
      return "above";
    case AsymptoticRegime::Boundary:
      return "boundary";
    case AsymptoticRegime::Below:
      return "below";
  }
  return "unknown";
}

AsymptoticExpansion asymptotic_coefficients(const Params& p, double L) {
  if (!(L > 0.0)) throw DomainError("asymptotic expansion needs L > 0");
  if (!(p.kappa > 0.0)) throw DomainError("asymptotic expansion needs kappa > 0");
  const DerivedConstants c = derive_constants(p);
  const double k = p.k;
  const double kappa = p.kappa;
  AsymptoticExpansion e;
  const double gap = ((p.q - k) * kappa - 2.0 * k) / (2.0 * k);
  if (std::abs(gap) <= 1e-12) {
    e.regime = AsymptoticRegime::Boundary;
  } else {
    e.regime = gap > 0.0 ? AsymptoticRegime::Above : AsymptoticRegime::Below;
  }
  const double ratio = (k + 1.0) / (2.0 * k);
  const double pow_a = (k + 1.0) * (kappa + 2.0) / 2.0;
  const double pow_b = (k + 1.0) * kappa * p.q / (2.0 * k);
  e.L = L;
  e.nu = (k - 1.0) * kappa + 2.0 * k;
  e.A = (k * kappa - (p.n - 2.0 * k)) * std::pow(ratio, pow_a) * std::pow(kappa * L, k) / e.nu;
  e.B = std::pow(ratio, pow_b) * std::pow(L, p.q) / (kappa * (p.q - 1.0) * c.c_nk);

  const double kt = c.kappa_tilde;
  e.L_tilde = L / std::pow(c.b, kt);
  e.nu_tilde = (k - 1.0) * kt + k + 1.0;
  e.A_tilde = (k * kt - (c.n_tilde - (k + 1.0))) * std::pow(kt * e.L_tilde, k) / (c.b * e.nu_tilde);
  e.B_tilde = std::pow(e.L_tilde, p.q) / (c.b * c.c_nk * kt * (p.q - 1.0));

  switch (e.regime) {
    case AsymptoticRegime::Above:
      e.correction_power = e.nu;
      e.correction_coefficient = e.A * std::pow(c.b, pow_a);
      break;
    case AsymptoticRegime::Boundary:
      e.correction_power = kappa * (p.q - 1.0);
      e.correction_coefficient = (e.A + e.B) * std::pow(c.b, pow_b);
      break;
    case AsymptoticRegime::Below:
      e.correction_power = kappa * (p.q - 1.0);
      e.correction_coefficient = e.B * std::pow(c.b, pow_b);
      break;
  }
  return e;
}

TailFit fit_power_tail(const std::vector<double>& r, const std::vector<double>& g, double power) {
  if (r.size() != g.size()) throw DomainError("fit_power_tail: size mismatch");
  if (r.size() < 3) throw NumericalError("fit_power_tail: fewer than 3 tail samples");
  TailFit fit;
  fit.power = power;
  fit.samples = r.size();
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    const double basis = std::pow(r[i], -power);
    num += g[i] * basis;
    den += basis * basis;
  }
  fit.coefficient = num / den;
  double ss = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    const double d = g[i] - fit.coefficient * std::pow(r[i], -power);
    ss += d * d;
  }
  fit.residual = std::sqrt(ss / r.size());

  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  std::size_t m = 0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (g[i] == 0.0 || !(r[i] > 0.0)) continue;
    const double x = std::log(r[i]);
    const double y = std::log(std::abs(g[i]));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++m;
  }
  if (m >= 2) {
    const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    fit.fitted_power = -slope;
  } else {
    fit.fitted_power = std::numeric_limits<double>::quiet_NaN();
  }
  return fit;
}

TailFit fit_tail(const ProfileSolution& profile, double L) {
  const AsymptoticExpansion e = asymptotic_coefficients(profile.params, L);
  const double r_end = profile.radius_of(profile.s_end());
  const double r_lo = r_end / 10.0;
  std::vector<double> rs;
  std::vector<double> gs;
  const std::size_t n = profile.samples.size();
  const std::size_t stride = std::max<std::size_t>(1, n / 20000);
  for (std::size_t i = 0; i < n; i += stride) {
    const Sample& smp = profile.samples[i];
    const double r = profile.radius_of(smp.s);
    if (r < r_lo) continue;
    rs.push_back(r);
    gs.push_back(std::pow(r, profile.params.kappa) * smp.theta - L);
  }
  return fit_power_tail(rs, gs, e.correction_power);
}

AprioriReport check_apriori_bounds(const ProfileSolution& profile) {
  const Params& p = profile.params;
  AprioriReport rep;
  rep.theta_bound = p.gamma;
  const double e0 = energy(p, p.gamma, 0.0);
  const double k = p.k;
  rep.theta_prime_bound = e0 >= 0.0 ? std::pow((k + 1.0) / k * e0, 1.0 / (k + 1.0))
                                    : std::numeric_limits<double>::infinity();
  const std::vector<Sample> smp = profile.transformed_samples();
  double prev = std::numeric_limits<double>::quiet_NaN();
  for (const Sample& s : smp) {
    rep.max_abs_theta = std::max(rep.max_abs_theta, std::abs(s.theta));
    rep.max_abs_theta_prime = std::max(rep.max_abs_theta_prime, std::abs(s.theta_prime));
    const double e = energy(p, s.theta, s.theta_prime);
    if (std::isfinite(prev)) rep.max_energy_increase = std::max(rep.max_energy_increase, e - prev);
    prev = e;
  }
  const double e_start = smp.empty() ? 0.0 : energy(p, smp.front().theta, smp.front().theta_prime);
  rep.energy_tolerance = 10.0 * (profile.config.abs_tol + profile.config.rel_tol * std::abs(e_start));
  rep.theta_slack = rep.theta_bound - rep.max_abs_theta;
  rep.theta_prime_slack = rep.theta_prime_bound - rep.max_abs_theta_prime;
  rep.ok = rep.max_abs_theta <= p.gamma + 1e-8 &&
           rep.max_abs_theta_prime <= rep.theta_prime_bound * (1.0 + 1e-12) + 1e-8 &&
           rep.max_energy_increase <= rep.energy_tolerance;
  return rep;
}

}  // namespace khess
