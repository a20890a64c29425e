#include "khess/selfsimilar.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "khess/analysis.hpp"
#include "khess/errors.hpp"
#include "khess/format.hpp"

namespace khess {

namespace {

// Fritsch-Carlson limiter applied to the exact sample slopes.
void limit_slopes(const std::vector<double>& x, const std::vector<double>& y,
                  std::vector<double>& m) {
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    const double d = (y[i + 1] - y[i]) / (x[i + 1] - x[i]);
    if (d == 0.0) {
      m[i] = 0.0;
      m[i + 1] = 0.0;
      continue;
    }
    if (m[i] * d < 0.0) m[i] = 0.0;
    if (m[i + 1] * d < 0.0) m[i + 1] = 0.0;
    const double a = m[i] / d;
    const double b = m[i + 1] / d;
    const double s = a * a + b * b;
    if (s > 9.0) {
      const double tau = 3.0 / std::sqrt(s);
      m[i] = tau * a * d;
      m[i + 1] = tau * b * d;
    }
  }
}

constexpr std::array<double, 4> gl_nodes{-0.8611363115940526, -0.3399810435848563,
                                         0.3399810435848563, 0.8611363115940526};
constexpr std::array<double, 4> gl_weights{0.3478548451374538, 0.6521451548625461,
                                           0.6521451548625461, 0.3478548451374538};

}  // namespace

double SelfSimilarFrame::time_scale(double t) const { return c_nk * t / exps.beta0; }

double SelfSimilarFrame::profile(double rho) const {
  if (rho < 0.0) throw DomainError("negative radius");
  if (support_edge && rho >= *support_edge) return 0.0;
  if (rho > r.back()) {
    throw DomainError("radius " + format_double(rho) + " beyond the profile data (r_max = " +
                      format_double(r.back()) + ")");
  }
  const auto it = std::upper_bound(r.begin(), r.end(), rho);
  const std::size_t i = it == r.end() ? r.size() - 2 : static_cast<std::size_t>(it - r.begin()) - 1;
  const double h = r[i + 1] - r[i];
  const double u = (rho - r[i]) / h;
  const double u2 = u * u;
  const double u3 = u2 * u;
  return (2 * u3 - 3 * u2 + 1) * v[i] + (u3 - 2 * u2 + u) * h * slope[i] +
         (-2 * u3 + 3 * u2) * v[i + 1] + (u3 - u2) * h * slope[i + 1];
}

SelfSimilarFrame make_frame(const ProfileSolution& profile) {
  const Params& p = profile.params;
  SelfSimilarFrame f;
  f.params = p;
  f.exps = type1_exponents(p.n, p.k, p.q);
  f.c_nk = profile.constants.c_nk;
  if (std::abs(p.kappa - f.exps.kappa0) > 1e-12 * std::max(1.0, f.exps.kappa0)) {
    throw ParameterDomainError("self-similar frames need kappa = kappa0 = " +
                               format_double(f.exps.kappa0));
  }
  if (profile.termination == Termination::ToleranceFailure) {
    throw NumericalError("profile integration failed: " + profile.diagnostic);
  }
  const double b = profile.constants.b;
  f.r.push_back(0.0);
  f.v.push_back(p.gamma);
  f.slope.push_back(0.0);
  for (const Sample& smp : profile.samples) {
    double rr = 0.0;
    double vp = 0.0;
    if (profile.coordinate == Coordinate::Radial) {
      rr = smp.s;
      vp = smp.theta_prime;
    } else {
      rr = profile.radius_of(smp.s);
      vp = smp.theta_prime * std::pow(rr, b - 1.0);
    }
    if (!(rr > f.r.back())) continue;
    f.r.push_back(rr);
    f.v.push_back(smp.theta);
    f.slope.push_back(vp);
  }
  if (f.r.size() < 2) throw NumericalError("profile has no samples");
  limit_slopes(f.r, f.v, f.slope);
  if (profile.support_edge) {
    f.support_edge = profile.radius_of(*profile.support_edge);
  } else {
    const LEstimate est = estimate_L(profile);
    f.L = est.L;
    f.L_uncertainty = est.uncertainty;
  }
  return f;
}

double eval_u(const SelfSimilarFrame& frame, double t, double x_norm) {
  if (!(t > 0.0)) throw DomainError("eval_u needs t > 0");
  if (!(x_norm >= 0.0)) throw DomainError("eval_u needs |x| >= 0");
  const double T = frame.time_scale(t);
  return std::pow(T, -frame.exps.alpha0) * frame.profile(std::pow(T, -frame.exps.beta0) * x_norm);
}

double sphere_area(int n) {
  if (n < 1) throw ParameterDomainError("sphere_area needs n >= 1");
  return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n);
}

double lp_norm(const SelfSimilarFrame& frame, double p, double t) {
  if (!(p >= 1.0)) throw ParameterDomainError("lp_norm needs p >= 1");
  if (!(t > 0.0)) throw DomainError("lp_norm needs t > 0");
  const int n = frame.params.n;
  const double kappa = frame.params.kappa;
  const bool compact = frame.support_edge.has_value();
  if (!compact && frame.L != 0.0 && p * kappa <= n) {
    throw DivergenceError("||u(t)||_p diverges: p kappa0 = " + format_double(p * kappa) +
                          " <= n with a slow tail");
  }
  const double T = frame.time_scale(t);
  const double stretch = std::pow(T, frame.exps.beta0);
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < frame.r.size(); ++i) {
    const double a = frame.r[i] * stretch;
    const double b = frame.r[i + 1] * stretch;
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double part = 0.0;
    for (std::size_t j = 0; j < gl_nodes.size(); ++j) {
      const double x = mid + half * gl_nodes[j];
      part += gl_weights[j] * std::pow(std::abs(eval_u(frame, t, x)), p) * std::pow(x, n - 1);
    }
    sum += half * part;
  }
  if (!compact && frame.L != 0.0) {
    const double R = frame.r.back() * stretch;
    const double amp = std::pow(T, -frame.exps.alpha0) * std::abs(frame.L) *
                       std::pow(stretch, kappa);
    sum += std::pow(amp, p) * std::pow(R, n - p * kappa) / (p * kappa - n);
  }
  return std::pow(sphere_area(n) * sum, 1.0 / p);
}

ScalingMeasurement measure_scaling_exponent(const SelfSimilarFrame& frame, double p,
                                            const std::vector<double>& times) {
  if (times.size() < 2) throw ParameterDomainError("need at least two times");
  ScalingMeasurement m;
  m.times = times;
  m.predicted = frame.params.n * frame.exps.beta0 / p - frame.exps.alpha0;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (double t : times) {
    const double nrm = lp_norm(frame, p, t);
    m.norms.push_back(nrm);
    const double x = std::log(t);
    const double y = std::log(nrm);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double N = static_cast<double>(times.size());
  const double den = N * sxx - sx * sx;
  if (den == 0.0) throw ParameterDomainError("times must not all coincide");
  m.measured = (N * sxy - sx * sy) / den;
  return m;
}

double invariant_exponent(int n, int k, double q) {
  if (!(q > k)) throw ParameterDomainError("invariant_exponent needs q > k");
  return n * (q - k) / (2.0 * k);
}

SmallTimeReport small_time_limits(const SelfSimilarFrame& frame, double epsilon, double p) {
  if (!frame.support_edge) {
    throw RegimeError("small_time_limits needs a compactly supported (fast) profile");
  }
  if (!(epsilon > 0.0)) throw DomainError("epsilon must be positive");
  const double kappa = frame.params.kappa;
  if (!(p >= 1.0 && p < frame.params.n / kappa)) {
    throw ParameterDomainError("small_time_limits needs 1 <= p < n / kappa0");
  }
  const double beta0 = frame.exps.beta0;
  const double edge = *frame.support_edge;
  SmallTimeReport rep;
  rep.epsilon = epsilon;
  rep.p = p;
  rep.t_epsilon = beta0 / frame.c_nk * std::pow(epsilon / edge, 1.0 / beta0);
  rep.support_radius_at_unit_time = std::pow(frame.time_scale(1.0), beta0) * edge;
  auto sup_beyond = [&](double t) {
    double s = 0.0;
    for (int i = 0; i <= 200; ++i) {
      const double x = epsilon * std::pow(100.0, i / 200.0);
      s = std::max(s, std::abs(eval_u(frame, t, x)));
    }
    return s;
  };
  rep.sup_at_t_epsilon = sup_beyond(rep.t_epsilon);
  rep.sup_at_unit_time = sup_beyond(1.0);
  rep.times = {1.0, 0.1, 0.01};
  for (double t : rep.times) rep.norms.push_back(lp_norm(frame, p, t));
  rep.norms_decreasing = rep.norms[1] < rep.norms[0] && rep.norms[2] < rep.norms[1];
  return rep;
}

SingularityComparison singularity_comparison(int n, int k, double q) {
  if (!(q > 1.0)) throw ParameterDomainError("singularity_comparison needs q > 1");
  const CriticalExponents ce = critical_exponents(n, k);
  if (!(q < ce.q_c)) throw RegimeError("singularity_comparison needs q < q_c");
  return {1.0 / (q - 1.0), static_cast<double>(n) / (n * (k - 1) + 2 * k)};
}

}  // namespace khess
