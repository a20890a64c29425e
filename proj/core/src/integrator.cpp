#include "khess/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>

#include "khess/errors.hpp"
#include "khess/format.hpp"

namespace khess {

double signed_root(double x, int k) {
  if (k == 1 || x == 0.0) return x;
  if (k == 3) return std::cbrt(x);
  const double m = std::pow(std::abs(x), 1.0 / k);
  return x < 0.0 ? -m : m;
}

double signed_power(double x, double q) {
  if (x == 0.0) return 0.0;
  const double m = std::exp(q * std::log(std::abs(x)));
  return x < 0.0 ? -m : m;
}

Derivative rhs(const Params& p, const DerivedConstants& c, const State& st, SourceMode mode) {
  if (!(st.s > 0.0)) throw DomainError("rhs: s must be > 0");
  const double tp = signed_root(st.w, p.k);
  double dw = -(c.delta / st.s) * st.w - c.b * st.s * tp - p.kappa * st.theta;
  if (mode == SourceMode::WithSource) dw -= signed_power(st.theta, p.q) / c.c_nk;
  return {tp, dw};
}

namespace {

double seed_slope(const Params& p, const DerivedConstants& c, double dim, SourceMode mode) {
  double drive = p.kappa;
  if (mode == SourceMode::WithSource) drive += std::pow(p.gamma, p.q - 1.0) / c.c_nk;
  return p.gamma / dim * drive;
}

}  // namespace

State seed_state(const Params& p, const DerivedConstants& c, double s0, SourceMode mode) {
  if (!(s0 > 0.0)) throw DomainError("seed_state: s0 must be > 0");
  if (p.gamma == 0.0) return {s0, 0.0, 0.0};
  const double slope = seed_slope(p, c, c.n_tilde, mode);
  const double k = p.k;
  State st;
  st.s = s0;
  st.w = -slope * s0;
  st.theta = p.gamma - k / (k + 1.0) * signed_root(slope, p.k) * std::pow(s0, (k + 1.0) / k);
  return st;
}

double default_s0(const Params& p) {
  if (p.gamma <= 0.0) return 1e-6;
  return 1e-6 * std::max(1.0, std::pow(p.gamma, -(p.q - 1.0) / p.k));
}

double default_s_max(const Params& p) {
  if (p.k == 1) return 1e3;
  const DerivedConstants c = derive_constants(p);
  return 1e2 * (1.0 + std::max(0.0, c.kappa_tilde));
}

IntegratorConfig resolve(const IntegratorConfig& cfg, const Params& p) {
  IntegratorConfig out = cfg;
  if (out.s0 <= 0.0) out.s0 = default_s0(p);
  if (out.s_max <= 0.0) out.s_max = default_s_max(p);
  if (!(out.rel_tol > 0.0) || !(out.abs_tol > 0.0)) {
    throw ParameterDomainError("integrator tolerances must be positive");
  }
  if (!(out.s0 < out.s_max)) {
    throw ParameterDomainError("integrator needs s0 < s_max");
  }
  if (!(out.stiff_ratio > 0.0)) throw ParameterDomainError("stiff_ratio must be positive");
  if (out.max_steps == 0) throw ParameterDomainError("max_steps must be positive");
  if (!(out.c_support > 0.0)) throw ParameterDomainError("c_support must be positive");
  return out;
}

const char* to_string(Termination t) {
  switch (t) {
    case Termination::ReachedSMax:
      return "reached_s_max";
    case Termination::SupportCollapse:
      return "support_collapse";
    case Termination::StiffTail:
      return "stiff_tail";
    case Termination::ToleranceFailure:
      return "tolerance_failure";
  }
  return "unknown";
}

namespace {

using Vec = std::array<double, 2>;

// Dormand-Prince 5(4) tableau with Hairer's dense-output coefficients.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                 a75 = -2187.0 / 6784, a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

double dense_value(const DenseSegment& seg, int comp, double x) {
  const auto& r = seg.coef[comp];
  const double t = (x - seg.x0) / seg.h;
  const double t1 = 1.0 - t;
  return r[0] + t * (r[1] + t1 * (r[2] + t * (r[3] + t1 * r[4])));
}

// Locates a sign change of g on [lo, hi] (g(lo) g(hi) < 0) by bisection.
template <class G>
double bisect_root(G&& g, double lo, double hi, double tol) {
  double glo = g(lo);
  for (int it = 0; it < 200 && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double gm = g(mid);
    if (gm == 0.0) return mid;
    if ((gm < 0.0) == (glo < 0.0)) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Everything the generic driver needs to know about one of the two forms.
struct Problem {
  Params p;
  DerivedConstants c;
  Coordinate coord;
  SourceMode mode;
};

Vec eval_rhs(const Problem& pr, double x, const Vec& y) {
  const Params& p = pr.p;
  const DerivedConstants& c = pr.c;
  if (pr.coord == Coordinate::Transformed) {
    const Derivative d = rhs(p, c, State{x, y[0], y[1]}, pr.mode);
    return {d.dtheta_ds, d.dw_ds};
  }
  const double vp = signed_root(y[1], p.k);
  double bracket = x * vp + p.kappa * y[0];
  if (pr.mode == SourceMode::WithSource) bracket += signed_power(y[0], p.q) / c.c_nk;
  const double dW = -((p.n - p.k) / x) * y[1] - std::pow(x, p.k - 1) * bracket;
  return {vp, dW};
}

// Transformed-coordinate view of a point, used by the collapse test.
struct TransformedPoint {
  double s, theta, theta_prime;
};

TransformedPoint to_transformed(const Problem& pr, double x, double u, double up) {
  if (pr.coord == Coordinate::Transformed) return {x, u, up};
  // v'(r) = r^{b-1} theta'(s).
  return {r_to_s(pr.c, x), u, up * std::pow(x, 1.0 - pr.c.b)};
}

double energy_of(const Params& p, const DerivedConstants& c, double theta, double tp) {
  const double k = p.k;
  return k / (k + 1.0) * std::pow(tp, p.k + 1) + 0.5 * p.kappa * theta * theta +
         std::abs(signed_power(theta, p.q + 1.0)) / (c.c_nk * (p.q + 1.0));
}

// The collapse test compares the Emden-Fowler scaled quantities
// s^{kt} theta and s^{kt+1} w (kt = kappa/b) against c_support*gamma, so a slow
// tail L s^{-kt} never triggers it unless L itself is negligible. The flux
// w = (theta')^k is tested rather than theta': near an edge theta' behaves
// like a (k-1)-th root of the distance and cannot reach c_support*gamma in
// double precision.
bool collapsed(const Problem& pr, const IntegratorConfig& cfg, double x, double u, double up) {
  const TransformedPoint t = to_transformed(pr, x, u, up);
  const double eps = cfg.c_support * pr.p.gamma;
  const double kt = std::max(0.0, pr.c.kappa_tilde);
  const double scale = std::pow(std::max(1.0, t.s), kt);
  const double scale_d = scale * std::max(1.0, t.s);
  if (std::abs(t.theta) * scale >= eps) return false;
  if (std::abs(std::pow(t.theta_prime, pr.p.k)) * scale_d >= eps) return false;
  return std::abs(energy_of(pr.p, pr.c, t.theta, t.theta_prime)) < eps * eps;
}

// Slow tail of a monotone profile: w' = -b s (theta' - theta'_qs) with
//   theta'_qs = -(kappa theta + c_nk^{-1} |theta|^{q-1} theta + delta w / s) / (b s),
// so theta' close to theta'_qs means the flux has relaxed onto the tail where
// theta cannot change sign. Reported only once that relaxation is stiff.
bool on_slow_tail(const Problem& pr, const IntegratorConfig& cfg, double x, double u, double up) {
  const TransformedPoint t = to_transformed(pr, x, u, up);
  const int k = pr.p.k;
  const double w = std::pow(t.theta_prime, k);
  double drive = pr.p.kappa * t.theta + pr.c.delta * w / t.s;
  if (pr.mode == SourceMode::WithSource) drive += signed_power(t.theta, pr.p.q) / pr.c.c_nk;
  const double tp_qs = -drive / (pr.c.b * t.s);
  if (!(tp_qs * t.theta_prime > 0.0)) return false;
  if (std::abs(t.theta_prime - tp_qs) > 0.5 * std::abs(tp_qs)) return false;
  const double rate = pr.c.b * t.s / (k * std::pow(std::abs(t.theta_prime), k - 1));
  return rate * t.s > cfg.stiff_ratio;
}

Vec seed_vector(const Problem& pr, double x0) {
  if (pr.coord == Coordinate::Transformed) {
    const State st = seed_state(pr.p, pr.c, x0, pr.mode);
    return {st.theta, st.w};
  }
  if (pr.p.gamma == 0.0) return {0.0, 0.0};
  const double slope = seed_slope(pr.p, pr.c, pr.p.n, pr.mode);
  const double root = signed_root(slope, pr.p.k);
  return {pr.p.gamma - 0.5 * root * x0 * x0, -slope * std::pow(x0, pr.p.k)};
}

ProfileSolution drive(const Problem& pr, const IntegratorConfig& cfg) {
  ProfileSolution prof;
  prof.params = pr.p;
  prof.constants = pr.c;
  prof.coordinate = pr.coord;
  prof.source = pr.mode;
  prof.config = cfg;

  const int k = pr.p.k;
  const double x_end = cfg.s_max;
  double x = cfg.s0;
  Vec y = seed_vector(pr, x);
  prof.samples.push_back({x, y[0], signed_root(y[1], k)});

  if (pr.p.gamma == 0.0) {
    prof.samples.push_back({x_end, 0.0, 0.0});
    DenseSegment seg;
    seg.x0 = x;
    seg.h = x_end - x;
    prof.dense.push_back(seg);
    return prof;
  }

  const bool detect_collapse = k > 1;
  const double guard = 2.0 * pr.p.gamma;
  Vec k1 = eval_rhs(pr, x, y);
  double h = std::min(x, 1e-3 * (x_end - x));
  const double rtol = cfg.rel_tol;
  const double atol = cfg.abs_tol;

  auto fail = [&](std::string why) {
    prof.termination = Termination::ToleranceFailure;
    prof.diagnostic = std::move(why);
    return prof;
  };

  std::optional<double> collapse_at;
  std::size_t forced_steps = 0;
  constexpr std::size_t max_forced = 100000;

  while (x < x_end) {
    if (prof.steps_accepted + prof.steps_rejected >= cfg.max_steps) {
      return fail("max_steps exceeded at s=" + std::to_string(x));
    }
    const double hmin = 1e-15 * std::max(1.0, std::abs(x));
    if (h < hmin) return fail("step size underflow at s=" + std::to_string(x));
    if (x + h > x_end || x_end - (x + h) < hmin) h = x_end - x;

    Vec yt, k2, k3, k4, k5, k6, k7, y1;
    for (int i = 0; i < 2; ++i) yt[i] = y[i] + h * a21 * k1[i];
    k2 = eval_rhs(pr, x + c2 * h, yt);
    for (int i = 0; i < 2; ++i) yt[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    k3 = eval_rhs(pr, x + c3 * h, yt);
    for (int i = 0; i < 2; ++i) yt[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    k4 = eval_rhs(pr, x + c4 * h, yt);
    for (int i = 0; i < 2; ++i)
      yt[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    k5 = eval_rhs(pr, x + c5 * h, yt);
    for (int i = 0; i < 2; ++i)
      yt[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    k6 = eval_rhs(pr, x + h, yt);
    for (int i = 0; i < 2; ++i)
      y1[i] = y[i] + h * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
    k7 = eval_rhs(pr, x + h, y1);

    Vec err;
    for (int i = 0; i < 2; ++i) {
      err[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
    }
    // Error in theta is measured directly; error in w is measured in units of
    // theta' = w^{1/k} through the linearisation of the root, with the slope
    // frozen at the larger endpoint so that a transversal crossing of w = 0
    // does not force the step to zero.
    const double sk0 = atol + rtol * std::max(std::abs(y[0]), std::abs(y1[0]));
    const double tp0 = signed_root(y[1], k);
    const double tp1 = signed_root(y1[1], k);
    const double sk1 = atol + rtol * std::max(std::abs(tp0), std::abs(tp1));
    const double slope_base = std::max({std::abs(tp0), std::abs(tp1), sk1});
    const double q0 = err[0] / sk0;
    const double q1 = err[1] / (k * std::pow(slope_base, k - 1) * sk1);
    const double e = std::sqrt(0.5 * (q0 * q0 + q1 * q1));

    if (!std::isfinite(e) || !std::isfinite(y1[0]) || !std::isfinite(y1[1])) {
      ++prof.steps_rejected;
      h *= 0.2;
      continue;
    }
    // Across w = 0 the flux equation is only Hoelder continuous for k > 1 and
    // the local error is of reduced order; such steps are accepted at a floor.
    const double h_floor = 1e-12 * std::max(1.0, std::abs(x));
    const bool forced = e > 1.0 && k > 1 && h <= h_floor && forced_steps < max_forced;
    if (forced) ++forced_steps;
    if (e > 1.0 && !forced) {
      ++prof.steps_rejected;
      h *= std::max(0.2, 0.9 * std::pow(e, -0.2));
      continue;
    }

    // Accepted step.
    ++prof.steps_accepted;
    DenseSegment seg;
    seg.x0 = x;
    seg.h = h;
    for (int i = 0; i < 2; ++i) {
      const double dy = y1[i] - y[i];
      const double bspl = h * k1[i] - dy;
      seg.coef[i] = {y[i], dy, bspl, dy - h * k7[i] - bspl,
                     h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] +
                          d7 * k7[i])};
    }
    prof.dense.push_back(seg);
    const double x1 = x + h;
    const double ev_tol = std::max(cfg.event_tol, 4.0 * std::numeric_limits<double>::epsilon() * x1);

    // Events inside (x, x1], in increasing order.
    struct Event {
      double at;
      bool is_zero;
    };
    std::array<Event, 2> events{};
    int n_events = 0;
    if ((y[0] > 0.0 && y1[0] <= 0.0) || (y[0] < 0.0 && y1[0] >= 0.0)) {
      const double at = y1[0] == 0.0
                            ? x1
                            : bisect_root([&](double t) { return dense_value(seg, 0, t); }, x, x1, ev_tol);
      events[n_events++] = {at, true};
    }
    if ((y[1] > 0.0 && y1[1] <= 0.0) || (y[1] < 0.0 && y1[1] >= 0.0)) {
      const double at = y1[1] == 0.0
                            ? x1
                            : bisect_root([&](double t) { return dense_value(seg, 1, t); }, x, x1, ev_tol);
      events[n_events++] = {at, false};
    }
    if (n_events == 2 && events[1].at < events[0].at) std::swap(events[0], events[1]);

    for (int i = 0; i < n_events && !collapse_at; ++i) {
      const Event& ev = events[i];
      (ev.is_zero ? prof.zeros : prof.critical_points).push_back(ev.at);
      if (detect_collapse) {
        const double u = dense_value(seg, 0, ev.at);
        const double up = signed_root(dense_value(seg, 1, ev.at), k);
        if (collapsed(pr, cfg, ev.at, ev.is_zero ? 0.0 : u, ev.is_zero ? up : 0.0)) {
          collapse_at = ev.at;
        }
      }
    }
    if (!collapse_at && detect_collapse && collapsed(pr, cfg, x1, y1[0], tp1)) {
      // First point of the step where the test holds.
      auto pred = [&](double t) {
        return collapsed(pr, cfg, t, dense_value(seg, 0, t), signed_root(dense_value(seg, 1, t), k))
                   ? 1.0
                   : -1.0;
      };
      collapse_at = pred(x) > 0.0 ? x : bisect_root(pred, x, x1, ev_tol);
    }

    x = x1;
    y = y1;
    k1 = k7;
    prof.samples.push_back({x, y[0], tp1});

    if (collapse_at) break;
    if (std::abs(y[0]) > guard) {
      return fail("|theta| exceeded 2*gamma at s=" + std::to_string(x) +
                  "; integrator misconfigured");
    }

    if (detect_collapse && y[0] * tp1 < 0.0 && on_slow_tail(pr, cfg, x, y[0], tp1)) {
      prof.termination = Termination::StiffTail;
      return prof;
    }

    const double fac = e == 0.0 ? 5.0 : std::min(5.0, std::max(0.2, 0.9 * std::pow(e, -0.2)));
    h *= forced ? 2.0 : fac;
  }

  if (collapse_at) {
    double edge = *collapse_at;
    // A zero with no critical point between it and the collapse point is the
    // edge itself, approached from the sign-changing side.
    if (!prof.zeros.empty()) {
      const double z = prof.zeros.back();
      const bool cp_between = std::any_of(prof.critical_points.begin(), prof.critical_points.end(),
                                          [&](double cp) { return cp > z && cp < edge; });
      if (z <= edge && !cp_between) {
        edge = z;
        prof.zeros.pop_back();
      }
    }
    std::erase_if(prof.zeros, [&](double z) { return z >= edge; });
    std::erase_if(prof.critical_points, [&](double cp) { return cp >= edge; });
    std::erase_if(prof.samples, [&](const Sample& smp) { return smp.s >= edge; });
    prof.samples.push_back({edge, 0.0, 0.0});
    if (edge < x_end) prof.samples.push_back({x_end, 0.0, 0.0});
    prof.support_edge = edge;
    prof.termination = Termination::SupportCollapse;
  }
  return prof;
}

}  // namespace

Sample ProfileSolution::at(double s) const {
  if (samples.empty()) throw DomainError("empty profile");
  const double lo = samples.front().s;
  const double hi = samples.back().s;
  const double slack = 1e-12 * std::max(1.0, std::abs(hi));
  if (s < lo || s > hi + slack) {
    throw DomainError("profile evaluated outside its sampled range");
  }
  if (support_edge && s >= *support_edge) return {s, 0.0, 0.0};
  if (dense.empty()) return samples.front();
  auto it = std::upper_bound(dense.begin(), dense.end(), s,
                             [](double v, const DenseSegment& seg) { return v < seg.x0; });
  const DenseSegment& seg = it == dense.begin() ? dense.front() : *std::prev(it);
  const double t = std::min(s, seg.x0 + seg.h);
  return {s, dense_value(seg, 0, t), signed_root(dense_value(seg, 1, t), params.k)};
}

double ProfileSolution::v_at_radius(double r) const {
  if (!(r >= 0.0)) throw DomainError("radius must be >= 0");
  const double x = coordinate == Coordinate::Transformed ? r_to_s(constants, r) : r;
  if (x < s_begin()) {
    // Inside the seed point the leading-order series is exact to the seed order.
    const Problem pr{params, constants, coordinate, source};
    if (coordinate == Coordinate::Transformed) {
      return x == 0.0 ? params.gamma : seed_state(params, constants, x, source).theta;
    }
    return x == 0.0 ? params.gamma : seed_vector(pr, x)[0];
  }
  return at(x).theta;
}

double ProfileSolution::v_prime_at_radius(double r) const {
  if (!(r >= 0.0)) throw DomainError("radius must be >= 0");
  if (r == 0.0) return 0.0;
  if (coordinate == Coordinate::Radial) {
    if (r < s_begin()) {
      const Problem pr{params, constants, coordinate, source};
      return signed_root(seed_vector(pr, r)[1], params.k);
    }
    return at(r).theta_prime;
  }
  const double s = r_to_s(constants, r);
  const double tp = s < s_begin() ? signed_root(seed_state(params, constants, s, source).w, params.k)
                                  : at(s).theta_prime;
  return std::pow(r, constants.b - 1.0) * tp;
}

double ProfileSolution::radius_of(double x) const {
  return coordinate == Coordinate::Transformed ? s_to_r(constants, x) : x;
}

double ProfileSolution::s_of(double x) const {
  return coordinate == Coordinate::Transformed ? x : r_to_s(constants, x);
}

std::vector<Sample> ProfileSolution::transformed_samples() const {
  if (coordinate == Coordinate::Transformed) return samples;
  std::vector<Sample> out;
  out.reserve(samples.size());
  for (const Sample& smp : samples) {
    const double tp = smp.s > 0.0 ? smp.theta_prime * std::pow(smp.s, 1.0 - constants.b) : 0.0;
    out.push_back({r_to_s(constants, smp.s), smp.theta, tp});
  }
  return out;
}

ProfileSolution integrate(const Params& p, const IntegratorConfig& cfg) {
  validate(p);
  const IntegratorConfig rc = resolve(cfg, p);
  const Problem pr{p, derive_constants(p), Coordinate::Transformed, rc.source};
  return drive(pr, rc);
}

ProfileSolution integrate_r_form(const Params& p, const IntegratorConfig& cfg) {
  validate(p);
  const DerivedConstants c = derive_constants(p);
  IntegratorConfig rc = cfg;
  if (rc.s0 <= 0.0) rc.s0 = s_to_r(c, default_s0(p));
  if (rc.s_max <= 0.0) rc.s_max = s_to_r(c, default_s_max(p));
  rc = resolve(rc, p);
  const Problem pr{p, c, Coordinate::Radial, rc.source};
  return drive(pr, rc);
}

void write_profile_csv(std::ostream& os, const ProfileSolution& prof) {
  os << "s,theta,theta_prime,r,v\n";
  for (const Sample& smp : prof.transformed_samples()) {
    os << format_double(smp.s) << ',' << format_double(smp.theta) << ','
       << format_double(smp.theta_prime) << ',' << format_double(s_to_r(prof.constants, smp.s))
       << ',' << format_double(smp.theta) << '\n';
  }
  os << "# termination=" << to_string(prof.termination) << '\n';
  for (double z : prof.zeros) os << "# zero s=" << format_double(prof.s_of(z)) << '\n';
  for (double cp : prof.critical_points) {
    os << "# critical_point s=" << format_double(prof.s_of(cp)) << '\n';
  }
  if (prof.support_edge) {
    os << "# support_edge s=" << format_double(prof.s_of(*prof.support_edge)) << '\n';
  }
  if (!prof.diagnostic.empty()) os << "# diagnostic=" << prof.diagnostic << '\n';
}

}  // namespace khess
