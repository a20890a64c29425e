#include "khess/shooting.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <ostream>
#include <thread>

#include "khess/errors.hpp"
#include "khess/format.hpp"

namespace khess {

const char* to_string(BracketSide side) {
  switch (side) {
    case BracketSide::Low:
      return "low";
    case BracketSide::High:
      return "high";
    case BracketSide::Target:
      return "target";
  }
  return "unknown";
}

namespace {

Params with_gamma(Params p, double gamma) {
  p.gamma = gamma;
  return p;
}

void check_hypotheses(const Params& p) {
  validate(p);
  if (!(p.kappa < p.n)) throw RegimeError("shooting needs kappa < n");
  const CriticalExponents ce = critical_exponents(p.n, p.k);
  if (!(p.q > p.k) || !ce.q_star.above(p.q)) {
    throw RegimeError("shooting needs k < q < q*(k)");
  }
}

struct Trial {
  ProfileSolution profile;
  std::optional<ClassificationResult> result;
  BracketSide side = BracketSide::Low;
};

// A trial with a zero is on the high side. A collapsed profile without zeros
// is the target. Anything else, including an integration that broke down
// before any zero, stays on the low side.
Trial run_trial(const Params& p, double gamma, const IntegratorConfig& cfg, double scale) {
  Trial t{integrate(with_gamma(p, gamma), cfg), std::nullopt, BracketSide::Low};
  if (!t.profile.zeros.empty()) {
    t.side = BracketSide::High;
  } else if (t.profile.termination == Termination::SupportCollapse) {
    t.side = BracketSide::Target;
  }
  try {
    t.result = classify_profile(t.profile, scale);
    if (t.side == BracketSide::Low && t.result->diagnostics.zero_beyond_horizon) {
      t.side = BracketSide::High;
    }
  } catch (const NumericalError&) {
  }
  return t;
}

BracketStep record(const Trial& t, double gamma) {
  BracketStep st;
  st.gamma = gamma;
  st.side = t.side;
  st.zero_count = t.profile.zeros.size();
  if (t.result) {
    st.kind = to_string(t.result->kind);
    st.L = t.result->L_estimate;
  } else {
    st.kind = "failed";
    st.L = std::numeric_limits<double>::quiet_NaN();
  }
  return st;
}

}  // namespace

Bracket initial_bracket(const Params& p, const IntegratorConfig& cfg, const ShootingConfig& scfg) {
  check_hypotheses(p);
  Bracket br;
  const double lo = gamma_lower_bound(p);
  const Trial low = run_trial(p, lo, cfg, lo);
  br.history.push_back(record(low, lo));
  if (!low.result || low.result->kind != ProfileKind::Slow || !low.profile.zeros.empty()) {
    throw NumericalError("could not certify gamma_lo = " + format_double(lo) + " as slow");
  }
  br.gamma_lo = lo;
  br.L_lo = low.result->L_estimate;
  const double scale = std::abs(br.L_lo);
  double hi = lo;
  for (int i = 0; i < scfg.max_doublings; ++i) {
    hi *= 2.0;
    const Trial t = run_trial(p, hi, cfg, scale);
    br.history.push_back(record(t, hi));
    if (t.side == BracketSide::High) {
      br.gamma_hi = hi;
      return br;
    }
  }
  throw NumericalError("no crossing profile found below 2^" + std::to_string(scfg.max_doublings) +
                       " * gamma_lo");
}

ShootResult find_fast_gamma(const Params& p, const IntegratorConfig& cfg, Bracket bracket,
                            const ShootingConfig& scfg) {
  validate(p);
  if (!(bracket.gamma_lo <= bracket.gamma_hi)) {
    throw ParameterDomainError("bracket needs gamma_lo <= gamma_hi");
  }
  const double scale = bracket.L_lo != 0.0 ? std::abs(bracket.L_lo) : bracket.gamma_lo;
  ShootResult out;

  if (bracket.gamma_lo == bracket.gamma_hi) {
    out.gamma_star = bracket.gamma_lo;
    out.profile = integrate(with_gamma(p, out.gamma_star), cfg);
    out.result = classify_profile(out.profile, scale);
    out.bracket = std::move(bracket);
    return out;
  }

  const bool want_collapse = p.k > 1;
  std::optional<Trial> best;
  double best_gamma = 0.0;
  for (int it = 0; it < scfg.max_iterations; ++it) {
    const double lo = bracket.gamma_lo;
    const double hi = bracket.gamma_hi;
    const double mid = 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi)) break;
    Trial t = run_trial(p, mid, cfg, scale);
    bracket.history.push_back(record(t, mid));
    if (t.side == BracketSide::High) {
      bracket.gamma_hi = mid;
    } else {
      bracket.gamma_lo = mid;
    }
    const bool is_target = t.side == BracketSide::Target;
    if (is_target || (t.result && t.side == BracketSide::Low)) {
      best = std::move(t);
      best_gamma = mid;
    }
    const bool narrow = hi - lo <= scfg.tol_gamma * hi;
    if (want_collapse ? is_target : narrow) break;
  }

  if (!best) {
    const double g = bracket.gamma_lo;
    best = run_trial(p, g, cfg, scale);
    best_gamma = g;
  }
  if (!best->result) {
    throw NumericalError("bisection ended without a classifiable fast candidate near gamma = " +
                         format_double(best_gamma));
  }
  out.gamma_star = best_gamma;
  out.profile = std::move(best->profile);
  out.result = std::move(*best->result);
  out.bracket = std::move(bracket);
  return out;
}

ShootResult shoot(const Params& p, const IntegratorConfig& cfg, const ShootingConfig& scfg) {
  return find_fast_gamma(p, cfg, initial_bracket(p, cfg, scfg), scfg);
}

std::vector<SweepRow> sweep(const Params& tmpl, const std::vector<double>& gammas,
                            const IntegratorConfig& cfg, const SweepConfig& scfg) {
  if (gammas.empty()) throw ParameterDomainError("sweep needs a nonempty gamma grid");
  for (std::size_t i = 1; i < gammas.size(); ++i) {
    if (!(gammas[i] > gammas[i - 1])) {
      throw ParameterDomainError("sweep grid must be strictly increasing");
    }
  }
  validate(with_gamma(tmpl, std::abs(gammas.front())));

  std::vector<SweepRow> rows(gammas.size());
  std::vector<VerdictInputs> inputs(gammas.size());
  std::vector<bool> ok(gammas.size(), false);

  auto work = [&](std::size_t i) {
    SweepRow& row = rows[i];
    row.gamma = gammas[i];
    try {
      const SignedHeight h = normalize_gamma(gammas[i]);
      const ProfileSolution prof = integrate(with_gamma(tmpl, h.gamma), cfg);
      const ClassificationResult res = classify_profile(prof);
      row.kind = to_string(res.kind);
      row.L = h.sign * res.L_estimate;
      row.L_uncertainty = res.L_uncertainty;
      row.zero_count = res.zero_count;
      if (!res.zeros.empty()) row.first_zero = res.zeros.front();
      row.support_edge = res.support_edge;
      row.collapsed = prof.termination == Termination::SupportCollapse;
      inputs[i] = {res.L_estimate, res.L_uncertainty, res.zero_count, row.collapsed,
                   tmpl.kappa >= tmpl.n};
      ok[i] = std::isfinite(res.L_estimate);
    } catch (const std::exception& e) {
      row.kind = "error";
      row.error = e.what();
      row.L = std::numeric_limits<double>::quiet_NaN();
      row.L_uncertainty = std::numeric_limits<double>::quiet_NaN();
    }
  };

  unsigned jobs = scfg.jobs == 0 ? std::max(1u, std::thread::hardware_concurrency()) : scfg.jobs;
  jobs = std::min<unsigned>(jobs, static_cast<unsigned>(gammas.size()));
  if (jobs <= 1) {
    for (std::size_t i = 0; i < gammas.size(); ++i) work(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (unsigned j = 0; j < jobs; ++j) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < gammas.size(); i = next++) work(i);
      });
    }
  }

  double scale = 0.0;
  if (scfg.threshold_scale) {
    scale = *scfg.threshold_scale;
  } else {
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (ok[i]) scale = std::max(scale, std::abs(inputs[i].L));
    }
  }
  const double threshold = fast_threshold_factor * scale;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!ok[i]) continue;
    const Verdict v = decide(inputs[i], threshold);
    rows[i].kind = to_string(v.kind);
    rows[i].inconclusive = v.inconclusive;
  }
  return rows;
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string(); };
  os << "gamma,kind,L,L_uncertainty,zero_count,first_zero,support_edge\n";
  for (const SweepRow& r : rows) {
    os << format_double(r.gamma) << ',' << r.kind << ',' << format_double(r.L) << ','
       << format_double(r.L_uncertainty) << ',' << r.zero_count << ',' << opt(r.first_zero) << ','
       << opt(r.support_edge) << '\n';
  }
}

}  // namespace khess
