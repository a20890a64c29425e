#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <sstream>

#include "khess/analysis.hpp"
#include "khess/closedform.hpp"
#include "khess/errors.hpp"
#include "khess/format.hpp"
#include "khess/functionals.hpp"
#include "khess/integrator.hpp"
#include "khess/model.hpp"
#include "khess/selfsimilar.hpp"
#include "khess/shooting.hpp"
#include "manifest.hpp"
#include "report.hpp"

namespace khess::cli {

namespace {

template <class T>
T need(const std::optional<T>& v, const char* flag) {
  if (!v) throw UsageError(std::string(flag) + " is required");
  return *v;
}

Params params_from(const Options& o, bool with_gamma) {
  const int n = need(o.n, "--n");
  const int k = o.k.value_or(1);
  const double q = need(o.q, "--q");
  Params p;
  p.n = n;
  p.k = k;
  p.q = q;
  if (!(q > k)) throw ParameterDomainError("q must be > k");
  p.kappa = o.kappa ? *o.kappa : type1_exponents(n, k, q).kappa0;
  p.gamma = with_gamma ? need(o.gamma, "--gamma") : 1.0;
  return p;
}

IntegratorConfig config_from(const Options& o) {
  IntegratorConfig cfg;
  if (o.rtol) cfg.rel_tol = *o.rtol;
  if (o.atol) cfg.abs_tol = *o.atol;
  if (o.smax) cfg.s_max = *o.smax;
  return cfg;
}

ordered_json run_record(const Options& o, const Params* p, const IntegratorConfig* cfg) {
  ordered_json j;
  j["tool"] = "khess";
  j["version"] = KHESS_VERSION;
  j["command"] = o.command;
  j["arguments"] = o.argv;
  if (p) j["parameters"] = to_json(*p);
  if (cfg) j["integrator"] = to_json(*cfg);
  return j;
}

// Primary artifact goes to --out (with a manifest) or to stdout.
// Returns true when it went to a file.
bool emit(const Options& o, const std::string& body, const ordered_json& run) {
  if (o.out.empty()) {
    std::cout << body;
    return false;
  }
  const std::filesystem::path path(o.out);
  {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open " + o.out + " for writing");
    os << body;
    if (!os) throw IoError("failed writing " + o.out);
  }
  write_manifest(path, run, {path});
  return true;
}

std::string json_text(const ordered_json& j) { return j.dump(2) + "\n"; }

ClassificationResult classify_signed(Params p, double gamma, const IntegratorConfig& cfg,
                                     int& sign) {
  const SignedHeight h = normalize_gamma(gamma);
  sign = h.sign;
  p.gamma = h.gamma;
  return classify(p, cfg);
}

std::vector<double> grid_from(const Options& o) {
  if (!o.gammas.empty()) return o.gammas;
  if (o.range.size() == 3) {
    const double lo = o.range[0];
    const double hi = o.range[1];
    const int count = static_cast<int>(o.range[2]);
    if (count < 2 || !(hi > lo)) throw UsageError("--range needs LO,HI,N with HI > LO and N >= 2");
    if (o.geometric && !(lo > 0.0)) throw UsageError("--geometric needs LO > 0");
    std::vector<double> g(count);
    for (int i = 0; i < count; ++i) {
      const double f = static_cast<double>(i) / (count - 1);
      g[i] = o.geometric ? lo * std::pow(hi / lo, f) : lo + (hi - lo) * f;
    }
    return g;
  }
  if (!o.range.empty()) throw UsageError("--range needs exactly LO,HI,N");
  throw UsageError("sweep needs --gammas or --range");
}

bool shooting_applies(const Params& p) {
  const CriticalExponents ce = critical_exponents(p.n, p.k);
  return p.kappa < p.n && p.q > p.k && ce.q_star.above(p.q);
}

}  // namespace

int cmd_exponents(const Options& o) {
  const int n = need(o.n, "--n");
  const int k = need(o.k, "--k");
  const CriticalExponents ce = critical_exponents(n, k);
  std::ostringstream os;
  os << "n=" << n << "\nk=" << k << "\n";
  os << "q_c=" << format_double(ce.q_c) << "\n";
  os << "q_star=" << format_double(ce.q_star.as_double()) << "\n";
  if (o.q) {
    const double q = *o.q;
    os << "q=" << format_double(q) << "\n";
    os << "regime=" << to_string(regime(n, k, q)) << "\n";
    const TypeIExponents e = type1_exponents(n, k, q);
    os << "kappa0=" << format_double(e.kappa0) << "\n";
    os << "alpha0=" << format_double(e.alpha0) << "\n";
    os << "beta0=" << format_double(e.beta0) << "\n";
    os << "invariant_p=" << format_double(invariant_exponent(n, k, q)) << "\n";
    if (k % 2 == 1 && e.kappa0 < n) {
      os << "gamma_lower=" << format_double(gamma_lower_bound({n, k, q, e.kappa0, 1.0})) << "\n";
    }
  }
  emit(o, os.str(), run_record(o, nullptr, nullptr));
  return 0;
}

int cmd_profile(const Options& o) {
  Params p = params_from(o, true);
  const SignedHeight h = normalize_gamma(p.gamma);
  p.gamma = h.gamma;
  validate(p);
  const IntegratorConfig cfg = resolve(config_from(o), p);
  const ProfileSolution prof = integrate(p, cfg);
  std::ostringstream os;
  write_profile_csv(os, prof);
  if (emit(o, os.str(), run_record(o, &p, &cfg))) {
    ordered_json s;
    s["out"] = o.out;
    s["termination"] = to_string(prof.termination);
    s["samples"] = prof.samples.size();
    s["zero_count"] = prof.zeros.size();
    s["support_edge"] = prof.support_edge ? ordered_json(prof.radius_of(*prof.support_edge))
                                          : ordered_json(nullptr);
    std::cout << json_text(s);
  }
  if (h.sign < 0) std::cerr << "note: negative gamma; the CSV holds the reflected profile\n";
  return 0;
}

int cmd_classify(const Options& o) {
  const Params p = params_from(o, true);
  validate({p.n, p.k, p.q, p.kappa, std::abs(p.gamma)});
  const IntegratorConfig cfg = config_from(o);
  int sign = 1;
  const ClassificationResult r = classify_signed(p, p.gamma, cfg, sign);
  Params shown = p;
  shown.gamma = std::abs(p.gamma);
  const IntegratorConfig resolved = resolve(cfg, shown);
  emit(o, json_text(to_json(r, shown, sign)), run_record(o, &p, &resolved));
  return 0;
}

int cmd_shoot(const Options& o) {
  const Params p = params_from(o, false);
  const IntegratorConfig cfg = config_from(o);
  const ShootResult s = shoot(p, cfg);
  const IntegratorConfig resolved = resolve(cfg, s.profile.params);
  emit(o, json_text(to_json(s)), run_record(o, &s.profile.params, &resolved));
  return 0;
}

int cmd_sweep(const Options& o) {
  const Params p = params_from(o, false);
  const std::vector<double> grid = grid_from(o);
  const IntegratorConfig cfg = config_from(o);
  SweepConfig scfg;
  scfg.jobs = o.jobs;
  const std::vector<SweepRow> rows = sweep(p, grid, cfg, scfg);
  std::ostringstream os;
  write_sweep_csv(os, rows);
  ordered_json run = run_record(o, &p, nullptr);
  run["integrator"] = to_json(cfg);
  run["gammas"] = grid;
  if (emit(o, os.str(), run)) {
    std::size_t failed = 0;
    for (const SweepRow& r : rows) failed += r.kind == "error";
    std::cout << json_text({{"out", o.out}, {"rows", rows.size()}, {"failed_rows", failed}});
  }
  for (const SweepRow& r : rows) {
    if (!r.error.empty()) std::cerr << "gamma=" << format_double(r.gamma) << ": " << r.error << "\n";
  }
  return 0;
}

int cmd_oracle(const Options& o) {
  if (o.points < 2) throw UsageError("--points must be >= 2");
  IntegratorConfig cfg = config_from(o);
  Params p;
  std::optional<ProfileSolution> prof;
  std::function<double(double)> v_exact;
  std::function<double(double)> residual;
  double r_lo = 1e-2;
  double r_hi = 20.0;
  ordered_json family;
  if (o.family == "exact-k1") {
    const ExactProfileK1 ex = exact_profile_k1(need(o.n, "--n"), need(o.q, "--q"));
    p = ex.params();
    prof = integrate(p, cfg);
    v_exact = [ex](double r) { return ex.v(r); };
    residual = [ex, p](double r) {
      return residual_r_form(p, r, ex.v(r), ex.v_prime(r), ex.v_second(r));
    };
    family = {{"family", o.family}, {"A_coef", ex.A_coef}, {"B_coef", ex.B_coef}, {"L", ex.L()}};
  } else if (o.family == "barenblatt") {
    const BarenblattProfile bp = barenblatt_profile(need(o.n, "--n"), need(o.k, "--k"), o.C);
    p = bp.params();
    cfg.source = SourceMode::SourceFree;
    prof = integrate(p, cfg);
    r_hi = 0.99 * bp.v_support_edge();
    v_exact = [bp](double r) { return bp.v(r); };
    residual = [bp](double r) { return bp.residual(bp.scale() * r); };
    family = {{"family", o.family},
              {"C", bp.C},
              {"alpha", bp.alpha},
              {"beta", bp.beta},
              {"gamma_B", bp.gamma_B},
              {"support_edge_rho", bp.support_edge()},
              {"support_edge_r", bp.v_support_edge()}};
  } else if (o.family == "tso") {
    const TsoCriticalProfile tp = tso_profile(need(o.n, "--n"), need(o.k, "--k"), o.mu);
    p = {tp.n, tp.k, tp.q, 0.0, tp.v(0.0)};
    r_hi = 50.0;
    v_exact = [tp](double r) { return tp.v(r); };
    residual = [tp](double r) { return tp.residual(r); };
    family = {{"family", o.family},
              {"mu", tp.mu},
              {"q", tp.q},
              {"prefactor", tp.prefactor},
              {"v0", tp.v(0.0)}};
  } else {
    throw UsageError("--family must be exact-k1, barenblatt or tso");
  }

  double max_res = 0.0;
  double max_err = 0.0;
  std::ostringstream os;
  os << "r,v_exact,v_numeric,residual\n";
  for (int i = 0; i < o.points; ++i) {
    const double r = r_lo * std::pow(r_hi / r_lo, static_cast<double>(i) / (o.points - 1));
    const double ve = v_exact(r);
    const double res = residual(r);
    max_res = std::max(max_res, std::abs(res));
    os << format_double(r) << ',' << format_double(ve) << ',';
    if (prof) {
      const double vn = prof->v_at_radius(r);
      max_err = std::max(max_err, std::abs(vn - ve));
      os << format_double(vn);
    }
    os << ',' << format_double(res) << '\n';
  }
  family["max_residual"] = max_res;
  family["max_error"] = prof ? ordered_json(max_err) : ordered_json(nullptr);
  if (prof) family["termination"] = to_string(prof->termination);
  std::string body = os.str();
  if (o.out.empty()) {
    body += "# max_residual=" + format_double(max_res) + "\n";
    if (prof) body += "# max_error=" + format_double(max_err) + "\n";
  }
  const IntegratorConfig resolved = resolve(cfg, p);
  ordered_json run = run_record(o, &p, prof ? &resolved : nullptr);
  if (emit(o, body, run)) std::cout << json_text(family);
  return 0;
}

int cmd_selfsim(const Options& o) {
  Params p = params_from(o, false);
  const IntegratorConfig cfg = config_from(o);
  ProfileSolution prof;
  if (o.gamma) {
    p.gamma = *o.gamma;
    validate(p);
    prof = integrate(p, cfg);
  } else {
    if (!shooting_applies(p)) {
      throw UsageError("--gamma is required unless kappa0 < n and k < q < q*");
    }
    prof = shoot(p, cfg).profile;
    p.gamma = prof.params.gamma;
  }
  const SelfSimilarFrame frame = make_frame(prof);
  const double p_inv = invariant_exponent(p.n, p.k, p.q);
  std::vector<double> ps = o.ps.empty() ? std::vector<double>{1.0, 2.0} : o.ps;
  if (p_inv >= 1.0 && std::find(ps.begin(), ps.end(), p_inv) == ps.end()) ps.push_back(p_inv);
  const std::vector<double> times = o.times.empty() ? std::vector<double>{1, 2, 4, 8} : o.times;

  ordered_json j;
  j["params"] = to_json(p);
  j["exponents"] = {{"alpha0", frame.exps.alpha0},
                    {"beta0", frame.exps.beta0},
                    {"kappa0", frame.exps.kappa0},
                    {"invariant_p", p_inv}};
  j["termination"] = to_string(prof.termination);
  j["support_edge"] = frame.support_edge ? ordered_json(*frame.support_edge) : ordered_json(nullptr);
  j["L"] = frame.L;
  ordered_json norms = ordered_json::array();
  for (double pp : ps) {
    ordered_json row{{"p", pp}};
    try {
      const ScalingMeasurement m = measure_scaling_exponent(frame, pp, times);
      row["times"] = m.times;
      row["norms"] = m.norms;
      row["measured_exponent"] = m.measured;
      row["predicted_exponent"] = m.predicted;
    } catch (const DivergenceError& e) {
      row["divergent"] = true;
      row["message"] = e.what();
    }
    norms.push_back(row);
  }
  j["norms"] = norms;
  if (o.epsilon) {
    if (frame.support_edge) {
      const SmallTimeReport st = small_time_limits(frame, *o.epsilon);
      j["small_time"] = {{"epsilon", st.epsilon},
                         {"t_epsilon", st.t_epsilon},
                         {"sup_at_t_epsilon", st.sup_at_t_epsilon},
                         {"sup_at_unit_time", st.sup_at_unit_time},
                         {"support_radius_at_unit_time", st.support_radius_at_unit_time},
                         {"p", st.p},
                         {"times", st.times},
                         {"norms", st.norms},
                         {"norms_decreasing", st.norms_decreasing}};
    } else {
      ordered_json lim = ordered_json::array();
      for (double t : {1e-2, 1e-4, 1e-6}) {
        try {
          lim.push_back({{"t", t}, {"u", eval_u(frame, t, *o.epsilon)}});
        } catch (const DomainError&) {
          break;
        }
      }
      j["small_time"] = {{"epsilon", *o.epsilon},
                         {"limit", std::pow(*o.epsilon, -frame.params.kappa) * frame.L},
                         {"samples", lim}};
    }
  }
  if (p.q > 1.0 && p.q < critical_exponents(p.n, p.k).q_c) {
    const SingularityComparison sc = singularity_comparison(p.n, p.k, p.q);
    j["singularity"] = {{"profile_rate", sc.profile_rate},
                        {"barenblatt_rate", sc.barenblatt_rate}};
  }
  const IntegratorConfig resolved = resolve(cfg, p);
  emit(o, json_text(j), run_record(o, &p, &resolved));
  return 0;
}

int cmd_table1(const Options& o) {
  const int n = need(o.n, "--n");
  const int k = o.k.value_or(1);
  if (o.qs.empty()) throw UsageError("--qs is required");
  const IntegratorConfig cfg = config_from(o);
  std::ostringstream os;
  os << "q,regime,kappa0,expected,observed,crossing,slow,fast,gamma_star,match\n";
  for (double q : o.qs) {
    const TypeIExponents e = type1_exponents(n, k, q);
    const Params p{n, k, q, e.kappa0, 1.0};
    validate(p);
    const RegimeTag tag = regime(n, k, q);
    std::vector<double> grid =
        o.gammas.empty() ? std::vector<double>{0.5, 1.0, 2.0, 5.0, 10.0} : o.gammas;
    if (e.kappa0 < n) {
      const double lo = gamma_lower_bound(p);
      grid.push_back(0.5 * lo);
      grid.push_back(10.0 * lo);
    }
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    SweepConfig scfg;
    scfg.jobs = o.jobs;
    const std::vector<SweepRow> rows = sweep(p, grid, cfg, scfg);
    std::size_t crossing = 0, slow = 0, fast = 0;
    for (const SweepRow& r : rows) {
      if (r.kind == "error") throw NumericalError("gamma=" + format_double(r.gamma) + ": " + r.error);
      crossing += r.kind == "crossing";
      slow += r.kind == "slow";
      fast += r.kind == "fast";
    }
    std::string observed = "mixed";
    std::optional<double> gamma_star;
    if (crossing + fast == rows.size() && slow == 0) {
      observed = "crossing-only";
    } else if (slow == rows.size()) {
      bool zero_free = true;
      for (const SweepRow& r : rows) zero_free = zero_free && r.zero_count == 0;
      observed = zero_free ? "slow-only" : "mixed";
    } else if (shooting_applies(p)) {
      const ShootResult s = shoot(p, cfg);
      if (s.result.kind == ProfileKind::Fast) {
        gamma_star = s.gamma_star;
        observed = "mixed-with-fast";
      }
    }
    const std::string expected = tag == RegimeTag::Subcritical    ? "crossing-only"
                                 : tag == RegimeTag::Intermediate ? "mixed-with-fast"
                                                                  : "slow-only";
    os << format_double(q) << ',' << to_string(tag) << ',' << format_double(e.kappa0) << ','
       << expected << ',' << observed << ',' << crossing << ',' << slow << ',' << fast << ','
       << (gamma_star ? format_double(*gamma_star) : std::string()) << ','
       << (expected == observed ? "yes" : "no") << '\n';
  }
  ordered_json run = run_record(o, nullptr, nullptr);
  run["integrator"] = to_json(cfg);
  emit(o, os.str(), run);
  return 0;
}

}  // namespace khess::cli
