#include "report.hpp"

#include <cmath>

namespace khess::cli {

ordered_json number(double x) { return std::isfinite(x) ? ordered_json(x) : ordered_json(nullptr); }

ordered_json to_json(const Params& p) {
  return {{"n", p.n}, {"k", p.k}, {"q", p.q}, {"kappa", p.kappa}, {"gamma", p.gamma}};
}

ordered_json to_json(const IntegratorConfig& cfg) {
  return {{"rel_tol", cfg.rel_tol},
          {"abs_tol", cfg.abs_tol},
          {"s0", cfg.s0},
          {"s_max", cfg.s_max},
          {"max_steps", cfg.max_steps},
          {"source", cfg.source == SourceMode::WithSource ? "with_source" : "source_free"},
          {"c_support", cfg.c_support},
          {"event_tol", cfg.event_tol},
          {"stiff_ratio", cfg.stiff_ratio}};
}

ordered_json to_json(const ClassificationResult& r, const Params& p, int sign) {
  Params shown = p;
  shown.gamma = sign * r.gamma;
  const auto& d = r.diagnostics;
  ordered_json j;
  j["kind"] = to_string(r.kind);
  j["gamma"] = sign * r.gamma;
  j["L"] = number(sign * r.L_estimate);
  j["L_uncertainty"] = number(r.L_uncertainty);
  j["zero_count"] = r.zero_count;
  j["zeros"] = r.zeros;
  j["support_edge"] = r.support_edge ? ordered_json(*r.support_edge) : ordered_json(nullptr);
  j["params"] = to_json(shown);
  j["diagnostics"] = {{"termination", to_string(d.termination)},
                      {"threshold", d.threshold},
                      {"inconclusive", d.inconclusive},
                      {"sign_changing_fast", d.sign_changing_fast},
                      {"zero_beyond_horizon", d.zero_beyond_horizon},
                      {"s_end", d.s_end},
                      {"steps", d.steps},
                      {"note", d.note}};
  return j;
}

ordered_json to_json(const Bracket& b) {
  ordered_json hist = ordered_json::array();
  for (const BracketStep& st : b.history) {
    hist.push_back({{"gamma", st.gamma},
                    {"side", to_string(st.side)},
                    {"kind", st.kind},
                    {"L", number(st.L)},
                    {"zero_count", st.zero_count}});
  }
  return {{"gamma_lo", b.gamma_lo}, {"gamma_hi", b.gamma_hi}, {"L_lo", b.L_lo}, {"history", hist}};
}

ordered_json to_json(const ShootResult& s) {
  ordered_json j;
  j["gamma_star"] = s.gamma_star;
  j["kind"] = to_string(s.result.kind);
  j["support_edge"] =
      s.result.support_edge ? ordered_json(*s.result.support_edge) : ordered_json(nullptr);
  j["classification"] = to_json(s.result, s.profile.params);
  j["bracket"] = to_json(s.bracket);
  return j;
}

}  // namespace khess::cli
