// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <deque>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "fd.hpp"
#include "khess/analysis.hpp"
#include "khess/closedform.hpp"
#include "khess/functionals.hpp"
#include "khess/selfsimilar.hpp"
#include "khess/shooting.hpp"

using namespace khess;
using khess::testing::probe_points;
using khess::testing::relative_rms;
using khess::testing::richardson_derivative;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

// Every profile produced by criteria 1-5, re-examined by criterion 6.
std::deque<ProfileSolution> g_profiles;

const ProfileSolution& keep(ProfileSolution prof) {
  g_profiles.push_back(std::move(prof));
  return g_profiles.back();
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void exact_solution(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  const ExactProfileK1 ex = exact_profile_k1(5, 3.0);
  const Params p{5, 1, 3.0, 2.0, 2.0 * std::sqrt(2.0)};
  const ProfileSolution& prof = keep(integrate(p));
  double err = 0.0;
  for (int i = 0; i <= 20000; ++i) {
    const double r = 20.0 * i / 20000.0;
    err = std::max(err, std::abs(prof.v_at_radius(r) - ex.v(r)));
  }
  const LEstimate L = estimate_L(prof);
  const double secs = seconds_since(t0);
  o.detail << "sup error " << err << ", L " << L.L << " (exact " << ex.L() << "), " << secs << " s";
  o.require(err <= 1e-6, "sup error <= 1e-6");
  o.require(std::abs(L.L - ex.L()) <= 1e-3, "|L - 2 sqrt 2| <= 1e-3");
  o.require(secs < 1.0, "runtime < 1 s");
}

void closed_form_residuals(Outcome& o) {
  auto radii = [](double lo, double hi) {
    std::vector<double> r;
    for (int i = 0; i < 50; ++i) r.push_back(lo * std::pow(hi / lo, i / 49.0));
    return r;
  };
  double worst = 0.0;
  for (auto [n, q] : {std::pair{5, 3.0}, std::pair{4, 5.0}}) {
    const ExactProfileK1 ex = exact_profile_k1(n, q);
    for (double r : radii(1e-3, 50.0)) {
      worst = std::max(worst, std::abs(residual_r_form(ex.params(), r, ex.v(r), ex.v_prime(r),
                                                       ex.v_second(r))));
    }
  }
  o.detail << "exact-k1 " << worst;
  const BarenblattProfile bp = barenblatt_profile(7, 3, 1.0);
  double wb = 0.0;
  for (double rho : radii(1e-3, 0.999 * bp.support_edge())) wb = std::max(wb, std::abs(bp.residual(rho)));
  const TsoCriticalProfile tp = tso_profile(7, 3, 1.0);
  double wt = 0.0;
  for (double r : radii(1e-3, 1e3)) wt = std::max(wt, std::abs(tp.residual(r)));
  o.detail << ", Barenblatt " << wb << ", Tso " << wt;
  o.require(worst <= 1e-10, "exact-k1 residual <= 1e-10");
  o.require(wb <= 1e-10, "Barenblatt residual <= 1e-10");
  o.require(wt <= 1e-10, "Tso residual <= 1e-10");
}

void barenblatt_end_to_end(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  const BarenblattProfile bp = barenblatt_profile(7, 3, 1.0);
  IntegratorConfig cfg;
  cfg.source = SourceMode::SourceFree;
  const ProfileSolution& prof = keep(integrate(bp.params(), cfg));
  const double edge = bp.v_support_edge();
  double err = 0.0;
  for (int i = 0; i <= 20000; ++i) {
    const double r = 0.99 * edge * i / 20000.0;
    err = std::max(err, std::abs(prof.v_at_radius(r) - bp.v(r)));
  }
  double beyond = 0.0;
  const double r_end = prof.radius_of(prof.s_end());
  for (int i = 1; i <= 200; ++i) {
    const double r = edge + (r_end - edge) * i / 200.0;
    beyond = std::max(beyond, std::abs(prof.v_at_radius(r)));
  }
  const double secs = seconds_since(t0);
  o.detail << "sup error " << err << " up to 0.99 edge, max |v| beyond edge " << beyond << ", "
           << secs << " s";
  o.require(prof.support_edge.has_value(), "support edge detected");
  o.require(err <= 1e-5, "sup error <= 1e-5");
  o.require(beyond == 0.0, "clamped to zero beyond the edge");
  o.require(secs < 5.0, "runtime < 5 s");
}

void table_one(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  auto run = [&](double q, double g) {
    const Params p{3, 1, q, type1_exponents(3, 1, q).kappa0, g};
    const ProfileSolution& prof = keep(integrate(p));
    return classify_profile(prof);
  };
  bool sub = true;
  for (double g : {0.5, 1.0, 2.0, 5.0}) sub = sub && run(1.5, g).kind == ProfileKind::Crossing;
  o.require(sub, "q = 1.5 crossing for every gamma");

  const Params mid{3, 1, 3.0, 1.0, 1.0};
  const double lo = gamma_lower_bound(mid);
  const ClassificationResult low = run(3.0, 0.5 * lo);
  const ClassificationResult high = run(3.0, 10.0 * lo);
  o.require(low.kind == ProfileKind::Slow, "q = 3 slow at gamma_lower / 2");
  o.require(high.kind == ProfileKind::Crossing, "q = 3 crossing at 10 gamma_lower");
  const ShootResult shot = shoot(mid);
  keep(shot.profile);
  const double ratio = std::abs(shot.result.L_estimate) / low.L_estimate;
  o.require(ratio <= 1e-3, "|L(gamma*)| <= 1e-3 L(gamma_lower / 2)");

  bool super = true;
  for (double g : {0.5, 1.0, 2.0, 5.0, 10.0}) {
    const ClassificationResult r = run(6.0, g);
    super = super && r.kind == ProfileKind::Slow && r.zero_count == 0;
  }
  o.require(super, "q = 6 slow without zeros for every gamma");
  const double secs = seconds_since(t0);
  o.detail << "gamma* " << shot.gamma_star << ", |L(gamma*)|/L(gamma_lower/2) " << ratio << ", "
           << secs << " s";
  o.require(secs < 30.0, "runtime < 30 s");
}

void compact_support(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  const ShootResult shot = shoot({7, 3, 6.0, 2.0, 1.0});
  const ProfileSolution& prof = keep(shot.profile);
  o.require(shot.result.kind == ProfileKind::Fast, "fast verdict");
  o.require(shot.result.support_edge.has_value(), "finite support edge");
  double beyond = 0.0;
  if (prof.support_edge) {
    for (const Sample& s : prof.samples) {
      if (s.s > *prof.support_edge) beyond = std::max({beyond, std::abs(s.theta), std::abs(s.theta_prime)});
    }
    for (int i = 1; i <= 200; ++i) {
      const double s = *prof.support_edge + (prof.s_end() - *prof.support_edge) * i / 200.0;
      const Sample a = prof.at(s);
      beyond = std::max({beyond, std::abs(a.theta), std::abs(a.theta_prime)});
    }
  }
  const double secs = seconds_since(t0);
  o.detail << "gamma* " << shot.gamma_star << ", edge r = "
           << (shot.result.support_edge ? *shot.result.support_edge : NAN)
           << ", max state beyond edge " << beyond << ", " << secs << " s";
  o.require(beyond < 1e-9, "|theta|, |theta'| < 1e-9 beyond the edge");
  o.require(secs < 60.0, "runtime < 60 s");
}

void energy_and_bounds(Outcome& o) {
  std::size_t bad = 0;
  double worst_increase = 0.0;
  double worst_theta = -INFINITY;
  for (const ProfileSolution& prof : g_profiles) {
    const AprioriReport rep = check_apriori_bounds(prof);
    worst_increase = std::max(worst_increase, rep.max_energy_increase / rep.energy_tolerance);
    worst_theta = std::max(worst_theta, rep.max_abs_theta - prof.params.gamma);
    const bool ok = rep.max_energy_increase <= rep.energy_tolerance &&
                    rep.max_abs_theta <= prof.params.gamma + 1e-8 && rep.theta_prime_slack >= 0.0;
    if (!ok) ++bad;
  }
  o.detail << g_profiles.size() << " profiles, worst energy increase / tolerance " << worst_increase
           << ", worst max|theta| - gamma " << worst_theta;
  o.require(!g_profiles.empty(), "profiles from criteria 1-5");
  o.require(bad == 0, "energy monotone and a-priori bounds on every profile");
}

void transform_equivalence(Outcome& o) {
  double worst = 0.0;
  for (const Params& p : {Params{3, 1, 3.0, 1.0, 1.0}, Params{3, 1, 2.0, 2.0, 5.0},
                          Params{7, 3, 6.0, 2.0, 1.0}, Params{7, 3, 6.0, 2.0, 4.0}}) {
    IntegratorConfig cfg;
    const ProfileSolution s = integrate(p, cfg);
    const ProfileSolution r = integrate_r_form(p, cfg);
    const double r_end = std::min(r.s_end(), s.radius_of(s.s_end()));
    double err = 0.0;
    for (int i = 0; i <= 5000; ++i) {
      const double rr = r_end * i / 5000.0;
      err = std::max(err, std::abs(r.v_at_radius(rr) - s.v_at_radius(rr)));
    }
    worst = std::max(worst, err / cfg.rel_tol);
  }
  const DerivedConstants c1 = derive_constants(3, 1, 1.0);
  bool identity = c1.a == 1.0 && c1.b == 1.0;
  for (double r : {1e-6, 0.5, 7.0, 1e3}) identity = identity && r_to_s(c1, r) == r;
  o.detail << "worst sup difference / rel_tol " << worst;
  o.require(worst <= 10.0, "agreement within 10 rel_tol");
  o.require(identity, "k = 1 transform is the identity");
}

void functional_identities(Outcome& o) {
  double worst = 0.0;
  for (const Params& p : {Params{3, 1, 3.0, 1.0, 1.0}, Params{3, 1, 2.0, 2.0, 10.0},
                          Params{7, 3, 6.0, 2.0, 1.0}, Params{7, 3, 6.0, 2.0, 10.0}}) {
    const ProfileSolution prof = integrate(p);
    const DerivedConstants& c = prof.constants;
    const std::vector<double> pts = probe_points(prof, 300);
    auto check_s = [&](const std::function<double(double)>& f,
                       const std::function<double(double)>& g) {
      std::vector<double> fd, ex;
      for (double s : pts) {
        fd.push_back(richardson_derivative(f, s, 1e-5 * s));
        ex.push_back(g(s));
      }
      worst = std::max(worst, relative_rms(fd, ex));
    };
    const double sigma = (p.n - 2.0 * p.k) / (2.0 * p.k);
    for (const PohozaevParams& pp :
         {PohozaevParams{0.0, 0.0, p.kappa}, PohozaevParams{c.delta + 1.0, sigma, c.b * sigma + p.kappa - p.n},
          PohozaevParams{1.3, -0.4, 0.8}}) {
      check_s(
          [&](double s) {
            const Sample a = prof.at(s);
            return pohozaev(p, c, pp, s, a.theta, a.theta_prime);
          },
          [&](double s) {
            const Sample a = prof.at(s);
            return pohozaev_derivative(p, c, pp, s, a.theta, a.theta_prime);
          });
    }
    check_s(
        [&](double s) {
          const Sample a = prof.at(s);
          return j_delta(p, c, s, a.theta, a.theta_prime);
        },
        [&](double s) { return j_delta_derivative(p, c, s, prof.at(s).theta); });
    std::vector<double> fdn, exn, fdk, exk;
    for (double s : pts) {
      const double r = prof.radius_of(s);
      auto jn = [&](double x) { return j_n(p, x, prof.v_at_radius(x), prof.v_prime_at_radius(x)); };
      auto jk = [&](double x) {
        return j_kappa(p, x, prof.v_at_radius(x), prof.v_prime_at_radius(x));
      };
      fdn.push_back(richardson_derivative(jn, r, 1e-5 * r));
      exn.push_back(j_n_derivative(p, r, prof.v_at_radius(r)));
      fdk.push_back(richardson_derivative(jk, r, 1e-5 * r));
      exk.push_back(j_kappa_derivative(p, r, prof.v_at_radius(r), prof.v_prime_at_radius(r)));
    }
    worst = std::max({worst, relative_rms(fdn, exn), relative_rms(fdk, exk)});
  }
  o.detail << "worst relative RMS " << worst;
  o.require(worst <= 1e-6, "finite differences within 1e-6 relative RMS");
}

void asymptotics(Outcome& o) {
  const ExactProfileK1 ex = exact_profile_k1(5, 3.0);
  const ProfileSolution prof = integrate(ex.params());
  const double L = estimate_L(prof).L;
  const AsymptoticExpansion e = asymptotic_coefficients(prof.params, ex.L());
  const TailFit fit = fit_tail(prof, L);
  const double predicted = -2.0 * std::sqrt(2.0);
  std::vector<double> r, g;
  for (int i = 0; i <= 100; ++i) {
    r.push_back(std::pow(10.0, 1.0 + i / 100.0));
    g.push_back(0.731 * std::pow(r.back(), -e.nu));
  }
  const TailFit synth = fit_power_tail(r, g, e.nu);
  o.detail << "fitted " << fit.coefficient << " vs predicted " << e.correction_coefficient
           << ", synthetic " << synth.coefficient;
  o.require(std::abs(e.correction_coefficient - predicted) < 1e-12, "prediction equals -2 sqrt 2");
  o.require(std::abs(fit.coefficient - predicted) <= 0.1 * std::abs(predicted), "fit within 10%");
  o.require(std::abs(synth.coefficient - 0.731) <= 1e-6 * 0.731, "synthetic fit to 1e-6");
}

void self_similar_scaling(Outcome& o) {
  const ShootResult shot = shoot({7, 3, 6.0, 2.0, 1.0});
  const SelfSimilarFrame fast = make_frame(shot.profile);
  const SelfSimilarFrame slow = make_frame(integrate({3, 1, 6.0, 0.4, 1.0}));
  double worst = 0.0;
  for (double p : {1.0, 2.0, 5.0}) {
    const ScalingMeasurement m = measure_scaling_exponent(fast, p);
    worst = std::max(worst, std::abs(m.measured - m.predicted));
  }
  for (double p : {8.0, 12.0}) {
    const ScalingMeasurement m = measure_scaling_exponent(slow, p);
    worst = std::max(worst, std::abs(m.measured - m.predicted));
  }
  const double p_inv = invariant_exponent(7, 3, 6.0);
  const ScalingMeasurement inv = measure_scaling_exponent(fast, p_inv);
  double group = 0.0;
  for (const SelfSimilarFrame* f : {&fast, &slow}) {
    const int k = f->params.k;
    const double q = f->params.q;
    for (double lam : {0.6, 1.5, 2.5}) {
      for (double x : {0.0, 0.3, 1.2}) {
        const double t = 0.9;
        const double lhs = eval_u(*f, std::pow(lam, 2.0 * k * (q - 1) / (q - k)) * t, lam * x) *
                           std::pow(lam, 2.0 * k / (q - k));
        const double rhs = eval_u(*f, t, x);
        group = std::max(group, std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
      }
    }
  }
  o.detail << "worst exponent error " << worst << ", exponent at p = " << p_inv << ": "
           << inv.measured << ", scaling-group mismatch " << group;
  o.require(worst <= 1e-3, "measured exponents within 1e-3");
  o.require(std::abs(inv.measured) <= 1e-3, "zero exponent at the invariant p");
  o.require(group <= 1e-10, "scaling-group self-consistency");
}

void zero_structure(Outcome& o) {
  std::size_t min_zeros = SIZE_MAX;
  for (const Params& p : {Params{3, 1, 1.5, 4.0, 1.0}, Params{3, 1, 3.0, 3.0, 1.0},
                          Params{7, 3, 3.5, 7.0, 1.0}}) {
    for (double g : {0.1, 0.5, 1.0, 2.0, 5.0, 10.0}) {
      Params q = p;
      q.gamma = g;
      min_zeros = std::min(min_zeros, count_zeros(integrate(q)).count);
    }
  }
  std::size_t max_pos = 0;
  for (const Params& base : {Params{3, 1, 3.0, 1.0, 1.0}, Params{3, 1, 2.0, 2.0, 1.0},
                             Params{7, 3, 6.0, 2.0, 1.0}, Params{3, 1, 6.0, 0.4, 1.0}}) {
    const double lo = gamma_lower_bound(base);
    for (double f : {0.05, 0.3, 0.7, 1.0}) {
      Params q = base;
      q.gamma = f * lo;
      max_pos = std::max(max_pos, count_zeros(integrate(q)).count);
    }
  }
  bool monotone = true;
  for (const auto& [base, grid] :
       {std::pair{Params{3, 1, 2.0, 2.0, 1.0}, std::vector<double>{5, 10, 20, 40, 80}},
        std::pair{Params{7, 3, 6.0, 2.0, 1.0}, std::vector<double>{8, 16, 32, 64}}}) {
    double prev = INFINITY;
    std::size_t seen = 0;
    for (double g : grid) {
      Params q = base;
      q.gamma = g;
      const ZeroCount z = count_zeros(integrate(q));
      if (z.count == 0) continue;
      ++seen;
      monotone = monotone && z.r.front() <= prev;
      prev = z.r.front();
    }
    monotone = monotone && seen >= 2;
  }
  o.detail << "min zeros with kappa >= n: " << min_zeros << ", max zeros below gamma_lower: " << max_pos;
  o.require(min_zeros >= 1, "kappa >= n forces a zero");
  o.require(max_pos == 0, "no zeros for gamma <= gamma_lower");
  o.require(monotone, "first zero nonincreasing in gamma");
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    void (*run)(Outcome&);
  };
  const Criterion criteria[] = {
      {"exact-solution reproduction", exact_solution},
      {"closed-form residuals", closed_form_residuals},
      {"Barenblatt end-to-end", barenblatt_end_to_end},
      {"classification table at kappa0", table_one},
      {"compact support for k > 1", compact_support},
      {"energy monotonicity and a-priori bounds", energy_and_bounds},
      {"transform equivalence", transform_equivalence},
      {"Pohozaev and J identities", functional_identities},
      {"second-order asymptotics", asymptotics},
      {"self-similar scaling", self_similar_scaling},
      {"zero structure", zero_structure},
  };
  int failures = 0;
  int index = 0;
  for (const Criterion& c : criteria) {
    ++index;
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.run(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " [exception: " << e.what() << "]";
    }
    const double secs = seconds_since(t0);
    std::printf("%s %2d %-42s %7.2fs  %s\n", o.pass ? "PASS" : "FAIL", index, c.name, secs,
                o.detail.str().c_str());
    std::fflush(stdout);
    failures += o.pass ? 0 : 1;
  }
  std::printf("%d/%d criteria passed\n", index - failures, index);
  return failures == 0 ? 0 : 1;
}
