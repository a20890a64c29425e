#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "khess/analysis.hpp"
#include "khess/integrator.hpp"

namespace khess {

/// Which side of the fast-decay height a trial landed on.
enum class BracketSide { Low, High, Target };
const char* to_string(BracketSide side);

struct BracketStep {
  double gamma = 0.0;
  BracketSide side = BracketSide::Low;
  std::string kind;  ///< classification, or "failed"
  double L = 0.0;
  std::size_t zero_count = 0;
};

/// gamma_lo: certified positive with L > 0; gamma_hi: certified to have an
/// isolated zero.
struct Bracket {
  double gamma_lo = 0.0;
  double gamma_hi = 0.0;
  /// L(gamma_lo), the scale of the fast-decay threshold.
  double L_lo = 0.0;
  std::vector<BracketStep> history;
};

struct ShootingConfig {
  /// Relative bracket width at which bisection stops (k = 1).
  double tol_gamma = 1e-8;
  /// gamma_hi search stops at 2^max_doublings * gamma_lo.
  int max_doublings = 40;
  int max_iterations = 200;
};

/// Requires kappa < n and k < q < q*(k) (RegimeError otherwise).
/// gamma_lo is the positivity bound, gamma_hi the first doubling with a zero.
Bracket initial_bracket(const Params& p, const IntegratorConfig& cfg = {},
                        const ShootingConfig& scfg = {});

struct ShootResult {
  double gamma_star = 0.0;
  ProfileSolution profile;
  ClassificationResult result;
  Bracket bracket;
};

/// Bisection on the shooting height: trials with a zero move gamma_hi, the
/// others move gamma_lo. For k > 1 it continues past tol_gamma until the
/// trial profile collapses onto a compact support (or the bracket cannot be
/// split further). The returned profile is the best Fast candidate found.
ShootResult find_fast_gamma(const Params& p, const IntegratorConfig& cfg, Bracket bracket,
                            const ShootingConfig& scfg = {});

/// initial_bracket followed by find_fast_gamma.
ShootResult shoot(const Params& p, const IntegratorConfig& cfg = {},
                  const ShootingConfig& scfg = {});

struct SweepRow {
  double gamma = 0.0;
  std::string kind;  ///< crossing / slow / fast, or "error"
  double L = 0.0;
  double L_uncertainty = 0.0;
  std::size_t zero_count = 0;
  std::optional<double> first_zero;    ///< physical radius
  std::optional<double> support_edge;  ///< physical radius
  bool inconclusive = false;
  bool collapsed = false;
  std::string error;
};

struct SweepConfig {
  /// Worker threads; 0 uses the hardware concurrency.
  unsigned jobs = 1;
  /// Fast threshold scale; by default the largest |L| found in the sweep.
  std::optional<double> threshold_scale;
};

/// One classification per grid point (grid nonempty and strictly increasing,
/// otherwise ParameterDomainError). Per-row failures are recorded in-row.
std::vector<SweepRow> sweep(const Params& tmpl, const std::vector<double>& gammas,
                            const IntegratorConfig& cfg = {}, const SweepConfig& scfg = {});

/// CSV with header gamma,kind,L,L_uncertainty,zero_count,first_zero,support_edge.
void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows);

}  // namespace khess
