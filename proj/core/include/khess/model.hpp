#pragma once

#include <cstdint>
#include <string_view>

namespace khess {

/// The problem quintuple. gamma is the shooting height v(0); it is stored
/// nonnegative (odd k makes the equation symmetric under v -> -v, see
/// normalize_gamma). gamma == 0 denotes the trivial solution.
struct Params {
  int n = 3;
  int k = 1;
  double q = 3.0;
  double kappa = 1.0;
  double gamma = 1.0;
};

/// Throws ParameterDomainError unless n > 2, 1 <= k <= n, k odd, q > k,
/// kappa finite and gamma >= 0.
void validate(const Params& p);

/// Validating constructor.
Params make_params(int n, int k, double q, double kappa, double gamma);

/// A shooting height split into magnitude and sign. Solutions for negative
/// heights are the reflections of the positive ones.
struct SignedHeight {
  double gamma = 0.0;
  int sign = 1;
};
SignedHeight normalize_gamma(double gamma);

struct DerivedConstants {
  double c_nk = 0.0;         ///< binom(n,k) / n
  double b = 0.0;            ///< 2k / (k+1)
  double a = 0.0;            ///< 1 / b
  double delta = 0.0;        ///< (n(k+1) - 2k) / (2k)
  double n_tilde = 0.0;      ///< delta + 1 = n(k+1) / (2k)
  double eta = 0.0;          ///< delta / k - 1
  double kappa_tilde = 0.0;  ///< kappa / b
};

/// Exact binomial coefficient; throws ParameterDomainError on overflow.
std::uint64_t binomial(int n, int k);

DerivedConstants derive_constants(const Params& p);
DerivedConstants derive_constants(int n, int k, double kappa);

/// Tso exponent q*(k): finite when 2k < n, otherwise +infinity. Kept as a
/// distinct state so regime comparisons never go through a float sentinel.
class TsoExponent {
 public:
  static TsoExponent finite(double v) { return TsoExponent(false, v); }
  static TsoExponent infinite() { return TsoExponent(true, 0.0); }

  bool is_infinite() const { return infinite_; }
  /// Throws DomainError when infinite.
  double value() const;
  /// +inf when infinite; only for printing.
  double as_double() const;
  /// q >= q*; always false when q* is infinite.
  bool at_or_below(double q) const { return !infinite_ && value_ <= q; }
  /// q < q*.
  bool above(double q) const { return infinite_ || q < value_; }

 private:
  TsoExponent(bool inf, double v) : infinite_(inf), value_(v) {}
  bool infinite_;
  double value_;
};

struct CriticalExponents {
  double q_c = 0.0;
  TsoExponent q_star = TsoExponent::infinite();
};

CriticalExponents critical_exponents(int n, int k);

/// Type-I self-similar exponents attached to q.
struct TypeIExponents {
  double alpha0 = 0.0;   ///< 1/(q-1)
  double beta0 = 0.0;    ///< (q-k) / (2k(q-1))
  double kappa0 = 0.0;   ///< alpha0 / beta0 = 2k/(q-k)
  double epsilon = 0.0;  ///< c_nk / beta0
};

TypeIExponents type1_exponents(int n, int k, double q);

enum class RegimeTag { Subcritical, Intermediate, Supercritical };

/// Subcritical: q <= q_c; Intermediate: q_c < q < q*; Supercritical: q >= q*.
RegimeTag regime(int n, int k, double q);
std::string_view to_string(RegimeTag tag);

/// s = a r^b and its inverse. Negative input throws DomainError.
double r_to_s(const DerivedConstants& c, double r);
double s_to_r(const DerivedConstants& c, double s);

/// Height below which every profile stays positive when kappa < n:
/// (c_nk (n - kappa))^{1/(q-1)}. Throws RegimeError when kappa >= n.
double gamma_lower_bound(const Params& p);

}  // namespace khess
