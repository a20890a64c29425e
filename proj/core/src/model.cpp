#include "khess/model.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "khess/errors.hpp"

namespace khess {

namespace {

void check_nk(int n, int k) {
  if (n <= 2) {
    throw ParameterDomainError("n must be > 2 (got " + std::to_string(n) + ")");
  }
  if (k < 1 || k > n) {
    throw ParameterDomainError("k must satisfy 1 <= k <= n (got k=" + std::to_string(k) +
                               ", n=" + std::to_string(n) + ")");
  }
}

}  // namespace

void validate(const Params& p) {
  check_nk(p.n, p.k);
  if (p.k % 2 == 0) {
    throw ParameterDomainError("k must be odd (got " + std::to_string(p.k) + ")");
  }
  if (!std::isfinite(p.q) || !(p.q > p.k)) {
    throw ParameterDomainError("q must be finite and > k");
  }
  if (!std::isfinite(p.kappa)) {
    throw ParameterDomainError("kappa must be finite");
  }
  if (!std::isfinite(p.gamma) || p.gamma < 0.0) {
    throw ParameterDomainError("gamma must be finite and >= 0; normalize negative heights first");
  }
}

Params make_params(int n, int k, double q, double kappa, double gamma) {
  Params p{n, k, q, kappa, gamma};
  validate(p);
  return p;
}

SignedHeight normalize_gamma(double gamma) {
  if (!std::isfinite(gamma)) {
    throw ParameterDomainError("gamma must be finite");
  }
  return gamma < 0.0 ? SignedHeight{-gamma, -1} : SignedHeight{gamma, 1};
}

std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) {
    throw ParameterDomainError("binomial: k out of range");
  }
  k = std::min(k, n - k);
  std::uint64_t result = 1;
  for (int i = 1; i <= k; ++i) {
    // result * (n - k + i) / i is exact at every step; reduce first to delay overflow.
    std::uint64_t num = static_cast<std::uint64_t>(n - k + i);
    std::uint64_t den = static_cast<std::uint64_t>(i);
    const std::uint64_t g = std::gcd(result, den);
    result /= g;
    den /= g;
    num /= den;
    if (result > std::numeric_limits<std::uint64_t>::max() / num) {
      throw ParameterDomainError("binomial coefficient overflows 64 bits");
    }
    result *= num;
  }
  return result;
}

DerivedConstants derive_constants(int n, int k, double kappa) {
  check_nk(n, k);
  DerivedConstants c;
  c.c_nk = static_cast<double>(binomial(n, k)) / n;
  c.b = 2.0 * k / (k + 1.0);
  c.a = (k + 1.0) / (2.0 * k);
  c.delta = (n * (k + 1.0) - 2.0 * k) / (2.0 * k);
  c.n_tilde = n * (k + 1.0) / (2.0 * k);
  c.eta = c.delta / k - 1.0;
  c.kappa_tilde = kappa / c.b;
  return c;
}

DerivedConstants derive_constants(const Params& p) { return derive_constants(p.n, p.k, p.kappa); }

double TsoExponent::value() const {
  if (infinite_) {
    throw DomainError("q* is infinite for n <= 2k");
  }
  return value_;
}

double TsoExponent::as_double() const {
  return infinite_ ? std::numeric_limits<double>::infinity() : value_;
}

CriticalExponents critical_exponents(int n, int k) {
  check_nk(n, k);
  CriticalExponents e;
  e.q_c = (n + 2.0) * k / n;
  e.q_star = (2 * k < n) ? TsoExponent::finite((n + 2.0) * k / (n - 2.0 * k))
                         : TsoExponent::infinite();
  return e;
}

TypeIExponents type1_exponents(int n, int k, double q) {
  check_nk(n, k);
  if (!(q > k)) {
    throw ParameterDomainError("type-I exponents need q > k");
  }
  TypeIExponents e;
  e.alpha0 = 1.0 / (q - 1.0);
  e.beta0 = (q - k) / (2.0 * k * (q - 1.0));
  e.kappa0 = 2.0 * k / (q - k);
  e.epsilon = static_cast<double>(binomial(n, k)) / n / e.beta0;
  return e;
}

RegimeTag regime(int n, int k, double q) {
  const CriticalExponents e = critical_exponents(n, k);
  if (q <= e.q_c) return RegimeTag::Subcritical;
  if (e.q_star.at_or_below(q)) return RegimeTag::Supercritical;
  return RegimeTag::Intermediate;
}

std::string_view to_string(RegimeTag tag) {
  switch (tag) {
    case RegimeTag::Subcritical:
      return "subcritical";
    case RegimeTag::Intermediate:
      return "intermediate";
    case RegimeTag::Supercritical:
      return "supercritical";
  }
  return "unknown";
}

double r_to_s(const DerivedConstants& c, double r) {
  if (!(r >= 0.0)) throw DomainError("r_to_s: r must be >= 0");
  if (c.b == 1.0) return r;
  return c.a * std::pow(r, c.b);
}

double s_to_r(const DerivedConstants& c, double s) {
  if (!(s >= 0.0)) throw DomainError("s_to_r: s must be >= 0");
  if (c.b == 1.0) return s;
  return std::pow(c.b * s, 1.0 / c.b);
}

double gamma_lower_bound(const Params& p) {
  if (!(p.kappa < p.n)) {
    throw RegimeError("gamma lower bound needs kappa < n");
  }
  const DerivedConstants c = derive_constants(p);
  return std::pow(c.c_nk * (p.n - p.kappa), 1.0 / (p.q - 1.0));
}

}  // namespace khess
