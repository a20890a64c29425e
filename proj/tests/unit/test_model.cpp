#include <doctest.h>

#include <cmath>

#include "khess/errors.hpp"
#include "khess/model.hpp"

using namespace khess;

TEST_SUITE("model") {
  TEST_CASE("binomial coefficients are exact") {
    CHECK(binomial(3, 1) == 3);
    CHECK(binomial(7, 3) == 35);
    CHECK(binomial(60, 30) == 118264581564861424ULL);
    CHECK_THROWS_AS(binomial(100, 50), ParameterDomainError);
  }

  TEST_CASE("validate enforces the parameter domain") {
    CHECK_NOTHROW(validate({3, 1, 3.0, 1.0, 1.0}));
    CHECK_NOTHROW(validate({3, 1, 3.0, 1.0, 0.0}));
    CHECK_THROWS_AS(validate({2, 1, 3.0, 1.0, 1.0}), ParameterDomainError);
    CHECK_THROWS_AS(validate({4, 2, 3.0, 1.0, 1.0}), ParameterDomainError);
    CHECK_THROWS_AS(validate({3, 5, 6.0, 1.0, 1.0}), ParameterDomainError);
    CHECK_THROWS_AS(validate({3, 1, 1.0, 1.0, 1.0}), ParameterDomainError);
    CHECK_THROWS_AS(validate({3, 1, 3.0, 1.0, -1.0}), ParameterDomainError);
    CHECK_THROWS_AS(validate({3, 1, 3.0, NAN, 1.0}), ParameterDomainError);
    CHECK_THROWS_AS(make_params(7, 3, 2.0, 1.0, 1.0), ParameterDomainError);
  }

  TEST_CASE("negative heights are normalized by reflection") {
    const SignedHeight h = normalize_gamma(-2.5);
    CHECK(h.gamma == 2.5);
    CHECK(h.sign == -1);
    CHECK(normalize_gamma(3.0).sign == 1);
  }

  TEST_CASE("critical exponents") {
    const CriticalExponents a = critical_exponents(3, 1);
    CHECK(a.q_c == doctest::Approx(5.0 / 3.0).epsilon(1e-15));
    CHECK(a.q_star.value() == doctest::Approx(5.0).epsilon(1e-15));
    const CriticalExponents b = critical_exponents(7, 3);
    CHECK(b.q_c == doctest::Approx(27.0 / 7.0).epsilon(1e-15));
    CHECK(b.q_star.value() == doctest::Approx(27.0).epsilon(1e-15));
    const CriticalExponents c = critical_exponents(4, 2);
    CHECK(c.q_c == doctest::Approx(3.0));
    CHECK(c.q_star.is_infinite());
    CHECK(std::isinf(c.q_star.as_double()));
    CHECK_THROWS_AS(c.q_star.value(), DomainError);
    CHECK_THROWS_AS(critical_exponents(2, 1), ParameterDomainError);
    CHECK_THROWS_AS(critical_exponents(3, 4), ParameterDomainError);
  }

  TEST_CASE("derived constants") {
    const DerivedConstants k1 = derive_constants(3, 1, 1.0);
    CHECK(k1.c_nk == 1.0);
    CHECK(k1.b == 1.0);
    CHECK(k1.a == 1.0);
    CHECK(k1.delta == 2.0);
    CHECK(k1.n_tilde == 3.0);

    const DerivedConstants k3 = derive_constants(7, 3, 2.0);
    CHECK(k3.c_nk == doctest::Approx(5.0).epsilon(1e-15));
    CHECK(k3.b == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(k3.a == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(k3.delta == doctest::Approx(11.0 / 3.0).epsilon(1e-15));
    CHECK(k3.n_tilde == doctest::Approx(14.0 / 3.0).epsilon(1e-15));
    CHECK(k3.eta == doctest::Approx(2.0 / 9.0).epsilon(1e-14));
    CHECK(k3.kappa_tilde == doctest::Approx(4.0 / 3.0).epsilon(1e-15));

    const DerivedConstants k33 = derive_constants(3, 3, 1.0);
    CHECK(k33.c_nk == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(k33.b == doctest::Approx(1.5));
    CHECK(k33.delta == doctest::Approx(1.0));
  }

  TEST_CASE("derived constant invariants over a parameter grid") {
    for (int n = 3; n <= 12; ++n) {
      for (int k = 1; k <= n; k += 2) {
        const DerivedConstants c = derive_constants(n, k, 1.0);
        CHECK(c.b >= 1.0);
        CHECK(c.b < 2.0);
        CHECK(c.delta > 0.0);
        CHECK(c.n_tilde == doctest::Approx(n * (k + 1.0) / (2.0 * k)).epsilon(1e-14));
        const DerivedConstants again = derive_constants(n, k, 1.0);
        CHECK(again.delta == c.delta);
        CHECK(again.c_nk == c.c_nk);
      }
    }
  }

  TEST_CASE("type-I exponents") {
    const TypeIExponents a = type1_exponents(7, 3, 6.0);
    CHECK(a.alpha0 == doctest::Approx(0.2).epsilon(1e-15));
    CHECK(a.beta0 == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(a.kappa0 == doctest::Approx(2.0).epsilon(1e-15));
    const TypeIExponents b = type1_exponents(5, 1, 3.0);
    CHECK(b.alpha0 == doctest::Approx(0.5));
    CHECK(b.beta0 == doctest::Approx(0.5));
    CHECK(b.kappa0 == doctest::Approx(1.0));
    CHECK(b.kappa0 == doctest::Approx(b.alpha0 / b.beta0));
    CHECK_THROWS_AS(type1_exponents(3, 1, 1.0), ParameterDomainError);
    for (int k : {1, 3, 5}) {
      for (double q : {k + 0.1, k + 1.0, 2.0 * k + 3.7, 40.0}) {
        const TypeIExponents e = type1_exponents(11, k, q);
        CHECK((k - 1) * e.alpha0 + 2 * k * e.beta0 == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(e.alpha0 - e.beta0 * e.kappa0 == doctest::Approx(0.0).epsilon(1e-14));
      }
    }
  }

  TEST_CASE("regime tags and kappa0 equivalences") {
    CHECK(regime(3, 1, 1.5) == RegimeTag::Subcritical);
    CHECK(regime(3, 1, 5.0 / 3.0) == RegimeTag::Subcritical);
    CHECK(regime(3, 1, 3.0) == RegimeTag::Intermediate);
    CHECK(regime(3, 1, 5.0) == RegimeTag::Supercritical);
    CHECK(regime(3, 1, 6.0) == RegimeTag::Supercritical);
    CHECK(regime(4, 3, 100.0) == RegimeTag::Intermediate);
    CHECK(to_string(RegimeTag::Intermediate) == "intermediate");
    for (int n = 3; n <= 9; ++n) {
      for (int k = 1; k <= n; k += 2) {
        const CriticalExponents ce = critical_exponents(n, k);
        for (double q = k + 0.05; q < 12.0 * k; q *= 1.07) {
          const double kappa0 = type1_exponents(n, k, q).kappa0;
          CHECK((q <= ce.q_c) == (kappa0 >= n * (1.0 - 1e-12)));
          if (!ce.q_star.is_infinite() && std::abs(q - ce.q_star.value()) > 1e-9) {
            CHECK(ce.q_star.at_or_below(q) == (kappa0 <= (n - 2.0 * k) / (k + 1.0)));
          }
        }
      }
    }
  }

  TEST_CASE("change of variables") {
    const DerivedConstants k1 = derive_constants(3, 1, 1.0);
    CHECK(r_to_s(k1, 2.5) == 2.5);
    const DerivedConstants k3 = derive_constants(7, 3, 2.0);
    CHECK(r_to_s(k3, 1.0) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    for (double r : {1e-6, 1.0, 1e3}) {
      CHECK(s_to_r(k3, r_to_s(k3, r)) == doctest::Approx(r).epsilon(1e-14));
    }
    CHECK(r_to_s(k3, 0.0) == 0.0);
    double prev = -1.0;
    for (double r = 0.0; r < 50.0; r += 0.37) {
      const double s = r_to_s(k3, r);
      CHECK(s > prev);
      prev = s;
    }
    CHECK_THROWS_AS(r_to_s(k3, -1.0), DomainError);
    CHECK_THROWS_AS(s_to_r(k3, -1.0), DomainError);
  }

  TEST_CASE("positivity height bound") {
    CHECK(gamma_lower_bound({3, 1, 3.0, 2.0, 1.0}) == doctest::Approx(1.0));
    CHECK(gamma_lower_bound({3, 1, 3.0, 1.0, 1.0}) == doctest::Approx(std::sqrt(2.0)));
    CHECK(gamma_lower_bound({7, 3, 6.0, 2.0, 1.0}) == doctest::Approx(1.9036539387158786));
    CHECK(gamma_lower_bound({7, 3, 6.0, 7.0 - 1e-9, 1.0}) < 1e-1);
    CHECK_THROWS_AS(gamma_lower_bound({3, 1, 3.0, 3.0, 1.0}), RegimeError);
  }

  TEST_CASE("error categories") {
    CHECK(std::string(ParameterDomainError("x").category()) == "parameter_domain");
    CHECK(std::string(DomainError("x").category()) == "domain");
    CHECK(std::string(RegimeError("x").category()) == "regime");
    CHECK(std::string(NumericalError("x").category()) == "numerical");
    CHECK(std::string(DivergenceError("x").category()) == "divergence");
  }
}
