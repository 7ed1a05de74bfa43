#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "dioph/errors.hpp"
#include "dioph/exact.hpp"
#include "oracle.hpp"

using namespace dioph;

namespace {

QuadReal q(long a, long b = 0) { return QuadReal(Rational(a), Rational(b)); }
Rational r(long n, long d = 1) { return make_rational(n, d); }

QuadReal gamma() { return gamma_constant(); }
QuadReal psi28() { return QuadReal(r(1, 28)); }
QuadReal inv_2_gamma_psi(const QuadReal& psi) { return (QuadReal(2) * gamma() * psi).inverse(); }

}  // namespace

TEST_CASE("quad_sign small cases") {
  CHECK(quad_sign(q(0, 0)) == 0);
  CHECK(quad_sign(q(3, -2)) == 1);
  CHECK(quad_sign(q(1, -1)) == -1);
  CHECK(quad_sign(q(-3, 2)) == -1);
  CHECK(quad_sign(q(0, -5)) == -1);
  CHECK(quad_sign(QuadReal(r(-7, 5), r(1, 1))) == 1);
}

TEST_CASE("gamma and the psi ceiling") {
  CHECK(gamma() == QuadReal(r(162, 79), r(18, 79)));
  CHECK(gamma() == QuadReal(18) / (QuadReal(9) - QuadReal(0, 1)));
  CHECK(std::fabs(oracle::approx(gamma()) - 2.373) < 0.001);
  CHECK((QuadReal(9) * gamma()).inverse() == QuadReal(r(9, 162), r(-1, 162)));
  CHECK(psi_ceiling() == (QuadReal(9) * gamma()).inverse());
  CHECK(std::fabs(oracle::approx(psi_ceiling()) - 0.046826) < 1e-6);
}

TEST_CASE("field axioms on random elements") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 2000; ++i) {
    QuadReal x = oracle::small_quad(rng), y = oracle::small_quad(rng), z = oracle::small_quad(rng);
    CHECK(x + y == y + x);
    CHECK(x * (y + z) == x * y + x * z);
    if (!y.is_zero()) {
      CHECK((x * y) / y == x);
      CHECK(y * y.inverse() == QuadReal(1));
    }
    CHECK(x.norm() == (x * x.conjugate()).a());
  }
  CHECK_THROWS_AS(QuadReal(1) / QuadReal(0), std::domain_error);
}

TEST_CASE("quad_sign agrees with a 512-bit evaluation") {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 20000; ++i) {
    QuadReal x = oracle::small_quad(rng, 1000, 700);
    int expect = oracle::sign_512(QuadRadical{x, 0, 0});
    REQUIRE(expect != 2);
    CHECK(quad_sign(x) == expect);
  }
}

TEST_CASE("radical_sign small cases") {
  CHECK(radical_sign({q(0), q(0), q(5)}) == 0);
  CHECK(radical_sign({q(-2), q(1), q(5)}) == 1);
  CHECK(radical_sign({q(3), q(-1), q(9)}) == 0);
  CHECK(radical_sign({q(5), q(7), q(0)}) == 1);
  CHECK_THROWS_AS(radical_sign({q(0), q(1), q(-1)}), NegativeRadicand);
}

TEST_CASE("gamma squared against the base-case radical") {
  // gamma^2 ~ 5.632 and sqrt((2 gamma / 28)^{-1}) ~ 2.429: the difference is positive.
  QuadReal rad = inv_2_gamma_psi(psi28());
  QuadRadical x{gamma() * gamma(), q(-1), rad};
  CHECK(oracle::sign_512(x) == 1);
  CHECK(radical_sign(x) == 1);
  // gamma itself sits below the radical.
  QuadRadical y{gamma(), q(-1), rad};
  CHECK(oracle::sign_512(y) == -1);
  CHECK(radical_sign(y) == -1);
}

TEST_CASE("radical_sign agrees with a 512-bit evaluation on 1e5 inputs") {
  std::mt19937_64 rng(13);
  long zeros = 0;
  for (int i = 0; i < 100000; ++i) {
    QuadRadical x{oracle::small_quad(rng), oracle::small_quad(rng), oracle::small_quad(rng)};
    if (quad_sign(x.r) < 0) x.r = -x.r;
    if (i % 10 == 0) {
      // Exact cancellation: r = s^2 and p = -q*s.
      QuadReal s = oracle::small_quad(rng);
      if (quad_sign(s) < 0) s = -s;
      x.r = s * s;
      x.p = -x.q * s;
    }
    int expect = oracle::sign_512(x);
    int got = radical_sign(x);
    if (expect == 2) {
      CHECK(got == 0);
      ++zeros;
    } else {
      CHECK(got == expect);
    }
  }
  CHECK(zeros > 0);
}

TEST_CASE("radical_floor brackets") {
  CHECK(radical_floor({QuadReal(r(7, 2)), q(0), q(0)}) == 3);
  CHECK(radical_floor({q(0), q(1), q(2)}) == 1);
  CHECK(radical_floor({QuadReal(r(-7, 2)), q(0), q(0)}) == -4);
  CHECK(radical_ceil({QuadReal(r(7, 2)), q(0), q(0)}) == 4);
  CHECK(radical_ceil({q(5), q(0), q(0)}) == 5);
  CHECK_THROWS_AS(radical_floor({q(0), q(1), q(-2)}), NegativeRadicand);

  QuadReal rad = inv_2_gamma_psi(psi28()) - gamma() * gamma();
  QuadRadical root{q(0), q(1), rad};
  CHECK(std::fabs(oracle::approx(rad) - 0.27) < 0.005);
  CHECK(radical_floor(root) == 0);
  CHECK(radical_ceil(root) == 1);

  std::mt19937_64 rng(14);
  for (int i = 0; i < 5000; ++i) {
    QuadRadical x{oracle::small_quad(rng, 400), oracle::small_quad(rng, 400), oracle::small_quad(rng, 400)};
    if (quad_sign(x.r) < 0) x.r = -x.r;
    Integer n = radical_floor(x);
    oracle::Big v(512);
    oracle::eval(v, x);
    Integer fl;
    mpfr_get_z(fl.get_mpz_t(), v.get(), MPFR_RNDD);
    CHECK(radical_sign(x.plus(QuadReal(Rational(-n)))) >= 0);
    CHECK(radical_sign(x.plus(QuadReal(Rational(-n - 1)))) < 0);
    CHECK(n == fl);
  }
}

TEST_CASE("nearest integer and distance to Z") {
  CHECK(nearest_integer(r(5, 7)) == 1);
  CHECK(dist_to_z(r(5, 7)) == r(2, 7));
  CHECK(nearest_integer(r(-3, 2)) == -2);
  CHECK(dist_to_z(r(-3, 2)) == r(1, 2));
  CHECK(nearest_integer(r(5, 2)) == 2);
  CHECK(nearest_integer(r(4)) == 4);
  CHECK(dist_to_z(r(4)) == 0);
  CHECK(frac(r(-1, 3)) == r(2, 3));
  CHECK(floor_of(r(-1, 3)) == -1);
  CHECK(ceil_of(r(-1, 3)) == 0);
  std::mt19937_64 rng(15);
  for (int i = 0; i < 2000; ++i) {
    Rational x = oracle::small_rational(rng, 500, 97);
    Rational d = dist_to_z(x);
    CHECK(d >= 0);
    CHECK(d <= r(1, 2));
    CHECK(abs(x - Rational(nearest_integer(x))) == d);
  }
}

TEST_CASE("parsing and printing rationals") {
  CHECK(parse_rational("6/8") == r(3, 4));
  CHECK(to_string(parse_rational("-6/8")) == "-3/4");
  CHECK(to_string(parse_rational("5")) == "5/1");
  CHECK(parse_rational("+7/-14") == r(-1, 2));
  CHECK_THROWS_AS(parse_rational("1/0"), ParseError);
  CHECK_THROWS_AS(parse_rational("1.5"), ParseError);
  CHECK_THROWS_AS(parse_rational(""), ParseError);
  CHECK_THROWS_AS(parse_integer("12a"), ParseError);
  CHECK(to_integer(r(6, 3)) == 2);
  CHECK_THROWS_AS(to_integer(r(1, 2)), PreconditionFailed);
}

TEST_CASE("decimal rendering rounds to nearest") {
  CHECK(to_decimal(QuadReal(r(1, 3)), 5) == "0.33333");
  CHECK(to_decimal(QuadReal(r(2, 3)), 5) == "0.66667");
  CHECK(to_decimal(QuadReal(r(-2, 3)), 3) == "-0.667");
  CHECK(to_decimal(QuadReal(r(1234567)), 3) == "1230000");
  CHECK(to_decimal(QuadReal(r(9999, 1000)), 3) == "10.0");
  CHECK(to_decimal(QuadReal(r(1, 8)), 2) == "0.12");   // tie to even
  CHECK(to_decimal(QuadReal(r(3, 8)), 2) == "0.38");   // tie to even
  CHECK(to_decimal(QuadReal(0), 5) == "0");
  CHECK(to_decimal(QuadReal(0, 1), 30) == "1.41421356237309504880168872421");
  CHECK(to_decimal(psi_ceiling(), 10) == "0.04682584221");
  CHECK(to_decimal(gamma(), 4) == "2.373");
  CHECK_THROWS_AS(to_decimal(QuadReal(1), 0), PreconditionFailed);

  std::mt19937_64 rng(16);
  for (int i = 0; i < 500; ++i) {
    QuadReal x = oracle::small_quad(rng, 100000, 997);
    if (x.is_zero()) continue;
    double got = std::stod(to_decimal(x, 15));
    double want = oracle::approx(x);
    CHECK(std::fabs(got - want) <= 1e-13 * std::fabs(want));
  }
}
