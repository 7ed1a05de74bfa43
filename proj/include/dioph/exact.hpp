#pragma once

// Exact arithmetic: GMP rationals, the quadratic field Q(sqrt 2) and
// certified decisions on expressions p + q*sqrt(r) with p, q, r in Q(sqrt 2).

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace dioph {

using Integer = mpz_class;
using Rational = mpq_class;

/// num/den in lowest terms; den must be nonzero.
Rational make_rational(const Integer& num, const Integer& den);

/// x as an integer; throws PreconditionFailed unless x is integral.
Integer to_integer(const Rational& x);

Integer floor_of(const Rational& x);
Integer ceil_of(const Rational& x);

/// Nearest integer; an exact tie n + 1/2 rounds to the even neighbour.
Integer nearest_integer(const Rational& x);

/// Distance to the nearest integer, always in [0, 1/2].
Rational dist_to_z(const Rational& x);

/// Fractional part x - floor(x), in [0, 1).
Rational frac(const Rational& x);

int sign_of(const Rational& x);
int sign_of(const Integer& x);

/// "num/den" with den > 0, den always printed.
std::string to_string(const Rational& x);

/// Accepts "num/den" or a bare integer; throws ParseError.
Rational parse_rational(std::string_view text);
Integer parse_integer(std::string_view text);

/// a + b*sqrt(2) with rational a, b. The representation is unique.
class QuadReal {
 public:
  QuadReal() = default;
  QuadReal(Rational a, Rational b = 0) : a_(std::move(a)), b_(std::move(b)) {}
  QuadReal(long v) : a_(v), b_(0) {}

  const Rational& a() const noexcept { return a_; }
  const Rational& b() const noexcept { return b_; }

  bool is_zero() const { return sgn(a_) == 0 && sgn(b_) == 0; }
  bool is_rational() const { return sgn(b_) == 0; }

  QuadReal operator-() const { return {-a_, -b_}; }
  QuadReal& operator+=(const QuadReal& o);
  QuadReal& operator-=(const QuadReal& o);
  QuadReal& operator*=(const QuadReal& o);
  /// Throws std::domain_error on division by zero.
  QuadReal& operator/=(const QuadReal& o);

  QuadReal inverse() const;
  /// Galois conjugate a - b*sqrt(2).
  QuadReal conjugate() const { return {a_, -b_}; }
  /// a^2 - 2 b^2.
  Rational norm() const { return a_ * a_ - 2 * b_ * b_; }

  /// Display-only approximation.
  double approx() const;

  friend QuadReal operator+(QuadReal x, const QuadReal& y) { return x += y; }
  friend QuadReal operator-(QuadReal x, const QuadReal& y) { return x -= y; }
  friend QuadReal operator*(QuadReal x, const QuadReal& y) { return x *= y; }
  friend QuadReal operator/(QuadReal x, const QuadReal& y) { return x /= y; }
  friend bool operator==(const QuadReal& x, const QuadReal& y) {
    return x.a_ == y.a_ && x.b_ == y.b_;
  }

 private:
  Rational a_{0};
  Rational b_{0};
};

/// Exact sign of a + b*sqrt(2), decided by comparing a^2 with 2 b^2.
int quad_sign(const QuadReal& x);

/// Three-way comparison in Q(sqrt 2): sign(x - y).
inline int compare(const QuadReal& x, const QuadReal& y) { return quad_sign(x - y); }

inline bool operator<(const QuadReal& x, const QuadReal& y) { return compare(x, y) < 0; }
inline bool operator<=(const QuadReal& x, const QuadReal& y) { return compare(x, y) <= 0; }
inline bool operator>(const QuadReal& x, const QuadReal& y) { return compare(x, y) > 0; }
inline bool operator>=(const QuadReal& x, const QuadReal& y) { return compare(x, y) >= 0; }

std::string to_string(const QuadReal& x);

/// Positional decimal with `digits` significant digits, rounded to nearest
/// (ties to even). Exact: the rounding decision uses radical_floor.
std::string to_decimal(const QuadReal& x, int digits = 30);

/// gamma = 18 / (9 - sqrt 2) = (162 + 18 sqrt 2) / 79.
const QuadReal& gamma_constant();
/// (9 gamma)^{-1} = (9 - sqrt 2) / 162, the admissibility ceiling for psi(1).
const QuadReal& psi_ceiling();

/// p + q*sqrt(r) with p, q, r in Q(sqrt 2) and r >= 0.
struct QuadRadical {
  QuadReal p;
  QuadReal q;
  QuadReal r;

  QuadRadical operator-() const { return {-p, -q, r}; }
  QuadRadical plus(const QuadReal& c) const { return {p + c, q, r}; }
  QuadRadical scaled(const QuadReal& c) const { return {p * c, q * c, r}; }
};

/// Exact sign; throws NegativeRadicand if r < 0.
int radical_sign(const QuadRadical& x);

/// Largest integer n with n <= x; throws NegativeRadicand.
Integer radical_floor(const QuadRadical& x);
Integer radical_ceil(const QuadRadical& x);

/// Floating approximation used only to seed certified searches.
double radical_approx(const QuadRadical& x);

}  // namespace dioph
