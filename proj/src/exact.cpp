#include "dioph/exact.hpp"

#include <mpfr.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>

#include "dioph/errors.hpp"

namespace dioph {

Rational make_rational(const Integer& num, const Integer& den) {
  if (den == 0) throw std::domain_error("zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

Integer to_integer(const Rational& x) {
  if (x.get_den() != 1) throw PreconditionFailed("expected an integer, got " + to_string(x));
  return x.get_num();
}

Integer floor_of(const Rational& x) {
  Integer r;
  mpz_fdiv_q(r.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return r;
}

Integer ceil_of(const Rational& x) {
  Integer r;
  mpz_cdiv_q(r.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return r;
}

Integer nearest_integer(const Rational& x) {
  Integer f = floor_of(x);
  Rational rest = x - Rational(f);
  int c = cmp(rest, Rational(1, 2));
  if (c < 0) return f;
  if (c > 0) return f + 1;
  return mpz_even_p(f.get_mpz_t()) ? f : Integer(f + 1);
}

Rational frac(const Rational& x) { return x - Rational(floor_of(x)); }

Rational dist_to_z(const Rational& x) {
  Rational f = frac(x);
  Rational g = 1 - f;
  return f < g ? f : g;
}

int sign_of(const Rational& x) { return sgn(x); }
int sign_of(const Integer& x) { return sgn(x); }

std::string to_string(const Rational& x) {
  return x.get_num().get_str() + "/" + x.get_den().get_str();
}

Integer parse_integer(std::string_view text) {
  std::string s(text);
  auto valid = [](const std::string& t) {
    if (t.empty()) return false;
    size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
    if (i == t.size()) return false;
    return std::all_of(t.begin() + static_cast<long>(i), t.end(),
                       [](unsigned char c) { return std::isdigit(c) != 0; });
  };
  if (!valid(s)) throw ParseError("not an integer: '" + s + "'");
  if (s[0] == '+') s.erase(0, 1);
  return Integer(s, 10);
}

Rational parse_rational(std::string_view text) {
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_integer(text));
  Integer num = parse_integer(text.substr(0, slash));
  Integer den = parse_integer(text.substr(slash + 1));
  if (den == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
  return make_rational(num, den);
}

// ---- Q(sqrt 2) ------------------------------------------------------------

QuadReal& QuadReal::operator+=(const QuadReal& o) {
  a_ += o.a_;
  b_ += o.b_;
  return *this;
}

QuadReal& QuadReal::operator-=(const QuadReal& o) {
  a_ -= o.a_;
  b_ -= o.b_;
  return *this;
}

QuadReal& QuadReal::operator*=(const QuadReal& o) {
  Rational a = a_ * o.a_ + 2 * b_ * o.b_;
  Rational b = a_ * o.b_ + b_ * o.a_;
  a_ = std::move(a);
  b_ = std::move(b);
  return *this;
}

QuadReal QuadReal::inverse() const {
  // sqrt 2 is irrational, so the norm vanishes only at zero.
  Rational n = norm();
  if (sgn(n) == 0) throw std::domain_error("division by zero in Q(sqrt 2)");
  return {a_ / n, -b_ / n};
}

QuadReal& QuadReal::operator/=(const QuadReal& o) { return *this *= o.inverse(); }

double QuadReal::approx() const { return a_.get_d() + b_.get_d() * 1.4142135623730951; }

int quad_sign(const QuadReal& x) {
  int sa = sgn(x.a());
  int sb = sgn(x.b());
  if (sb == 0) return sa;
  if (sa == 0) return sb;
  if (sa == sb) return sa;
  // Opposite signs: the larger of a^2 and 2b^2 wins.
  int c = cmp(x.a() * x.a(), 2 * x.b() * x.b());
  return c > 0 ? sa : sb;
}

std::string to_string(const QuadReal& x) {
  return "(" + to_string(x.a()) + ") + (" + to_string(x.b()) + ")*sqrt(2)";
}

const QuadReal& gamma_constant() {
  static const QuadReal g(Rational(162, 79), Rational(18, 79));
  return g;
}

const QuadReal& psi_ceiling() {
  static const QuadReal c(make_rational(1, 18), make_rational(-1, 162));
  return c;
}

// ---- p + q sqrt(r) --------------------------------------------------------

int radical_sign(const QuadRadical& x) {
  int sr = quad_sign(x.r);
  if (sr < 0) throw NegativeRadicand("radicand " + to_string(x.r) + " is negative");
  int sp = quad_sign(x.p);
  int sq = sr == 0 ? 0 : quad_sign(x.q);
  if (sq == 0) return sp;
  if (sp == 0) return sq;
  if (sp == sq) return sp;
  int c = quad_sign(x.p * x.p - x.q * x.q * x.r);
  if (c == 0) return 0;
  return c > 0 ? sp : sq;
}

namespace {

class MpfrValue {
 public:
  explicit MpfrValue(mpfr_prec_t prec) { mpfr_init2(v_, prec); }
  ~MpfrValue() { mpfr_clear(v_); }
  MpfrValue(const MpfrValue&) = delete;
  MpfrValue& operator=(const MpfrValue&) = delete;
  mpfr_ptr get() { return v_; }

 private:
  mpfr_t v_;
};

size_t magnitude_bits(const Rational& q) {
  return mpz_sizeinbase(q.get_num_mpz_t(), 2) + mpz_sizeinbase(q.get_den_mpz_t(), 2);
}

size_t magnitude_bits(const QuadReal& q) { return magnitude_bits(q.a()) + magnitude_bits(q.b()); }

void eval_quad(mpfr_ptr out, const QuadReal& x, mpfr_prec_t prec) {
  MpfrValue s(prec), t(prec);
  mpfr_sqrt_ui(s.get(), 2, MPFR_RNDN);
  mpfr_set_q(t.get(), x.b().get_mpq_t(), MPFR_RNDN);
  mpfr_mul(s.get(), s.get(), t.get(), MPFR_RNDN);
  mpfr_set_q(t.get(), x.a().get_mpq_t(), MPFR_RNDN);
  mpfr_add(out, s.get(), t.get(), MPFR_RNDN);
}

// Rounded-to-nearest approximation of x at a precision scaled to its inputs.
Integer approx_floor(const QuadRadical& x) {
  auto prec = static_cast<mpfr_prec_t>(
      128 + magnitude_bits(x.p) + magnitude_bits(x.q) + magnitude_bits(x.r));
  MpfrValue p(prec), q(prec), r(prec);
  eval_quad(p.get(), x.p, prec);
  eval_quad(q.get(), x.q, prec);
  eval_quad(r.get(), x.r, prec);
  if (mpfr_sgn(r.get()) < 0) mpfr_set_zero(r.get(), 1);
  mpfr_sqrt(r.get(), r.get(), MPFR_RNDN);
  mpfr_mul(q.get(), q.get(), r.get(), MPFR_RNDN);
  mpfr_add(p.get(), p.get(), q.get(), MPFR_RNDN);
  Integer n;
  mpfr_get_z(n.get_mpz_t(), p.get(), MPFR_RNDD);
  return n;
}

}  // namespace

double radical_approx(const QuadRadical& x) {
  double r = std::max(0.0, x.r.approx());
  return x.p.approx() + x.q.approx() * std::sqrt(r);
}

Integer radical_floor(const QuadRadical& x) {
  if (quad_sign(x.r) < 0) throw NegativeRadicand("radicand " + to_string(x.r) + " is negative");
  // The float guess only seeds the search; both bounds are certified exactly.
  Integer n = approx_floor(x);
  while (radical_sign(x.plus(QuadReal(Rational(-n)))) < 0) n -= 1;
  while (radical_sign(x.plus(QuadReal(Rational(-(n + 1))))) >= 0) n += 1;
  return n;
}

Integer radical_ceil(const QuadRadical& x) { return -radical_floor(-x); }

// ---- decimal rendering ----------------------------------------------------

namespace {

Integer pow10(long e) {
  Integer r;
  mpz_ui_pow_ui(r.get_mpz_t(), 10, static_cast<unsigned long>(e));
  return r;
}

QuadReal scale10(const QuadReal& x, long e) {
  return e >= 0 ? x * QuadReal(Rational(pow10(e))) : x / QuadReal(Rational(pow10(-e)));
}

}  // namespace

std::string to_decimal(const QuadReal& x, int digits) {
  if (digits < 1) throw PreconditionFailed("to_decimal: digits must be positive");
  int sign = quad_sign(x);
  if (sign == 0) return "0";
  QuadReal y = sign < 0 ? -x : x;

  // decimal exponent e with 10^e <= y < 10^(e+1)
  double approx = y.approx();
  long e = 0;
  if (std::isfinite(approx) && approx > 0) {
    e = static_cast<long>(std::floor(std::log10(approx)));
  } else {
    const Rational& big = abs(y.a()) > abs(y.b()) ? y.a() : y.b();
    e = static_cast<long>((static_cast<double>(mpz_sizeinbase(big.get_num_mpz_t(), 2)) -
                           static_cast<double>(mpz_sizeinbase(big.get_den_mpz_t(), 2))) *
                          0.30102999566398120);
  }
  while (scale10(QuadReal(1), e) > y) --e;
  while (scale10(QuadReal(1), e + 1) <= y) ++e;

  QuadReal z = scale10(y, digits - 1 - e);
  Integer f = radical_floor(QuadRadical{z, QuadReal(0), QuadReal(0)});
  int c = quad_sign(z - QuadReal(Rational(f)) - QuadReal(Rational(1, 2)));
  Integer n = f;
  if (c > 0 || (c == 0 && mpz_odd_p(f.get_mpz_t()) != 0)) n += 1;
  if (n == pow10(digits)) {
    n = pow10(digits - 1);
    ++e;
  }

  std::string s = n.get_str();
  std::string out;
  if (e >= digits - 1) {
    out = s + std::string(static_cast<size_t>(e - digits + 1), '0');
  } else if (e >= 0) {
    out = s.substr(0, static_cast<size_t>(e + 1)) + "." + s.substr(static_cast<size_t>(e + 1));
  } else {
    out = "0." + std::string(static_cast<size_t>(-e - 1), '0') + s;
  }
  return sign < 0 ? "-" + out : out;
}

}  // namespace dioph
