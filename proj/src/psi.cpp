#include "dioph/psi.hpp"

#include <mpfr.h>

#include <algorithm>
#include <vector>

#include "dioph/errors.hpp"

namespace dioph {

PsiSpec PsiSpec::constant(Rational c) {
  PsiSpec s;
  s.kind = Kind::Constant;
  s.c = std::move(c);
  return s;
}

PsiSpec PsiSpec::power_decay(Rational c, Rational exponent) {
  PsiSpec s;
  s.kind = Kind::PowerDecay;
  s.c = std::move(c);
  s.exponent = std::move(exponent);
  return s;
}

PsiSpec PsiSpec::log_reciprocal(Rational c, Rational shift) {
  PsiSpec s;
  s.kind = Kind::LogReciprocal;
  s.c = std::move(c);
  s.shift = std::move(shift);
  return s;
}

std::string kind_name(PsiSpec::Kind kind) {
  switch (kind) {
    case PsiSpec::Kind::Constant:
      return "constant";
    case PsiSpec::Kind::PowerDecay:
      return "power-decay";
    case PsiSpec::Kind::LogReciprocal:
      return "log-reciprocal";
  }
  return "?";
}

PsiSpec::Kind parse_kind(const std::string& name) {
  if (name == "constant") return PsiSpec::Kind::Constant;
  if (name == "power-decay" || name == "power") return PsiSpec::Kind::PowerDecay;
  if (name == "log-reciprocal" || name == "log") return PsiSpec::Kind::LogReciprocal;
  throw ParseError("unknown psi kind '" + name + "'");
}

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  size_t start = 0;
  for (;;) {
    size_t pos = s.find(sep, start);
    parts.push_back(s.substr(start, pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return parts;
}

}  // namespace

PsiSpec parse_psi_inline(const std::string& text) {
  auto parts = split(text, ':');
  PsiSpec::Kind kind = parse_kind(parts[0]);
  switch (kind) {
    case PsiSpec::Kind::Constant:
      if (parts.size() != 2) throw ParseError("expected constant:C");
      return PsiSpec::constant(parse_rational(parts[1]));
    case PsiSpec::Kind::PowerDecay:
      if (parts.size() != 3) throw ParseError("expected power:C:EXPONENT");
      return PsiSpec::power_decay(parse_rational(parts[1]), parse_rational(parts[2]));
    case PsiSpec::Kind::LogReciprocal:
      if (parts.size() != 3) throw ParseError("expected log:C:SHIFT");
      return PsiSpec::log_reciprocal(parse_rational(parts[1]), parse_rational(parts[2]));
  }
  throw ParseError("bad psi spec '" + text + "'");
}

std::string to_inline(const PsiSpec& spec) {
  switch (spec.kind) {
    case PsiSpec::Kind::Constant:
      return "constant:" + to_string(spec.c);
    case PsiSpec::Kind::PowerDecay:
      return "power:" + to_string(spec.c) + ":" + to_string(spec.exponent);
    case PsiSpec::Kind::LogReciprocal:
      return "log:" + to_string(spec.c) + ":" + to_string(spec.shift);
  }
  return "?";
}

namespace {

class Mpfr {
 public:
  explicit Mpfr(mpfr_prec_t prec) { mpfr_init2(v_, prec); }
  ~Mpfr() { mpfr_clear(v_); }
  Mpfr(const Mpfr&) = delete;
  Mpfr& operator=(const Mpfr&) = delete;
  mpfr_ptr operator*() { return v_; }

 private:
  mpfr_t v_;
};

Rational to_rational(mpfr_ptr x) {
  Rational q;
  mpfr_get_q(q.get_mpq_t(), x);
  return q;
}

// Exact value when one is cheaply available.
std::optional<Rational> exact_value(const PsiSpec& spec, const Integer& n) {
  if (spec.kind == PsiSpec::Kind::Constant) return spec.c;
  if (spec.kind == PsiSpec::Kind::PowerDecay) {
    if (n == 1 || sgn(spec.exponent) == 0) return spec.c;
    if (mpz_perfect_square_p(n.get_mpz_t()) != 0 && spec.exponent.get_den() == 1 &&
        mpz_fits_ulong_p(spec.exponent.get_num_mpz_t()) != 0) {
      Integer root = sqrt(n);
      Integer p;
      mpz_pow_ui(p.get_mpz_t(), root.get_mpz_t(), spec.exponent.get_num().get_ui());
      return spec.c / Rational(p);
    }
  }
  return std::nullopt;
}

}  // namespace

std::pair<Rational, Rational> psi_enclosure(const PsiSpec& spec, const Integer& sq_norm,
                                            long precision_bits) {
  if (sq_norm < 1) throw PreconditionFailed("psi_eval: sq_norm must be >= 1");
  if (auto exact = exact_value(spec, sq_norm)) return {*exact, *exact};

  auto prec = static_cast<mpfr_prec_t>(precision_bits);
  Mpfr c_lo(prec), c_hi(prec), lo(prec), hi(prec);
  Mpfr n(std::max<mpfr_prec_t>(prec, static_cast<mpfr_prec_t>(mpz_sizeinbase(sq_norm.get_mpz_t(), 2))));
  mpfr_set_q(*c_lo, spec.c.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(*c_hi, spec.c.get_mpq_t(), MPFR_RNDU);
  mpfr_set_z(*n, sq_norm.get_mpz_t(), MPFR_RNDN);  // exact

  if (spec.kind == PsiSpec::Kind::PowerDecay) {
    // c * n^(-e/2); n >= 1 so n^(-t) decreases in t.
    Rational half = spec.exponent / 2;
    Mpfr t_lo(prec), t_hi(prec);
    mpfr_set_q(*t_lo, half.get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(*t_hi, half.get_mpq_t(), MPFR_RNDU);
    mpfr_neg(*t_lo, *t_lo, MPFR_RNDN);
    mpfr_neg(*t_hi, *t_hi, MPFR_RNDN);
    mpfr_pow(*lo, *n, *t_hi, MPFR_RNDD);
    mpfr_pow(*hi, *n, *t_lo, MPFR_RNDU);
    mpfr_mul(*lo, *lo, *c_lo, MPFR_RNDD);
    mpfr_mul(*hi, *hi, *c_hi, MPFR_RNDU);
  } else {
    // c / ln(sqrt(n) + shift)
    Mpfr x_lo(prec), x_hi(prec), s(prec);
    mpfr_sqrt(*x_lo, *n, MPFR_RNDD);
    mpfr_sqrt(*x_hi, *n, MPFR_RNDU);
    mpfr_set_q(*s, spec.shift.get_mpq_t(), MPFR_RNDD);
    mpfr_add(*x_lo, *x_lo, *s, MPFR_RNDD);
    mpfr_set_q(*s, spec.shift.get_mpq_t(), MPFR_RNDU);
    mpfr_add(*x_hi, *x_hi, *s, MPFR_RNDU);
    mpfr_log(*x_lo, *x_lo, MPFR_RNDD);
    mpfr_log(*x_hi, *x_hi, MPFR_RNDU);
    if (mpfr_sgn(*x_lo) <= 0) throw InadmissibleSpec("log-reciprocal: ln(x + shift) must be positive");
    mpfr_div(*lo, *c_lo, *x_hi, MPFR_RNDD);
    mpfr_div(*hi, *c_hi, *x_lo, MPFR_RNDU);
  }
  return {to_rational(*lo), to_rational(*hi)};
}

void check_admissible(const PsiSpec& spec) {
  if (sgn(spec.c) <= 0) throw InadmissibleSpec("psi: c must be positive");
  if (spec.kind == PsiSpec::Kind::PowerDecay && sgn(spec.exponent) < 0)
    throw InadmissibleSpec("psi: exponent must be non-negative (psi non-increasing)");
  if (spec.kind == PsiSpec::Kind::LogReciprocal && sgn(spec.shift) <= 0)
    throw InadmissibleSpec("psi: shift must be positive");

  const QuadReal& ceiling = psi_ceiling();
  const std::string msg = "psi(1) exceeds (9 gamma)^{-1} = (9 - sqrt 2)/162";
  if (auto exact = exact_value(spec, Integer(1))) {
    if (QuadReal(*exact) > ceiling) throw InadmissibleSpec(msg);
    return;
  }
  // psi(1) = c/ln(1 + shift) is transcendental, so refinement terminates.
  for (long prec = 128; prec <= 1 << 14; prec *= 2) {
    auto [lo, hi] = psi_enclosure(spec, Integer(1), prec);
    if (QuadReal(hi) <= ceiling) return;
    if (QuadReal(lo) > ceiling) throw InadmissibleSpec(msg);
  }
  throw InadmissibleSpec("psi(1) could not be separated from (9 gamma)^{-1}");
}

PsiValue psi_eval(const PsiSpec& spec, const Integer& sq_norm, const std::optional<PsiValue>& prev) {
  auto [lo, hi] = psi_enclosure(spec, sq_norm, 256);
  PsiValue out;
  if (lo == hi) {
    out = {lo, lo, hi};
  } else {
    // floor(log2 lo) from the sizes of numerator and denominator, off by at most one.
    long e = static_cast<long>(mpz_sizeinbase(lo.get_num_mpz_t(), 2)) -
             static_cast<long>(mpz_sizeinbase(lo.get_den_mpz_t(), 2)) - 1;
    long bits = std::max(64L, 35 - e);
    Integer scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 2, static_cast<unsigned long>(bits));
    Rational s(scale);
    Rational value = make_rational(floor_of(lo * s), scale);
    Rational upper = make_rational(ceil_of(hi * s), scale);
    out = {value, value, upper};
  }
  if (prev && out.value > prev->value) {
    out.value = prev->value;
    if (out.lower > out.value) out.lower = out.value;
  }
  return out;
}

}  // namespace dioph
