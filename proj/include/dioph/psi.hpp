#pragma once

#include <optional>
#include <string>

#include "dioph/exact.hpp"

namespace dioph {

/// Built-in admissible approximation functions on [1, inf):
///   constant       psi(x) = c
///   power-decay    psi(x) = c * x^(-exponent),       exponent >= 0
///   log-reciprocal psi(x) = c / ln(x + shift),       shift > 0
struct PsiSpec {
  enum class Kind { Constant, PowerDecay, LogReciprocal };

  Kind kind = Kind::Constant;
  Rational c{1, 28};
  Rational exponent{0};
  Rational shift{0};

  static PsiSpec constant(Rational c);
  static PsiSpec power_decay(Rational c, Rational exponent);
  static PsiSpec log_reciprocal(Rational c, Rational shift);

  friend bool operator==(const PsiSpec& x, const PsiSpec& y) {
    return x.kind == y.kind && x.c == y.c && x.exponent == y.exponent && x.shift == y.shift;
  }
};

std::string kind_name(PsiSpec::Kind kind);
PsiSpec::Kind parse_kind(const std::string& name);

/// Inline CLI form: "constant:1/28", "power:1/28:1/4", "log:1/50:2".
PsiSpec parse_psi_inline(const std::string& text);
std::string to_inline(const PsiSpec& spec);

/// Snapped value psi_hat together with a certified enclosure of the true psi.
/// lower <= value <= upper; value carries a short dyadic (or exact) form.
struct PsiValue {
  Rational value;
  Rational lower;
  Rational upper;
};

/// Throws InadmissibleSpec unless the parameters give a positive non-increasing
/// function with psi(1) <= (9 gamma)^{-1}.
void check_admissible(const PsiSpec& spec);

/// Evaluates psi at sqrt(sq_norm). The enclosure is certified; psi_hat is the lower
/// endpoint cut to 64 fractional bits (more if psi_hat < 2^-31), clamped to
/// prev->value so that successive values never increase.
PsiValue psi_eval(const PsiSpec& spec, const Integer& sq_norm, const std::optional<PsiValue>& prev);

/// Same enclosure without snapping, at the requested working precision.
std::pair<Rational, Rational> psi_enclosure(const PsiSpec& spec, const Integer& sq_norm,
                                            long precision_bits);

}  // namespace dioph
