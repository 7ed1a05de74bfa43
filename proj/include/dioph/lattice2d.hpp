#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dioph/exact.hpp"

namespace dioph {

struct IntVec2 {
  Integer x1{0};
  Integer x2{0};

  IntVec2() = default;
  IntVec2(Integer a, Integer b) : x1(std::move(a)), x2(std::move(b)) {}
  IntVec2(long a, long b) : x1(a), x2(b) {}

  bool is_zero() const { return x1 == 0 && x2 == 0; }
  Integer sq_norm() const { return x1 * x1 + x2 * x2; }
  Integer sup_norm() const;

  IntVec2 operator-() const { return {-x1, -x2}; }
  friend IntVec2 operator+(const IntVec2& u, const IntVec2& v) { return {u.x1 + v.x1, u.x2 + v.x2}; }
  friend IntVec2 operator-(const IntVec2& u, const IntVec2& v) { return {u.x1 - v.x1, u.x2 - v.x2}; }
  friend IntVec2 operator*(const Integer& s, const IntVec2& v) { return {s * v.x1, s * v.x2}; }
  friend bool operator==(const IntVec2& u, const IntVec2& v) { return u.x1 == v.x1 && u.x2 == v.x2; }
};

struct RatVec2 {
  Rational x1{0};
  Rational x2{0};

  friend bool operator==(const RatVec2& u, const RatVec2& v) { return u.x1 == v.x1 && u.x2 == v.x2; }
};

Integer det2(const IntVec2& u, const IntVec2& v);
Integer inner(const IntVec2& u, const IntVec2& v);
Rational inner(const RatVec2& a, const IntVec2& m);

/// Rotation of m by +-90 degrees having positive inner product with `toward`.
/// Throws DegenerateDirection when toward is parallel to m (or m is zero).
IntVec2 perp(const IntVec2& m, const IntVec2& toward);

/// Coordinates (s, t) with x = s*b + t*c; throws SingularBasis.
std::pair<Rational, Rational> cramer(const IntVec2& x, const IntVec2& b, const IntVec2& c);

/// x in span_Z(b, c); throws SingularBasis if det2(b, c) == 0.
bool in_span(const IntVec2& x, const IntVec2& b, const IntVec2& c);

/// Integer points of the half-open parallelogram {s*u + t*v : 0 <= s,t < 1},
/// found by scanning its bounding box. Meant for small |det2(u, v)|.
std::vector<IntVec2> parallelogram_points(const IntVec2& u, const IntVec2& v);

/// The unique integer point w of the half-open parallelogram spanned by m_k, m_k1
/// with frac(<alpha, w>) = 1/|det2(m_k, m_k1)|. Requires <alpha, m_k>, <alpha, m_k1>
/// to be integers. Throws NotFound when no such point exists.
IntVec2 find_w(const IntVec2& m_k, const IntVec2& m_k1, const RatVec2& alpha);

/// Least common denominator N of alpha's coordinates; {x : <alpha,x> in Z} has index N.
Integer common_denominator(const RatVec2& alpha);

/// A basis of the lattice {x in Z^2 : <alpha, x> in Z}.
std::pair<IntVec2, IntVec2> integer_value_lattice(const RatVec2& alpha);

/// {x in Z^2 : <alpha, x> in Z} == span_Z(b, c), checked through in_span on a basis.
bool integer_values_equal_span(const RatVec2& alpha, const IntVec2& b, const IntVec2& c);

/// Canonical representative of +-m: first nonzero coordinate positive.
IntVec2 canonical(const IntVec2& m);

std::string to_string(const IntVec2& m);

}  // namespace dioph
