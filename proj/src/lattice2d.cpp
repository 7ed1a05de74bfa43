#include "dioph/lattice2d.hpp"

#include <algorithm>

#include "dioph/errors.hpp"

namespace dioph {

Integer IntVec2::sup_norm() const {
  Integer a = abs(x1);
  Integer b = abs(x2);
  return a > b ? a : b;
}

Integer det2(const IntVec2& u, const IntVec2& v) { return u.x1 * v.x2 - u.x2 * v.x1; }

Integer inner(const IntVec2& u, const IntVec2& v) { return u.x1 * v.x1 + u.x2 * v.x2; }

Rational inner(const RatVec2& a, const IntVec2& m) {
  return a.x1 * Rational(m.x1) + a.x2 * Rational(m.x2);
}

IntVec2 perp(const IntVec2& m, const IntVec2& toward) {
  if (m.is_zero()) throw DegenerateDirection("perp of the zero vector");
  IntVec2 left{-m.x2, m.x1};
  int s = sgn(inner(left, toward));
  if (s == 0) throw DegenerateDirection(to_string(toward) + " is parallel to " + to_string(m));
  return s > 0 ? left : -left;
}

std::pair<Rational, Rational> cramer(const IntVec2& x, const IntVec2& b, const IntVec2& c) {
  Integer d = det2(b, c);
  if (d == 0) throw SingularBasis(to_string(b) + ", " + to_string(c) + " are collinear");
  return {make_rational(det2(x, c), d), make_rational(det2(b, x), d)};
}

bool in_span(const IntVec2& x, const IntVec2& b, const IntVec2& c) {
  auto [s, t] = cramer(x, b, c);
  return s.get_den() == 1 && t.get_den() == 1;
}

std::vector<IntVec2> parallelogram_points(const IntVec2& u, const IntVec2& v) {
  Integer d = det2(u, v);
  if (d == 0) throw SingularBasis("degenerate parallelogram");
  auto lo_hi = [](std::initializer_list<Integer> xs) {
    return std::pair{std::min(xs), std::max(xs)};
  };
  auto [x_lo, x_hi] = lo_hi({Integer(0), u.x1, v.x1, Integer(u.x1 + v.x1)});
  auto [y_lo, y_hi] = lo_hi({Integer(0), u.x2, v.x2, Integer(u.x2 + v.x2)});
  std::vector<IntVec2> out;
  for (Integer x = x_lo; x <= x_hi; ++x) {
    for (Integer y = y_lo; y <= y_hi; ++y) {
      IntVec2 p{x, y};
      auto [s, t] = cramer(p, u, v);
      if (sgn(s) >= 0 && s < 1 && sgn(t) >= 0 && t < 1) out.push_back(p);
    }
  }
  return out;
}

Integer common_denominator(const RatVec2& alpha) {
  Integer n;
  mpz_lcm(n.get_mpz_t(), alpha.x1.get_den_mpz_t(), alpha.x2.get_den_mpz_t());
  return n;
}

namespace {

Integer mod_inverse(const Integer& a, const Integer& n) {
  Integer r;
  if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), n.get_mpz_t()) == 0)
    throw NotFound("no modular inverse");
  return r;
}

}  // namespace

IntVec2 find_w(const IntVec2& m_k, const IntVec2& m_k1, const RatVec2& alpha) {
  Integer d = det2(m_k, m_k1);
  if (d == 0) throw SingularBasis("find_w: collinear basis");
  if (inner(alpha, m_k).get_den() != 1 || inner(alpha, m_k1).get_den() != 1)
    throw PreconditionFailed("find_w: <alpha, m> must be integral on the basis");
  Integer ad = abs(d);
  // The values <alpha, x> mod 1 form (1/N)Z/Z; 1/|det| is attained only when N = |det| > 1.
  Integer n = common_denominator(alpha);
  if (ad < 2 || n != ad) throw NotFound("find_w: no point with fractional part 1/" + ad.get_str());

  Integer p1 = to_integer(alpha.x1 * Rational(n));
  Integer p2 = to_integer(alpha.x2 * Rational(n));
  Integer g, u, v;
  mpz_gcdext(g.get_mpz_t(), u.get_mpz_t(), v.get_mpz_t(), p1.get_mpz_t(), p2.get_mpz_t());
  Integer t = mod_inverse(g, n);
  IntVec2 w0{u * t, v * t};

  auto [s, r] = cramer(w0, m_k, m_k1);
  IntVec2 w = w0 - floor_of(s) * m_k - floor_of(r) * m_k1;
  if (frac(inner(alpha, w)) != Rational(1, 1) / Rational(ad))
    throw NotFound("find_w: reduction lost the target residue");
  return w;
}

std::pair<IntVec2, IntVec2> integer_value_lattice(const RatVec2& alpha) {
  // Hermite basis (g, t), (0, N/g) of {x : p1 x1 + p2 x2 = 0 mod N}.
  Integer n = common_denominator(alpha);
  Integer p1 = to_integer(alpha.x1 * Rational(n));
  Integer p2 = to_integer(alpha.x2 * Rational(n));
  Integer g;
  mpz_gcd(g.get_mpz_t(), p2.get_mpz_t(), n.get_mpz_t());
  Integer h = n / g;
  Integer t = 0;
  if (h > 1) {
    Integer a2 = p2 / g;
    Integer inv = mod_inverse(((a2 % h) + h) % h, h);
    Integer mp1 = -p1;
    t = ((mp1 * inv) % h + h) % h;
  }
  return {IntVec2{g, t}, IntVec2{Integer(0), h}};
}

bool integer_values_equal_span(const RatVec2& alpha, const IntVec2& b, const IntVec2& c) {
  if (det2(b, c) == 0) return false;
  if (inner(alpha, b).get_den() != 1 || inner(alpha, c).get_den() != 1) return false;
  auto [e1, e2] = integer_value_lattice(alpha);
  return in_span(e1, b, c) && in_span(e2, b, c);
}

IntVec2 canonical(const IntVec2& m) {
  int s = sgn(m.x1) != 0 ? sgn(m.x1) : sgn(m.x2);
  return s < 0 ? -m : m;
}

std::string to_string(const IntVec2& m) {
  return "(" + m.x1.get_str() + ", " + m.x2.get_str() + ")";
}

}  // namespace dioph
