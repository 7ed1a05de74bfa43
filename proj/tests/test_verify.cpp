#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <random>

#include "dioph/errors.hpp"
#include "dioph/verify.hpp"

using namespace dioph;

namespace {

Rational r(long n, long d = 1) { return make_rational(n, d); }

// Records straight from the definition, quadratic in the number of points.
// Errors are compared as residues over the common denominator of alpha.
BestApproxResult brute(const RatVec2& alpha, long bound) {
  long den = Integer(lcm(alpha.x1.get_den(), alpha.x2.get_den())).get_si();
  long p1 = Rational(alpha.x1 * den).get_num().get_si() % den;
  long p2 = Rational(alpha.x2 * den).get_num().get_si() % den;
  struct P {
    long x1, x2, s, e;
  };
  std::vector<P> pts;
  long xm = 0;
  while ((xm + 1) * (xm + 1) <= bound) ++xm;
  for (long x1 = 0; x1 <= xm; ++x1)
    for (long x2 = -xm; x2 <= xm; ++x2) {
      long s = x1 * x1 + x2 * x2;
      if (s > bound || (x1 == 0 && x2 <= 0)) continue;
      long v = ((p1 * x1 + p2 * x2) % den + den) % den;
      pts.push_back({x1, x2, s, std::min(v, den - v)});
    }
  std::sort(pts.begin(), pts.end(), [](const P& a, const P& b) {
    if (a.s != b.s) return a.s < b.s;
    if (a.x1 != b.x1) return a.x1 < b.x1;
    return a.x2 < b.x2;
  });
  BestApproxResult res;
  long zero_shell = -1;
  for (const auto& p : pts)
    if (p.e == 0) {
      res.zero_at = IntVec2(p.x1, p.x2);
      zero_shell = p.s;
      break;
    }
  for (const auto& m : pts) {
    if (zero_shell >= 0 && m.s >= zero_shell) break;
    bool ok = true;
    for (const auto& x : pts) {
      if (x.s > m.s) break;
      if (x.s < m.s ? x.e <= m.e : x.e < m.e) ok = false;
    }
    if (ok) {
      Rational e = make_rational(m.e, den);
      res.records.push_back({IntVec2(m.x1, m.x2), Integer(m.s), e, e * Rational(m.s)});
    }
  }
  return res;
}

RatVec2 random_alpha(std::mt19937_64& rng, long max_den) {
  std::uniform_int_distribution<long> den(1, max_den);
  long d1 = den(rng), d2 = den(rng);
  std::uniform_int_distribution<long> n1(0, d1 - 1), n2(0, d2 - 1);
  return RatVec2{make_rational(n1(rng), d1), make_rational(n2(rng), d2)};
}

void same(const BestApproxResult& a, const BestApproxResult& b) {
  REQUIRE(a.records.size() == b.records.size());
  for (size_t i = 0; i < a.records.size(); ++i) CHECK(a.records[i] == b.records[i]);
  CHECK(a.zero_at.has_value() == b.zero_at.has_value());
  if (a.zero_at && b.zero_at) CHECK(*a.zero_at == *b.zero_at);
}

}  // namespace

TEST_CASE("normalized error") {
  CHECK(normalized_error({r(2, 7), r(3, 7)}, {1, 0}) == r(2, 7));
  CHECK(normalized_error({r(2, 7), r(3, 7)}, {1, 1}) == r(4, 7));
  CHECK_THROWS_AS(normalized_error({r(2, 7), r(3, 7)}, {0, 0}), PreconditionFailed);
}

TEST_CASE("small hand examples") {
  BestApproxResult a = best_approximations({r(2, 7), r(3, 7)}, Integer(2));
  REQUIRE(!a.records.empty());
  CHECK(a.records[0].m == IntVec2{1, 0});
  CHECK(a.records[0].err == r(2, 7));
  CHECK(a.records[0].normalized == r(2, 7));
  same(a, brute({r(2, 7), r(3, 7)}, 2));

  BestApproxResult z = best_approximations({0, r(1, 3)}, Integer(1000));
  CHECK(z.records.empty());
  REQUIRE(z.zero_at);
  CHECK(*z.zero_at == IntVec2{1, 0});

  CHECK_THROWS_AS(best_approximations({r(1, 3), r(1, 5)}, Integer(0)), PreconditionFailed);
  CHECK_THROWS_AS(best_approximations({r(1, 3), r(1, 5)}, Integer(1) << 63), PreconditionFailed);
}

TEST_CASE("reference scan agrees with the definition") {
  std::mt19937_64 rng(61);
  for (int i = 0; i < 150; ++i) {
    RatVec2 a = random_alpha(rng, 500);
    same(best_approximations_reference(a, Integer(300)), brute(a, 300));
  }
}

TEST_CASE("screened enumeration agrees with the reference on 1e3 random forms") {
  std::mt19937_64 rng(62);
  std::uniform_int_distribution<long> b(1, 10000);
  for (int i = 0; i < 1000; ++i) {
    RatVec2 a = random_alpha(rng, 10000);
    Integer bound(b(rng));
    same(best_approximations(a, bound), best_approximations_reference(a, bound));
  }
}

TEST_CASE("kernels, thread counts and screening all give the same records") {
  std::mt19937_64 rng(63);
  for (int i = 0; i < 20; ++i) {
    RatVec2 a = random_alpha(rng, 100000000);
    Integer bound(300000);
    BestApproxResult base = best_approximations(a, bound, EnumOptions{false, 1, Kernel::Scalar});
    same(best_approximations(a, bound, EnumOptions{true, 1, Kernel::Scalar}), base);
    same(best_approximations(a, bound, EnumOptions{true, 4, Kernel::Avx2}), base);
    same(best_approximations(a, bound, EnumOptions{true, 3, Kernel::Auto}), base);
  }
}

TEST_CASE("records are invariant under symmetries of the form") {
  std::mt19937_64 rng(64);
  for (int i = 0; i < 100; ++i) {
    RatVec2 a = random_alpha(rng, 3000);
    Integer bound(5000);
    BestApproxResult base = best_approximations(a, bound);
    // alpha -> -alpha and integer shifts leave every error unchanged.
    same(best_approximations({-a.x1 + 3, -a.x2 - 2}, bound), base);
    // Swapping coordinates maps records to swapped (re-canonicalised) vectors.
    BestApproxResult sw = best_approximations({a.x2, a.x1}, bound);
    REQUIRE(sw.records.size() == base.records.size());
    for (const auto& rec : base.records) {
      IntVec2 img = canonical(IntVec2{rec.m.x2, rec.m.x1});
      bool found = false;
      for (const auto& s : sw.records) found = found || (s.m == img && s.err == rec.err);
      CHECK(found);
    }
  }
}

TEST_CASE("thread override from the environment") {
  setenv("DIOPHANTINE_THREADS", "3", 1);
  CHECK(resolve_threads(8) == 3);
  unsetenv("DIOPHANTINE_THREADS");
  CHECK(resolve_threads(5) == 5);
  CHECK(resolve_threads(0) >= 1);
}

TEST_CASE("audit of a healthy trace") {
  ConstructionTrace t = run_construction(PsiSpec::constant(r(1, 28)), 8, Mode::Norm, "0");
  AuditReport rep = audit_trace(t, Integer(100000000));
  CHECK(rep.pass());
  CHECK_FALSE(rep.first_failure());
  CHECK(rep.prefix_match >= 6);
  CHECK(rep.steps.size() == 8);
  for (const auto& s : rep.steps) {
    if (s.k <= 6) {
      REQUIRE(s.normalized_err);
      CHECK(s.theorem_pass);
    }
  }
}

TEST_CASE("audit catches a perturbed anchor") {
  ConstructionTrace t = run_construction(PsiSpec::constant(r(1, 28)), 8, Mode::Norm, "0");
  t.steps[4].alpha.x1 += r(1, 1000000);
  AuditReport rep = audit_trace(t, Integer(100000000));
  CHECK_FALSE(rep.pass());
  auto f = rep.first_failure();
  REQUIRE(f);
  bool triple = false;
  for (const auto& s : rep.steps)
    if (s.k == 4 || s.k == 5)
      for (const auto& c : s.checks) triple = triple || (c.name == "triple-switch" && !c.pass && !c.witness.empty());
  CHECK(triple);
}

TEST_CASE("audit of the smallest trace") {
  ConstructionTrace t = run_construction(PsiSpec::constant(r(1, 28)), 2, Mode::Norm, "0");
  AuditReport rep = audit_trace(t, Integer(1000));
  CHECK(rep.pass());
  CHECK(rep.steps.size() == 2);
}
