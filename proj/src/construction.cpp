#include "dioph/construction.hpp"

#include <functional>

#include "dioph/errors.hpp"

namespace dioph {

std::string mode_name(Mode mode) { return mode == Mode::Norm ? "norm" : "index"; }

Mode parse_mode(const std::string& name) {
  if (name == "norm") return Mode::Norm;
  if (name == "index") return Mode::Index;
  throw ParseError("unknown mode '" + name + "' (expected norm or index)");
}

std::string selection_name(Selection s) { return s == Selection::Strict ? "strict" : "search"; }

Selection parse_selection(const std::string& name) {
  if (name == "strict") return Selection::Strict;
  if (name == "search") return Selection::Search;
  throw ParseError("unknown selection '" + name + "' (expected strict or search)");
}

BranchTape::BranchTape(std::string seed) : seed_(std::move(seed)) {
  for (char ch : seed_)
    if (ch != '0' && ch != '1') throw ParseError("branch seed must be a bitstring");
}

int BranchTape::take() {
  int bit = pos_ < seed_.size() ? seed_[pos_] - '0' : 0;
  ++pos_;
  consumed_.push_back(static_cast<char>('0' + bit));
  return bit;
}

namespace {

QuadReal q_of(const Integer& x) { return QuadReal(Rational(x)); }

const QuadReal& gam() { return gamma_constant(); }

Rational ratio(const Integer& num, const Integer& den) { return make_rational(num, den); }

// (2 gamma psi)^{-1}
QuadReal half_inv_gamma_psi(const Rational& psi) { return gam().inverse() / QuadReal(2 * psi); }

QuadRadical dot(const RadVec2& v, const IntVec2& u) {
  return {v[0].p * q_of(u.x1) + v[1].p * q_of(u.x2), v[0].q * q_of(u.x1) + v[1].q * q_of(u.x2), v[0].r};
}

[[noreturn]] void fail(const std::string& check, long k, const std::string& detail) {
  throw StepVerificationFailed(check, "k=" + std::to_string(k) + ": " + detail);
}

// gamma < |det| / n < 3 gamma
bool det_band(const Integer& det, const Integer& n) {
  QuadReal x(ratio(abs(det), n));
  return gam() < x && x < QuadReal(3) * gam();
}

// (2 gamma psi)^{-1} <= rho < (gamma psi)^{-1}, returned as {lower ok, upper ok}
std::pair<bool, bool> growth_band(const Rational& rho, const Rational& psi) {
  QuadReal t = gam() * QuadReal(psi * rho);
  return {QuadReal(2) * t >= QuadReal(1), t < QuadReal(1)};
}

// psi^{-1} <= |det| / n < psi^{-1} + 3 gamma
bool det_growth_band(const Integer& det, const Integer& n, const Rational& psi) {
  Rational x = ratio(abs(det), n);
  Rational inv = 1 / psi;
  return x >= inv && QuadReal(x) < QuadReal(inv) + QuadReal(3) * gam();
}

// sqrt(x) + sqrt(y) < sqrt(z) for non-negative rationals.
bool sqrt_sum_less(const Rational& x, const Rational& y, const Rational& z) {
  Rational s = z - x - y;
  return sgn(s) > 0 && 4 * x * y < s * s;
}

Rational r_squared(const IntVec2& m, const Integer& det) {
  return 1 / Rational(4 * det * det * m.sq_norm());
}

}  // namespace

LemmaPoint lemma_point(const IntVec2& m_k, const IntVec2& m_k1, int delta, const Rational& psi_k,
                       const Rational& psi_next, bool clamp) {
  IntVec2 mp = perp(m_k1, m_k);
  Rational a = ratio(m_k.sq_norm(), m_k1.sq_norm()) / psi_k;
  QuadReal r = half_inv_gamma_psi(psi_next) - QuadReal(a * a);
  LemmaPoint out;
  out.radicand = r;
  if (quad_sign(r) < 0) {
    if (!clamp)
      throw StepVerificationFailed("radicand", "(2 gamma psi_next)^{-1} - A^2 = " + to_string(r) + " < 0");
    r = QuadReal(0);
    out.clamped = true;
  }
  Rational ad = a * delta;
  out.v[0] = {QuadReal(ad * Rational(mp.x1)), q_of(-m_k1.x1), r};
  out.v[1] = {QuadReal(ad * Rational(mp.x2)), q_of(-m_k1.x2), r};
  return out;
}

NextPoint select_m_next(const IntVec2& w, const IntVec2& m_k, const IntVec2& m_k1, const RadVec2& v,
                        int delta, long offset, long lift) {
  Integer d = det2(m_k, m_k1);
  if (d == 0) throw SingularBasis("select_m_next: collinear basis");
  Integer ad = abs(d);
  IntVec2 mp = perp(m_k1, m_k);
  IntVec2 dmp = Integer(delta) * mp;
  Integer n1 = m_k1.sq_norm();

  QuadRadical v1 = dot(v, dmp);
  QuadRadical v2 = dot(v, m_k1);
  // <x, delta mp> = delta <w, mp> + a delta |det|, so n = a*delta is a ceiling.
  Integer n = radical_ceil(v1.plus(q_of(-inner(w, dmp))).scaled(QuadReal(Rational(1) / Rational(ad))));
  IntVec2 base = w + Integer(delta * n) * m_k;
  Integer b = radical_floor(v2.plus(q_of(-inner(base, m_k1))).scaled(QuadReal(make_rational(1, n1))));
  IntVec2 x0 = base + b * m_k1;

  auto obj1 = [&](const IntVec2& x) { return radical_sign((-v1).plus(q_of(inner(x, dmp)))); };
  auto obj2 = [&](const IntVec2& x) { return radical_sign(v2.plus(q_of(-inner(x, m_k1)))); };
  if (obj1(x0) < 0 || obj1(x0 - Integer(delta) * m_k) >= 0 || obj2(x0) < 0 || obj2(x0 + m_k1) >= 0)
    throw Error("select_m_next: minimality certificate failed");

  IntVec2 x = x0 + Integer(lift * delta) * m_k - Integer(offset) * m_k1;
  auto [l1, l2] = cramer(x, m_k, m_k1);
  if (sgn(l1) != delta)
    throw SignLawViolated("coefficient of m_k is " + to_string(l1) + ", delta is " + std::to_string(delta));
  return {x, l1, l2};
}

AlphaNext solve_alpha_next(const RatVec2& alpha_k, const IntVec2& m_k1, const IntVec2& m_k2,
                           const std::optional<IntVec2>& previous) {
  Integer d = det2(m_k1, m_k2);
  if (d == 0) throw SingularSystem(to_string(m_k1) + " and " + to_string(m_k2) + " are collinear");
  Rational r1 = inner(alpha_k, m_k1);
  Rational x = inner(alpha_k, m_k2);
  AlphaNext out;
  out.rounding_tie = frac(x) == Rational(1, 2);
  Rational r2(nearest_integer(x));
  Rational dd(d);
  out.alpha.x1 = (r1 * Rational(m_k2.x2) - r2 * Rational(m_k1.x2)) / dd;
  out.alpha.x2 = (r2 * Rational(m_k1.x1) - r1 * Rational(m_k2.x1)) / dd;
  if (inner(out.alpha, m_k1) != r1 || inner(out.alpha, m_k2) != r2)
    throw SingularSystem("back-substitution mismatch");

  if (previous) {
    const IntVec2& b = *previous;
    const IntVec2& c = m_k1;
    const IntVec2& a = m_k2;
    Integer dbc = det2(b, c);
    bool hypotheses = dbc != 0 && integer_values_equal_span(alpha_k, b, c) &&
                      dist_to_z(inner(alpha_k, a)) == make_rational(1, abs(dbc));
    if (hypotheses) {
      out.triple_switch_checked = true;
      if (!integer_values_equal_span(out.alpha, a, c))
        throw TripleSwitchViolated("integer values of beta do not span (" + to_string(a) + ", " +
                                   to_string(c) + ")");
      if (dist_to_z(inner(out.alpha, b)) != make_rational(1, abs(d)))
        throw TripleSwitchViolated("||<beta, b>|| = " + to_string(dist_to_z(inner(out.alpha, b))) +
                                   ", expected 1/" + Integer(abs(d)).get_str());
    }
  }
  return out;
}

int half_ball_side(int delta_k, const IntVec2& m_k, const IntVec2& m_k1, BranchTape& tape) {
  int s = sgn(inner(m_k, m_k1));
  if (s > 0) throw PreconditionFailed("half_ball_side: <m_k, m_k1> > 0");
  if (s < 0) return delta_k;
  return tape.take() == 0 ? 1 : -1;
}

std::pair<Rational, Rational> radius_enclosure(const IntVec2& m, const Integer& det) {
  if (det == 0 || m.is_zero()) throw PreconditionFailed("radius_enclosure: degenerate input");
  Integer den = 4 * det * det * m.sq_norm();  // R^2 = 1/den
  long f = 128 + static_cast<long>(mpz_sizeinbase(den.get_mpz_t(), 2) / 2) + 1;
  Integer scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 2, static_cast<unsigned long>(f));
  Integer num = scale * scale;
  Integer q, rem;
  mpz_fdiv_qr(q.get_mpz_t(), rem.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  Integer lo = sqrt(q);
  Integer hi = (rem == 0 && lo * lo == q) ? lo : Integer(lo + 1);
  return {make_rational(lo, scale), make_rational(hi, scale)};
}

Checks compute_checks(const StepState& s, const StepState* prev) {
  Checks c;
  Integer d = det2(s.m_k, s.m_k1);
  Integer n0 = s.m_k.sq_norm();
  Integer n1 = s.m_k1.sq_norm();
  if (n0 == 0 || n1 == 0) return c;
  c.c1 = d != 0 && inner(s.m_k, s.m_k1) <= 0;
  c.c2 = d != 0 && integer_values_equal_span(s.alpha, s.m_k, s.m_k1);
  c.c3 = c.c2 && n0 <= n1;
  c.c4 = d != 0 && det_band(d, n0);
  auto [lo, hi] = growth_band(ratio(n1, n0), s.psi_hat.value);
  c.c5 = lo && hi;
  if (prev == nullptr) {
    c.c6 = true;
  } else {
    Integer np = prev->m_k.sq_norm();
    c.c6 = np != 0 && det_growth_band(d, np, prev->psi_hat.value);
  }
  return c;
}

StepState base_case(const PsiValue& psi1, int delta1) {
  if (delta1 != 1 && delta1 != -1) throw PreconditionFailed("base_case: delta must be +-1");
  const Rational& psi = psi1.value;
  if (sgn(psi) <= 0) throw InadmissiblePsi("psi_1 must be positive");
  const QuadReal& g = gam();
  QuadReal radicand = half_inv_gamma_psi(psi) - g * g;
  if (quad_sign(radicand) < 0)
    throw InadmissiblePsi("base case needs psi_1 <= 1/(2 gamma^3): (2 gamma psi_1)^{-1} - gamma^2 = " +
                          to_string(radicand) + " < 0");
  Integer c = radical_ceil(QuadRadical{QuadReal(0), QuadReal(1), radicand});

  StepState s;
  s.k = 1;
  s.m_k = IntVec2(1, 0);
  s.m_k1 = IntVec2(Integer(-c), Integer(3));
  s.alpha = RatVec2{Rational(0), Rational(1, 3)};
  s.delta = delta1;
  std::tie(s.R_lower, s.R_upper) = radius_enclosure(s.m_k1, det2(s.m_k, s.m_k1));
  s.psi_hat = psi1;
  s.checks = compute_checks(s, nullptr);
  if (!s.checks.c5) throw InadmissiblePsi("base case violates |m_2|^2/|m_1|^2 < (gamma psi_1)^{-1}");
  if (!s.checks.all()) fail("condition", 1, "base case conditions do not hold");
  return s;
}

StepState base_case(const PsiValue& psi1, BranchTape& tape, std::vector<BranchEvent>* events) {
  int bit = tape.take();
  if (events != nullptr) events->push_back({1, "base-side", bit});
  return base_case(psi1, bit == 0 ? 1 : -1);
}

StepState induction_step(const StepState& state, const PsiValue& psi_next, BranchTape& tape,
                         const StepOptions& options, std::vector<BranchEvent>* events) {
  const long k = state.k;
  const Rational& psi_k = state.psi_hat.value;
  if (psi_next.value > psi_k) throw PreconditionFailed("psi_next exceeds psi_k (psi must not increase)");
  if (QuadReal(psi_next.value) > psi_ceiling()) throw PreconditionFailed("psi_next exceeds (9 gamma)^{-1}");

  Checks pre = compute_checks(state, nullptr);
  if (!pre.c1) fail("condition-1", k, "<m_k, m_k1> > 0 or det = 0");
  if (!pre.c2) fail("condition-2", k, "integer values of alpha_k do not span (m_k, m_k1)");
  if (!pre.c3) fail("condition-3", k, "|m_k| > |m_k1|");
  if (!pre.c4) fail("condition-4", k, "|det(m_k, m_k1)|/|m_k|^2 outside (gamma, 3 gamma)");
  if (!pre.c5) fail("condition-5", k, "|m_k1|^2/|m_k|^2 outside [(2 gamma psi)^{-1}, (gamma psi)^{-1})");

  const IntVec2& a = state.m_k;
  const IntVec2& b = state.m_k1;
  IntVec2 w;
  try {
    w = find_w(a, b, state.alpha);
  } catch (const NotFound& e) {
    fail("condition-2", k, e.what());
  }

  LemmaPoint lp;
  try {
    lp = lemma_point(a, b, state.delta, psi_k, psi_next.value, options.clamp_radicand);
  } catch (const StepVerificationFailed& e) {
    fail(e.check(), k, e.detail());
  }

  NextPoint nx;
  try {
    nx = select_m_next(w, a, b, lp.v, state.delta, options.offset, options.lift);
  } catch (const SignLawViolated& e) {
    fail("sign-law", k, e.what());
  }
  const IntVec2& c = nx.m;

  AlphaNext an;
  try {
    an = solve_alpha_next(state.alpha, b, c, a);
  } catch (const TripleSwitchViolated& e) {
    fail("triple-switch", k, e.what());
  }
  if (!an.triple_switch_checked) fail("triple-switch", k, "basis-change hypotheses do not hold");
  if (an.rounding_tie && events != nullptr) events->push_back({k + 1, "round-half-even", 0});

  StepState next;
  next.k = k + 1;
  next.m_k = b;
  next.m_k1 = c;
  next.alpha = an.alpha;
  if (inner(a, b) == 0) {
    next.delta = half_ball_side(state.delta, a, b, tape);
    if (events != nullptr) events->push_back({k + 1, "half-ball-tie", next.delta == 1 ? 0 : 1});
  } else {
    next.delta = half_ball_side(state.delta, a, b, tape);
  }
  Integer d_bc = det2(b, c);
  std::tie(next.R_lower, next.R_upper) = radius_enclosure(c, d_bc);
  next.psi_hat = psi_next;
  next.offset = options.offset;
  next.lift = options.lift;
  next.clamped = lp.clamped;

  Integer na = a.sq_norm();
  Integer nb = b.sq_norm();
  Integer nc = c.sq_norm();
  if (d_bc == 0 || inner(b, c) > 0) fail("statement-1", k, "<m_k1, m_k2> > 0 or collinear");
  if (!integer_values_equal_span(next.alpha, b, c))
    fail("statement-2", k, "integer values of alpha_k1 do not span (m_k1, m_k2)");
  if (nb > nc) fail("statement-3", k, "|m_k2| < |m_k1|");
  auto [lo5, hi5] = growth_band(ratio(nc, nb), psi_next.value);
  if (!lo5) fail("statement-5", k, "lower bound: |m_k2|^2/|m_k1|^2 < (2 gamma psi_k1)^{-1}");
  if (!hi5) fail("statement-5", k, "upper bound: |m_k2|^2/|m_k1|^2 >= (gamma psi_k1)^{-1}");
  Rational dr = ratio(abs(d_bc), na);
  if (dr < 1 / psi_k) fail("statement-6", k, "lower bound: |det(m_k1, m_k2)|/|m_k|^2 < psi_k^{-1}");
  if (!det_growth_band(d_bc, na, psi_k))
    fail("statement-6", k, "upper bound: |det(m_k1, m_k2)|/|m_k|^2 >= psi_k^{-1} + 3 gamma");
  if (!det_band(d_bc, nb)) fail("condition-4-transfer", k, "|det(m_k1, m_k2)|/|m_k1|^2 outside (gamma, 3 gamma)");

  Rational da = inner(next.alpha, a) - inner(state.alpha, a);
  if (sgn(da) * state.delta >= 0) fail("half-plane", k, "alpha_k1 is not strictly inside the half-plane of Omega_k");
  Rational r1sq = r_squared(c, d_bc);
  if (r1sq >= da * da / Rational(na)) fail("half-plane", k, "ball around alpha_k1 crosses the supporting line of Omega_k");
  Rational dx = next.alpha.x1 - state.alpha.x1;
  Rational dy = next.alpha.x2 - state.alpha.x2;
  if (!sqrt_sum_less(dx * dx + dy * dy, r1sq, r_squared(b, det2(a, b))))
    fail("nesting", k, "|alpha_k1 - alpha_k| + R_k1 >= R_k");
  if (dist_to_z(inner(next.alpha, a)) * Rational(abs(d_bc)) != 1)
    fail("triple-switch", k, "||<alpha_k1, m_k>|| * |det(m_k1, m_k2)| != 1");
  // R_k1 |m_k|^3 <= gamma psi_k^2, squared: |m_k|^6 <= 4 det^2 |m_k2|^2 gamma^2 psi_k^4.
  Rational psi2 = psi_k * psi_k;
  if (QuadReal(Rational(na * na * na)) > QuadReal(Rational(4 * d_bc * d_bc * nc) * psi2 * psi2) * gam() * gam())
    fail("theorem-precursor", k, "R_k1 |m_k|^3 > gamma psi_k^2");

  next.checks = compute_checks(next, &state);
  if (!next.checks.all()) fail("checks", k + 1, "recomputed state flags do not all hold");
  return next;
}

PsiValue psi_for_step(const PsiSpec& spec, Mode mode, long k, const IntVec2& m_k,
                      const std::optional<PsiValue>& prev) {
  Integer arg = mode == Mode::Norm ? m_k.sq_norm() : Integer(k) * Integer(k);
  return psi_eval(spec, arg, prev);
}

Box enclosure_of(const StepState& last) {
  return {last.alpha.x1 - last.R_upper, last.alpha.x1 + last.R_upper, last.alpha.x2 - last.R_upper,
          last.alpha.x2 + last.R_upper};
}

StepState replay_step(const StepState& state, const PsiValue& psi_next, BranchTape& tape, long offset,
                      long lift, Selection selection) {
  StepOptions opt;
  opt.clamp_radicand = selection == Selection::Search;
  opt.offset = offset;
  opt.lift = lift;
  return induction_step(state, psi_next, tape, opt);
}

ConstructionTrace run_construction(const PsiSpec& spec, long K, Mode mode, const std::string& seed,
                                   const RunOptions& options) {
  if (K < 2) throw PreconditionFailed("K must be >= 2");
  check_admissible(spec);

  ConstructionTrace trace;
  trace.psi_spec = spec;
  trace.mode = mode;
  trace.selection = options.selection;

  BranchTape tape(seed);
  std::vector<BranchEvent> events;
  PsiValue psi1 = psi_for_step(spec, mode, 1, IntVec2(1, 0), std::nullopt);
  std::vector<StepState> steps{base_case(psi1, tape, &events)};

  const bool search = options.selection == Selection::Search;
  const long max_offset = search ? options.max_offset : 0;
  const long max_lift = search ? options.max_lift : 0;
  long nodes = 0;
  std::optional<StepVerificationFailed> deepest;
  long deepest_k = 0;

  // Depth-first over the candidates of each step; the rule's own point is tried first.
  std::function<bool(BranchTape, std::vector<BranchEvent>)> extend = [&](BranchTape t,
                                                                         std::vector<BranchEvent> ev) {
    if (static_cast<long>(steps.size()) == K) {
      tape = std::move(t);
      events = std::move(ev);
      return true;
    }
    const StepState s = steps.back();
    PsiValue psi_next = psi_for_step(spec, mode, s.k + 1, s.m_k1, s.psi_hat);
    // Lifting grows the determinant and the length; offsets grow the length only.
    for (long lift = 0; lift <= max_lift; ++lift) {
      for (long off = 0; off <= max_offset; ++off) {
        if (++nodes > options.node_budget) return false;
        BranchTape t2 = t;
        std::vector<BranchEvent> ev2 = ev;
        StepOptions opt{search, off, lift};
        try {
          steps.push_back(induction_step(s, psi_next, t2, opt, &ev2));
        } catch (const StepVerificationFailed& e) {
          if (!deepest || s.k >= deepest_k) {
            deepest = e;
            deepest_k = s.k;
          }
          bool upper = e.detail().find("upper bound") != std::string::npos;
          if (upper && e.check() == "statement-6" && off == 0) return false;
          if (upper && (e.check() == "statement-5" || e.check() == "statement-6")) break;
          continue;
        }
        if (extend(t2, ev2)) return true;
        steps.pop_back();
      }
    }
    return false;
  };

  if (!extend(tape, events)) {
    if (nodes > options.node_budget && !deepest)
      throw StepVerificationFailed("search", "node budget exhausted");
    throw *deepest;
  }

  trace.branch = tape.consumed();
  trace.branch_choices = std::move(events);
  trace.steps = std::move(steps);
  trace.final_enclosure = enclosure_of(trace.steps.back());
  return trace;
}

}  // namespace dioph
