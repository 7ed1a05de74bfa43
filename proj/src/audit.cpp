#include <array>
#include <sstream>

#include "dioph/errors.hpp"
#include "dioph/verify.hpp"

namespace dioph {

bool AuditReport::pass() const { return !first_failure().has_value(); }

std::optional<std::string> AuditReport::first_failure() const {
  for (const auto& c : global)
    if (!c.pass) return c.name + ": " + c.witness;
  for (const auto& s : steps) {
    for (const auto& c : s.checks)
      if (!c.pass) return "k=" + std::to_string(s.k) + " " + c.name + ": " + c.witness;
  }
  return std::nullopt;
}

namespace {

const QuadReal& gam() { return gamma_constant(); }

std::string vec(const RatVec2& a) { return "(" + to_string(a.x1) + ", " + to_string(a.x2) + ")"; }

bool same_state(const StepState& x, const StepState& y, std::string& why) {
  std::ostringstream os;
  if (!(x.m_k == y.m_k)) os << "m_k " << to_string(x.m_k) << " vs " << to_string(y.m_k) << "; ";
  if (!(x.m_k1 == y.m_k1)) os << "m_k1 " << to_string(x.m_k1) << " vs " << to_string(y.m_k1) << "; ";
  if (!(x.alpha == y.alpha)) os << "alpha " << vec(x.alpha) << " vs " << vec(y.alpha) << "; ";
  if (x.delta != y.delta) os << "delta " << x.delta << " vs " << y.delta << "; ";
  if (x.offset != y.offset || x.lift != y.lift)
    os << "offset/lift " << x.offset << "/" << x.lift << " vs " << y.offset << "/" << y.lift << "; ";
  if (x.R_lower != y.R_lower || x.R_upper != y.R_upper) os << "R enclosure differs; ";
  if (x.psi_hat.value != y.psi_hat.value)
    os << "psi_hat " << to_string(x.psi_hat.value) << " vs " << to_string(y.psi_hat.value) << "; ";
  why = os.str();
  return why.empty();
}

// Theorem band at a point: psi - 4 gamma psi^2 < e |m|^2 <= psi + gamma psi^2.
struct Band {
  QuadReal lower, upper, left, right;
  bool pass;
};

Band band(const Rational& psi, const Rational& normalized) {
  QuadReal p(psi);
  QuadReal p2(psi * psi);
  Band b;
  b.lower = p - QuadReal(4) * gam() * p2;
  b.upper = p + gam() * p2;
  b.left = QuadReal(normalized) - b.lower;
  b.right = b.upper - QuadReal(normalized);
  b.pass = quad_sign(b.left) > 0 && quad_sign(b.right) >= 0;
  return b;
}

std::array<RatVec2, 8> probe_directions() {
  return {RatVec2{1, 0}, RatVec2{-1, 0}, RatVec2{0, 1}, RatVec2{0, -1},
          RatVec2{Rational(3, 5), Rational(4, 5)}, RatVec2{Rational(-3, 5), Rational(4, 5)},
          RatVec2{Rational(3, 5), Rational(-4, 5)}, RatVec2{Rational(-3, 5), Rational(-4, 5)}};
}

CheckResult check(std::string name, bool ok, std::string witness = {}) {
  return {std::move(name), ok, ok ? std::string() : std::move(witness)};
}

}  // namespace

AuditReport audit_trace(const ConstructionTrace& trace, const Integer& budget, const AuditOptions& options) {
  AuditReport rep;
  rep.K = static_cast<long>(trace.steps.size());
  rep.budget = budget;
  const auto& st = trace.steps;

  try {
    check_admissible(trace.psi_spec);
    rep.global.push_back(check("admissible", true));
  } catch (const Error& e) {
    rep.global.push_back(check("admissible", false, e.what()));
  }
  if (st.empty()) {
    rep.global.push_back(check("nonempty", false, "trace has no steps"));
    return rep;
  }

  bool chain_ok = true;
  std::string chain_w;
  for (size_t i = 0; i < st.size(); ++i) {
    if (st[i].k != static_cast<long>(i) + 1) {
      chain_ok = false;
      chain_w = "step " + std::to_string(i) + " has k=" + std::to_string(st[i].k);
      break;
    }
    if (i + 1 < st.size() && !(st[i + 1].m_k == st[i].m_k1)) {
      chain_ok = false;
      chain_w = "k=" + std::to_string(i + 2) + ": m_k " + to_string(st[i + 1].m_k) + " != previous m_k1 " +
                to_string(st[i].m_k1);
      break;
    }
  }
  rep.global.push_back(check("chain", chain_ok, chain_w));

  // Replay from the base case with the recorded branch bits, offsets and lifts.
  BranchTape tape(trace.branch);
  std::vector<PsiValue> psis;
  {
    PsiValue psi1 = psi_for_step(trace.psi_spec, trace.mode, 1, IntVec2(1, 0), std::nullopt);
    try {
      StepState base = base_case(psi1, tape);
      std::string why;
      bool same = same_state(base, st[0], why);
      rep.global.push_back(check("replay-base", same, why));
    } catch (const Error& e) {
      rep.global.push_back(check("replay-base", false, e.what()));
    }
  }

  const RatVec2& alpha_final = st.back().alpha;
  for (size_t i = 0; i < st.size(); ++i) {
    const StepState& s = st[i];
    const StepState* prev = i > 0 ? &st[i - 1] : nullptr;
    StepAudit sa;
    sa.k = s.k;
    sa.sq_norm = s.m_k.sq_norm();
    sa.psi_hat = s.psi_hat.value;
    Integer d = det2(s.m_k, s.m_k1);
    sa.det_ratio = sa.sq_norm == 0 ? Rational(0) : make_rational(abs(d), sa.sq_norm);

    std::optional<PsiValue> prev_psi = psis.empty() ? std::nullopt : std::optional<PsiValue>(psis.back());
    PsiValue psi = psi_for_step(trace.psi_spec, trace.mode, s.k, s.m_k, prev_psi);
    psis.push_back(psi);
    sa.checks.push_back(check("psi-hat", psi.value == s.psi_hat.value,
                              "recorded " + to_string(s.psi_hat.value) + ", recomputed " + to_string(psi.value)));

    sa.flags = compute_checks(s, prev);
    const std::array<std::pair<const char*, bool>, 6> flags{{{"c1", sa.flags.c1},
                                                              {"c2", sa.flags.c2},
                                                              {"c3", sa.flags.c3},
                                                              {"c4", sa.flags.c4},
                                                              {"c5", sa.flags.c5},
                                                              {"c6", sa.flags.c6}}};
    for (const auto& [name, ok] : flags)
      sa.checks.push_back(check(name, ok, "m_k=" + to_string(s.m_k) + ", m_k1=" + to_string(s.m_k1)));
    sa.checks.push_back(check("recorded-flags", sa.flags == s.checks, "recorded check flags differ from recomputation"));

    if (d != 0 && !s.m_k1.is_zero()) {
      auto [lo, hi] = radius_enclosure(s.m_k1, d);
      sa.checks.push_back(check("R-enclosure", lo == s.R_lower && hi == s.R_upper,
                                "recorded [" + to_string(s.R_lower) + ", " + to_string(s.R_upper) + "]"));
    } else {
      sa.checks.push_back(check("R-enclosure", false, "degenerate pair"));
    }

    // Distances from alpha_k to half-integer lines <x, a> = j/2 are multiples of
    // 1/(2 |a| N) with N = |det(m_k, m_k1)|; checked on squares.
    if (d != 0) {
      Integer n = abs(d);
      bool ok = true;
      std::string w;
      for (const IntVec2& a : {s.m_k, s.m_k1, IntVec2(s.m_k + s.m_k1), IntVec2(1, 0), IntVec2(0, 1)}) {
        Rational v = inner(s.alpha, a);
        Rational lam = Rational(nearest_integer(2 * v)) / 2;
        Rational dist2 = (v - lam) * (v - lam) / Rational(a.sq_norm());
        Rational scaled = dist2 * Rational(4 * a.sq_norm() * n * n);
        if (scaled.get_den() != 1 || mpz_perfect_square_p(scaled.get_num_mpz_t()) == 0) {
          ok = false;
          w = "a=" + to_string(a) + ": dist^2 * 4|a|^2 N^2 = " + to_string(scaled);
          break;
        }
      }
      sa.checks.push_back(check("divisibility", ok, w));
    }

    if (i + 1 < st.size()) {
      const StepState& nx = st[i + 1];
      PsiValue psi_next = psi_for_step(trace.psi_spec, trace.mode, s.k + 1, s.m_k1, psi);
      try {
        StepState re = replay_step(s, psi_next, tape, nx.offset, nx.lift, trace.selection);
        std::string why;
        bool same = same_state(re, nx, why);
        sa.checks.push_back(check("replay", same, why));
      } catch (const Error& e) {
        sa.checks.push_back(check("replay", false, e.what()));
      }

      Integer d_next = det2(nx.m_k, nx.m_k1);
      if (d_next != 0 && d != 0 && s.m_k1 == nx.m_k) {
        auto [l1, l2] = cramer(nx.m_k1, s.m_k, s.m_k1);
        sa.checks.push_back(check("sign-law", sgn(l1) == s.delta,
                                  "lambda1=" + to_string(l1) + ", delta=" + std::to_string(s.delta)));
        Rational ts = dist_to_z(inner(nx.alpha, s.m_k)) * Rational(abs(d_next));
        sa.checks.push_back(check("triple-switch", ts == 1, "||<alpha_k1, m_k>|| |det| = " + to_string(ts)));
        Rational da = inner(nx.alpha, s.m_k) - inner(s.alpha, s.m_k);
        Rational r1sq = 1 / Rational(4 * d_next * d_next * nx.m_k1.sq_norm());
        Rational r0sq = 1 / Rational(4 * d * d * s.m_k1.sq_norm());
        bool hp = sgn(da) * s.delta < 0 && r1sq < da * da / Rational(sa.sq_norm);
        sa.checks.push_back(check("half-plane", hp, "delta <alpha_k1 - alpha_k, m_k> = " + to_string(da * s.delta)));
        Rational dx = nx.alpha.x1 - s.alpha.x1;
        Rational dy = nx.alpha.x2 - s.alpha.x2;
        Rational x = dx * dx + dy * dy;
        Rational rest = r0sq - x - r1sq;
        bool nest = sgn(rest) > 0 && 4 * x * r1sq < rest * rest;
        sa.checks.push_back(check("nesting", nest, "|alpha_k1 - alpha_k|^2 = " + to_string(x)));
      } else {
        sa.checks.push_back(check("sign-law", false, "degenerate or broken chain"));
      }
    }

    // Theorem band at the final anchor, and on probes of Omega_{k+1}.
    if (s.k <= rep.K - 2 && !s.m_k.is_zero()) {
      Rational ne = normalized_error(alpha_final, s.m_k);
      Band b = band(s.psi_hat.value, ne);
      sa.normalized_err = ne;
      sa.lower_band = b.lower;
      sa.upper_band = b.upper;
      sa.margin_left = b.left;
      sa.margin_right = b.right;
      sa.theorem_pass = b.pass;
      sa.checks.push_back(check("theorem", b.pass, "normalized error " + to_string(ne) + " outside (" +
                                                       to_string(b.lower) + ", " + to_string(b.upper) + "]"));
    }
    if (options.probes && i + 1 < st.size() && !s.m_k.is_zero()) {
      const StepState& om = st[i + 1];
      bool ok = true;
      std::string w;
      std::vector<RatVec2> pts{om.alpha};
      for (RatVec2 u : probe_directions()) {
        if (sgn(inner(u, om.m_k)) * om.delta > 0) u = RatVec2{-u.x1, -u.x2};
        pts.push_back(RatVec2{om.alpha.x1 + om.R_lower * u.x1, om.alpha.x2 + om.R_lower * u.x2});
      }
      for (const auto& p : pts) {
        Band b = band(s.psi_hat.value, normalized_error(p, s.m_k));
        if (!b.pass) {
          ok = false;
          w = "probe " + vec(p);
          break;
        }
      }
      sa.checks.push_back(check("theorem-probes", ok, w));
    }
    rep.steps.push_back(std::move(sa));
  }

  rep.global.push_back(check("branch", tape.consumed() == trace.branch,
                             "replay consumed '" + tape.consumed() + "', trace records '" + trace.branch + "'"));
  Box box = enclosure_of(st.back());
  rep.global.push_back(check("final-enclosure", box == trace.final_enclosure, "box differs from alpha_K +- R_K"));

  // Oracle: records of alpha_K up to |m_J|^2 must be +-m_1, ..., +-m_J.
  long J = 0;
  for (long j = 1; j <= rep.K - 2; ++j)
    if (st[static_cast<size_t>(j - 1)].m_k.sq_norm() <= budget) J = j;
  rep.oracle_depth = J;
  if (J >= 1) {
    Integer bound = st[static_cast<size_t>(J - 1)].m_k.sq_norm();
    BestApproxResult res = best_approximations(alpha_final, bound, options.enumeration);
    rep.oracle_stop = res.zero_at;
    long match = 0;
    while (match < J && match < static_cast<long>(res.records.size())) {
      const auto& r = res.records[static_cast<size_t>(match)];
      const IntVec2& m = st[static_cast<size_t>(match)].m_k;
      if (!(r.m == canonical(m)) || r.err != dist_to_z(inner(alpha_final, m))) break;
      ++match;
    }
    rep.prefix_match = match;
    for (long j = 0; j < match; ++j) rep.steps[static_cast<size_t>(j)].oracle_verified = true;
    std::string w;
    if (match < static_cast<long>(res.records.size()) && match < J) {
      w = "record " + std::to_string(match + 1) + " is " + to_string(res.records[static_cast<size_t>(match)].m) +
          ", trace has " + to_string(canonical(st[static_cast<size_t>(match)].m_k));
    } else if (res.zero_at) {
      w = "zero error at " + to_string(*res.zero_at);
    } else if (static_cast<long>(res.records.size()) != J) {
      w = std::to_string(res.records.size()) + " records, expected " + std::to_string(J);
    }
    rep.global.push_back(check("oracle-prefix", w.empty() && match == J, w));
  }
  return rep;
}

}  // namespace dioph
