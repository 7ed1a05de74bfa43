#pragma once

// Induction engine: base case, one induction step and the driver that iterates
// it. Every hypothesis and conclusion of the step is re-checked exactly.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "dioph/exact.hpp"
#include "dioph/lattice2d.hpp"
#include "dioph/psi.hpp"

namespace dioph {

/// How psi_k is indexed: psi(|m_k|) or psi(k).
enum class Mode { Norm, Index };

std::string mode_name(Mode mode);
Mode parse_mode(const std::string& name);

/// Per-state flags: c1, c2, c4, c5 are the step hypotheses of the same number,
/// c3 is its sufficient arithmetic form (c2 and |m_k| <= |m_{k+1}|) and c6 is
/// the determinant bound of the step that produced the state (true at k = 1).
struct Checks {
  bool c1 = false, c2 = false, c3 = false, c4 = false, c5 = false, c6 = false;

  bool all() const { return c1 && c2 && c3 && c4 && c5 && c6; }
  friend bool operator==(const Checks&, const Checks&) = default;
};

struct StepState {
  long k = 1;
  IntVec2 m_k;
  IntVec2 m_k1;
  RatVec2 alpha;
  int delta = 1;
  Rational R_lower;
  Rational R_upper;
  PsiValue psi_hat;
  /// Position of m_k1 on the selection line, counted from the point the step
  /// rule picks (0) in the direction of -m_k. Always 0 for k = 1.
  long offset = 0;
  /// Extra multiples of delta*m_{k-1} added to m_k1 beyond the rule's point.
  long lift = 0;
  /// The step that produced this state had a negative radicand and built v
  /// with a zero radical part.
  bool clamped = false;
  Checks checks;
};

/// Supplies branch bits in order and records every bit it hands out.
/// Past the end of the seed it yields 0.
class BranchTape {
 public:
  BranchTape() = default;
  explicit BranchTape(std::string seed);

  int take();
  const std::string& consumed() const noexcept { return consumed_; }

 private:
  std::string seed_;
  size_t pos_ = 0;
  std::string consumed_;
};

struct BranchEvent {
  long k;
  std::string kind;  // "base-side", "half-ball-tie", "round-half-even"
  int bit;
};

/// A point whose coordinates are p_i + q_i*sqrt(r) with a shared radicand.
using RadVec2 = std::array<QuadRadical, 2>;

struct LemmaPoint {
  RadVec2 v;
  QuadReal radicand;  // before clamping
  bool clamped = false;
};

/// v = A*delta*perp - sqrt((2 gamma psi_next)^{-1} - A^2) * m_k1 with
/// A = psi_k^{-1} |m_k|^2 / |m_k1|^2. A negative radicand either raises
/// StepVerificationFailed("radicand") or, with clamp, is replaced by zero.
LemmaPoint lemma_point(const IntVec2& m_k, const IntVec2& m_k1, int delta, const Rational& psi_k,
                       const Rational& psi_next, bool clamp);

struct NextPoint {
  IntVec2 m;
  Rational lambda1;
  Rational lambda2;
};

/// Point of w + span(m_k, m_k1) minimising <x - v, delta*perp> >= 0 and then
/// <x - v, -m_k1> >= 0, then moved by lift*delta*m_k - offset*m_k1. Both minimality
/// certificates are checked with radical_sign; throws SignLawViolated when the
/// m_k coefficient does not have the sign of delta.
NextPoint select_m_next(const IntVec2& w, const IntVec2& m_k, const IntVec2& m_k1, const RadVec2& v,
                        int delta, long offset = 0, long lift = 0);

struct AlphaNext {
  RatVec2 alpha;
  bool rounding_tie = false;
  bool triple_switch_checked = false;
};

/// Solves <beta, m_k1> = <alpha_k, m_k1>, <beta, m_k2> = [<alpha_k, m_k2>].
/// When `previous` (= m_k) is given and the basis-change hypotheses hold, the
/// conclusions are verified; throws TripleSwitchViolated or SingularSystem.
AlphaNext solve_alpha_next(const RatVec2& alpha_k, const IntVec2& m_k1, const IntVec2& m_k2,
                           const std::optional<IntVec2>& previous = std::nullopt);

/// Side of the next half-ball: the half closer to the previous supporting line.
/// An orthogonal pair is a tie and consumes one bit (0 -> +1, 1 -> -1).
int half_ball_side(int delta_k, const IntVec2& m_k, const IntVec2& m_k1, BranchTape& tape);

/// Two-sided enclosure of (2 |m| |det|)^{-1} with 128 significant bits.
std::pair<Rational, Rational> radius_enclosure(const IntVec2& m, const Integer& det);

/// Recomputes the Checks of `s`; `prev` is the state before it (nullptr at k = 1).
Checks compute_checks(const StepState& s, const StepState* prev);

StepState base_case(const PsiValue& psi1, int delta1);
StepState base_case(const PsiValue& psi1, BranchTape& tape, std::vector<BranchEvent>* events = nullptr);

struct StepOptions {
  bool clamp_radicand = false;
  long offset = 0;
  long lift = 0;
};

StepState induction_step(const StepState& state, const PsiValue& psi_next, BranchTape& tape,
                         const StepOptions& options = {}, std::vector<BranchEvent>* events = nullptr);

/// Strict: only the step rule's point, negative radicands are fatal.
/// Search: the rule's point first, then nearby points of the same coset
/// (further along -m_k1, or lifted along delta*m_k), with clamped radicands
/// and depth-first backtracking when a later step fails.
enum class Selection { Strict, Search };

std::string selection_name(Selection s);
Selection parse_selection(const std::string& name);

struct RunOptions {
  Selection selection = Selection::Search;
  long max_offset = 12;
  long max_lift = 3;
  long node_budget = 50000;
};

struct Box {
  Rational x_lo, x_hi, y_lo, y_hi;
  friend bool operator==(const Box&, const Box&) = default;
};

struct ConstructionTrace {
  PsiSpec psi_spec;
  Mode mode = Mode::Norm;
  Selection selection = Selection::Search;
  std::string branch;
  std::vector<BranchEvent> branch_choices;
  std::vector<StepState> steps;
  Box final_enclosure;
};

/// psi_hat for state k with the construction's indexing.
PsiValue psi_for_step(const PsiSpec& spec, Mode mode, long k, const IntVec2& m_k,
                      const std::optional<PsiValue>& prev);

Box enclosure_of(const StepState& last);

/// K states k = 1..K (vectors m_1..m_{K+1}). Errors carry the failing k.
ConstructionTrace run_construction(const PsiSpec& spec, long K, Mode mode, const std::string& seed,
                                   const RunOptions& options = {});

/// Re-derives state k+1 from state k using the recorded offset and lift; used by the auditor.
StepState replay_step(const StepState& state, const PsiValue& psi_next, BranchTape& tape, long offset,
                      long lift, Selection selection);

}  // namespace dioph
