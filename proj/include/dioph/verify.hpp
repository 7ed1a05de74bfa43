#pragma once

// Brute-force best approximations of a rational linear form and the auditor
// that re-certifies a construction trace.

#include <optional>
#include <string>
#include <vector>

#include "dioph/construction.hpp"
#include "dioph/exact.hpp"
#include "dioph/lattice2d.hpp"
#include "dioph/screen.hpp"

namespace dioph {

struct BestApproxRecord {
  IntVec2 m;  // canonical representative of +-m
  Integer sq_norm;
  Rational err;
  Rational normalized;

  friend bool operator==(const BestApproxRecord&, const BestApproxRecord&) = default;
};

struct BestApproxResult {
  std::vector<BestApproxRecord> records;
  /// First vector with <alpha, m> in Z, if one lies within the bound. The
  /// enumeration stops at its norm shell and it is not a record.
  std::optional<IntVec2> zero_at;
};

/// ||<alpha, m>|| * |m|^2.
Rational normalized_error(const RatVec2& alpha, const IntVec2& m);

struct EnumOptions {
  bool screen = true;
  /// 0: DIOPHANTINE_THREADS if set, else the number of logical cores.
  int threads = 0;
  Kernel kernel = Kernel::Auto;
};

/// Worker count after applying the environment override.
int resolve_threads(int requested);

/// Records m with 0 < |m|^2 <= sq_norm_bound, ordered by (|m|^2, m). A record has
/// error strictly below every shorter vector and at most that of every other
/// vector of its norm (several records may share a norm when errors tie).
BestApproxResult best_approximations(const RatVec2& alpha, const Integer& sq_norm_bound,
                                     const EnumOptions& options = {});

/// Exhaustive exact scan with no screening; the reference for the fast path.
BestApproxResult best_approximations_reference(const RatVec2& alpha, const Integer& sq_norm_bound);

struct CheckResult {
  std::string name;
  bool pass = true;
  std::string witness;
};

struct StepAudit {
  long k = 0;
  Integer sq_norm;
  Rational psi_hat;
  Rational det_ratio;  // |det(m_k, m_k1)| / |m_k|^2
  Checks flags;
  std::vector<CheckResult> checks;
  bool oracle_verified = false;
  /// Theorem band at the final anchor alpha_K; present for k <= K - 2.
  std::optional<Rational> normalized_err;
  std::optional<QuadReal> lower_band, upper_band, margin_left, margin_right;
  bool theorem_pass = true;
};

struct AuditReport {
  long K = 0;
  Integer budget;
  std::vector<CheckResult> global;
  std::vector<StepAudit> steps;
  long oracle_depth = 0;  // J: the oracle ran up to |m_J|^2
  long prefix_match = 0;
  std::optional<IntVec2> oracle_stop;

  bool pass() const;
  /// "k=<k> <check>: <witness>" for the first failing entry.
  std::optional<std::string> first_failure() const;
};

struct AuditOptions {
  EnumOptions enumeration;
  bool probes = true;
};

AuditReport audit_trace(const ConstructionTrace& trace, const Integer& oracle_sq_norm_budget,
                        const AuditOptions& options = {});

}  // namespace dioph
