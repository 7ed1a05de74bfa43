#include "dioph/verify.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <thread>

#include "dioph/errors.hpp"

namespace dioph {

Rational normalized_error(const RatVec2& alpha, const IntVec2& m) {
  if (m.is_zero()) throw PreconditionFailed("normalized_error: m must be nonzero");
  return dist_to_z(inner(alpha, m)) * Rational(m.sq_norm());
}

int resolve_threads(int requested) {
  if (const char* env = std::getenv("DIOPHANTINE_THREADS")) {
    int v = std::atoi(env);
    if (v > 0) return v;
  }
  if (requested > 0) return requested;
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

namespace {

struct Candidate {
  int64_t x1;
  int64_t x2;
  uint64_t s;
  Integer err_num;  // ||<alpha, x>|| * N
};

// alpha reduced mod 1 as (p1, p2) / N.
struct Form {
  Integer n;
  Integer p1, p2;
  bool small = false;  // residues fit the 128-bit fast path
  __int128 n128 = 0, p1_128 = 0, p2_128 = 0;

  explicit Form(const RatVec2& alpha) {
    RatVec2 a{frac(alpha.x1), frac(alpha.x2)};
    n = common_denominator(a);
    p1 = to_integer(a.x1 * Rational(n));
    p2 = to_integer(a.x2 * Rational(n));
    small = mpz_sizeinbase(n.get_mpz_t(), 2) <= 62;
    if (small) {
      n128 = static_cast<__int128>(n.get_si());
      p1_128 = static_cast<__int128>(p1.get_si());
      p2_128 = static_cast<__int128>(p2.get_si());
    }
  }

  Integer err_num(int64_t x1, int64_t x2) const {
    if (small) {
      __int128 r = (p1_128 * x1 + p2_128 * x2) % n128;
      if (r < 0) r += n128;
      __int128 e = r < n128 - r ? r : n128 - r;
      return Integer(static_cast<long>(e));
    }
    Integer r = p1 * Integer(static_cast<long>(x1)) + p2 * Integer(static_cast<long>(x2));
    mpz_fdiv_r(r.get_mpz_t(), r.get_mpz_t(), n.get_mpz_t());
    Integer e = n - r;
    return r < e ? r : e;
  }
};

int64_t isqrt_u64(uint64_t v) {
  Integer r = sqrt(Integer(std::to_string(v)));
  return r.get_si();
}

uint64_t fixed_point(const Rational& a) {
  // round(a * 2^64) mod 2^64 for a in [0, 1)
  Integer scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 2, 64);
  Integer v = floor_of(a * Rational(scale) + Rational(1, 2));
  mpz_fdiv_r(v.get_mpz_t(), v.get_mpz_t(), scale.get_mpz_t());
  uint64_t lo = 0;
  mpz_export(&lo, nullptr, -1, sizeof(lo), 0, 0, v.get_mpz_t());
  return lo;
}

// Every record of norm s > 2Q^2 has error < 1/(Q^2 + 2Q): among the (Q+1)^2
// vectors with coordinates in [0, Q] two values of the form share an interval
// of length 1/(Q^2 + 2Q), and their difference is shorter than the record.
uint64_t dirichlet_threshold(uint64_t s_min, uint64_t slack) {
  if (s_min < 3) return std::numeric_limits<uint64_t>::max();
  uint64_t q = static_cast<uint64_t>(isqrt_u64((s_min - 1) / 2));
  while (2 * (q + 1) * (q + 1) < s_min) ++q;
  while (q > 0 && 2 * q * q >= s_min) --q;
  if (q == 0) return std::numeric_limits<uint64_t>::max();
  unsigned __int128 one = static_cast<unsigned __int128>(1) << 64;
  unsigned __int128 t = one / (static_cast<unsigned __int128>(q) * q + 2 * q) + slack;
  return t >= one ? std::numeric_limits<uint64_t>::max() : static_cast<uint64_t>(t);
}

constexpr int64_t kBlock = 4096;

void scan_stripe(const Form& form, uint64_t a1, uint64_t a2, int64_t x1, int64_t lo, int64_t hi,
                 uint64_t bound, bool screen_on, Kernel kernel, std::vector<Candidate>& out,
                 std::vector<uint32_t>& idx) {
  uint64_t x1sq = static_cast<uint64_t>(x1) * static_cast<uint64_t>(x1);
  for (int64_t b0 = lo; b0 <= hi; b0 += kBlock) {
    int64_t b1 = std::min(hi, b0 + kBlock - 1);
    size_t count = static_cast<size_t>(b1 - b0 + 1);
    auto emit = [&](int64_t x2) {
      uint64_t s = x1sq + static_cast<uint64_t>(x2) * static_cast<uint64_t>(x2);
      if (s == 0 || s > bound) return;
      out.push_back({x1, x2, s, form.err_num(x1, x2)});
    };
    if (!screen_on) {
      for (int64_t x2 = b0; x2 <= b1; ++x2) emit(x2);
      continue;
    }
    int64_t near = (b0 <= 0 && 0 <= b1) ? 0 : std::min(std::llabs(b0), std::llabs(b1));
    int64_t far = std::max(std::llabs(b0), std::llabs(b1));
    uint64_t s_min = x1sq + static_cast<uint64_t>(near) * static_cast<uint64_t>(near);
    uint64_t slack = (static_cast<uint64_t>(std::llabs(x1)) + static_cast<uint64_t>(far)) / 2 + 2;
    uint64_t thr = dirichlet_threshold(s_min, slack);
    uint64_t base = static_cast<uint64_t>(x1) * a1 + static_cast<uint64_t>(b0) * a2;
    if (idx.size() < count) idx.resize(count);
    size_t n = screen(kernel, base, a2, count, thr, idx.data());
    for (size_t j = 0; j < n; ++j) emit(b0 + static_cast<int64_t>(idx[j]));
  }
}

BestApproxResult select_records(std::vector<Candidate>& cands, const Integer& n) {
  std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
    if (a.s != b.s) return a.s < b.s;
    if (a.x1 != b.x1) return a.x1 < b.x1;
    return a.x2 < b.x2;
  });
  BestApproxResult res;
  std::optional<Integer> champion;
  for (size_t i = 0; i < cands.size();) {
    size_t j = i;
    while (j < cands.size() && cands[j].s == cands[i].s) ++j;
    const Integer* best = nullptr;
    for (size_t t = i; t < j; ++t) {
      if (cands[t].err_num == 0) {
        res.zero_at = IntVec2(cands[t].x1, cands[t].x2);
        return res;
      }
      if (best == nullptr || cands[t].err_num < *best) best = &cands[t].err_num;
    }
    if (!champion || *best < *champion) {
      champion = *best;
      for (size_t t = i; t < j; ++t) {
        if (cands[t].err_num != *best) continue;
        BestApproxRecord r;
        r.m = IntVec2(cands[t].x1, cands[t].x2);
        r.sq_norm = Integer(std::to_string(cands[t].s));
        r.err = make_rational(cands[t].err_num, n);
        r.normalized = r.err * Rational(r.sq_norm);
        res.records.push_back(std::move(r));
      }
    }
    i = j;
  }
  return res;
}

uint64_t checked_bound(const Integer& bound) {
  if (bound < 1) throw PreconditionFailed("best_approximations: bound must be >= 1");
  if (mpz_sizeinbase(bound.get_mpz_t(), 2) > 62) throw PreconditionFailed("best_approximations: bound too large");
  return std::stoull(bound.get_str());
}

}  // namespace

BestApproxResult best_approximations(const RatVec2& alpha, const Integer& sq_norm_bound,
                                     const EnumOptions& options) {
  uint64_t bound = checked_bound(sq_norm_bound);
  Form form(alpha);
  uint64_t a1 = fixed_point(frac(alpha.x1));
  uint64_t a2 = fixed_point(frac(alpha.x2));
  int64_t xmax = isqrt_u64(bound);
  Kernel kernel = resolve_kernel(options.kernel);

  int workers = static_cast<int>(std::min<int64_t>(resolve_threads(options.threads), xmax + 1));
  std::vector<std::vector<Candidate>> parts(static_cast<size_t>(workers));
  auto work = [&](int w) {
    std::vector<uint32_t> idx;
    for (int64_t x1 = w; x1 <= xmax; x1 += workers) {
      int64_t y = isqrt_u64(bound - static_cast<uint64_t>(x1) * static_cast<uint64_t>(x1));
      int64_t lo = x1 == 0 ? 1 : -y;
      scan_stripe(form, a1, a2, x1, lo, y, bound, options.screen, kernel, parts[static_cast<size_t>(w)], idx);
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  std::vector<Candidate> all;
  for (auto& p : parts) all.insert(all.end(), std::make_move_iterator(p.begin()), std::make_move_iterator(p.end()));
  return select_records(all, form.n);
}

BestApproxResult best_approximations_reference(const RatVec2& alpha, const Integer& sq_norm_bound) {
  checked_bound(sq_norm_bound);
  struct Point {
    IntVec2 m;
    Integer s;
    Rational err;
  };
  std::vector<Point> pts;
  Integer xmax = sqrt(sq_norm_bound);
  for (Integer x1 = 0; x1 <= xmax; ++x1) {
    Integer y = sqrt(Integer(sq_norm_bound - x1 * x1));
    for (Integer x2 = (x1 == 0 ? Integer(1) : Integer(-y)); x2 <= y; ++x2) {
      IntVec2 m{x1, x2};
      pts.push_back({m, m.sq_norm(), dist_to_z(inner(alpha, m))});
    }
  }
  std::sort(pts.begin(), pts.end(), [](const Point& a, const Point& b) {
    if (a.s != b.s) return a.s < b.s;
    if (a.m.x1 != b.m.x1) return a.m.x1 < b.m.x1;
    return a.m.x2 < b.m.x2;
  });
  BestApproxResult res;
  std::optional<Rational> shorter_min;  // min error over all strictly shorter vectors
  for (size_t i = 0; i < pts.size();) {
    size_t j = i;
    while (j < pts.size() && pts[j].s == pts[i].s) ++j;
    for (size_t t = i; t < j; ++t) {
      if (sgn(pts[t].err) == 0) {
        res.zero_at = pts[t].m;
        return res;
      }
    }
    for (size_t t = i; t < j; ++t) {
      const Point& p = pts[t];
      bool ok = !shorter_min || p.err < *shorter_min;
      for (size_t u = i; ok && u < j; ++u) ok = u == t || p.err <= pts[u].err;
      if (ok) res.records.push_back({p.m, p.s, p.err, p.err * Rational(p.s)});
    }
    for (size_t t = i; t < j; ++t)
      if (!shorter_min || pts[t].err < *shorter_min) shorter_min = pts[t].err;
    i = j;
  }
  return res;
}

}  // namespace dioph
