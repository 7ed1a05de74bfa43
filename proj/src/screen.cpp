#include "dioph/screen.hpp"

#if defined(__x86_64__) || defined(__i386__)
#include <immintrin.h>
#define DIOPH_X86 1
#endif

namespace dioph {

std::string kernel_name(Kernel k) {
  switch (k) {
    case Kernel::Auto:
      return "auto";
    case Kernel::Scalar:
      return "scalar";
    case Kernel::Avx2:
      return "avx2";
  }
  return "?";
}

bool avx2_available() {
#ifdef DIOPH_X86
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Kernel resolve_kernel(Kernel k) {
  if (k == Kernel::Auto) return avx2_available() ? Kernel::Avx2 : Kernel::Scalar;
  if (k == Kernel::Avx2 && !avx2_available()) return Kernel::Scalar;
  return k;
}

size_t screen_scalar(uint64_t base, uint64_t step, size_t count, uint64_t threshold, uint32_t* out) {
  size_t n = 0;
  uint64_t f = base;
  for (size_t i = 0; i < count; ++i, f += step) {
    uint64_t d = f < -f ? f : -f;
    if (d <= threshold) out[n++] = static_cast<uint32_t>(i);
  }
  return n;
}

#ifdef DIOPH_X86

__attribute__((target("avx2"))) size_t screen_avx2(uint64_t base, uint64_t step, size_t count,
                                                   uint64_t threshold, uint32_t* out) {
  // AVX2 has no unsigned 64-bit compare: flip the sign bit and compare signed.
  const __m256i bias = _mm256_set1_epi64x(static_cast<long long>(0x8000000000000000ULL));
  const __m256i thr = _mm256_xor_si256(_mm256_set1_epi64x(static_cast<long long>(threshold)), bias);
  const __m256i stride = _mm256_set1_epi64x(static_cast<long long>(4 * step));
  const __m256i zero = _mm256_setzero_si256();
  __m256i f = _mm256_set_epi64x(static_cast<long long>(base + 3 * step), static_cast<long long>(base + 2 * step),
                                static_cast<long long>(base + step), static_cast<long long>(base));
  size_t n = 0;
  size_t i = 0;
  for (; i + 4 <= count; i += 4) {
    __m256i neg = _mm256_sub_epi64(zero, f);
    __m256i f_gt = _mm256_cmpgt_epi64(_mm256_xor_si256(f, bias), _mm256_xor_si256(neg, bias));
    __m256i d = _mm256_blendv_epi8(f, neg, f_gt);
    __m256i reject = _mm256_cmpgt_epi64(_mm256_xor_si256(d, bias), thr);
    unsigned keep = ~static_cast<unsigned>(_mm256_movemask_pd(_mm256_castsi256_pd(reject))) & 0xFu;
    while (keep != 0) {
      unsigned lane = static_cast<unsigned>(__builtin_ctz(keep));
      out[n++] = static_cast<uint32_t>(i + lane);
      keep &= keep - 1;
    }
    f = _mm256_add_epi64(f, stride);
  }
  if (i < count) {
    size_t tail = screen_scalar(base + i * step, step, count - i, threshold, out + n);
    for (size_t j = 0; j < tail; ++j) out[n + j] += static_cast<uint32_t>(i);
    n += tail;
  }
  return n;
}

#else

size_t screen_avx2(uint64_t base, uint64_t step, size_t count, uint64_t threshold, uint32_t* out) {
  return screen_scalar(base, step, count, threshold, out);
}

#endif

size_t screen(Kernel k, uint64_t base, uint64_t step, size_t count, uint64_t threshold, uint32_t* out) {
  if (resolve_kernel(k) == Kernel::Avx2) return screen_avx2(base, step, count, threshold, out);
  return screen_scalar(base, step, count, threshold, out);
}

}  // namespace dioph
