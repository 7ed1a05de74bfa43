#pragma once

// Fixed-point pre-screen for the best-approximation enumeration.
//
// Along a stripe the form value is f_i = base + i*step (mod 2^64), a 64-bit
// fixed-point image of frac(<alpha, x>). A lane survives when its distance to
// an integer, min(f_i, 2^64 - f_i), is at most `threshold`. Survivors are only
// candidates; every decision is confirmed exactly afterwards.

#include <cstddef>
#include <cstdint>
#include <string>

namespace dioph {

enum class Kernel { Auto, Scalar, Avx2 };

std::string kernel_name(Kernel k);

/// True when the CPU and the build both support the AVX2 variant.
bool avx2_available();

/// Resolves Auto to the best available kernel.
Kernel resolve_kernel(Kernel k);

/// Writes the indices i < count of surviving lanes to `out` (capacity >= count)
/// in increasing order and returns how many were written.
size_t screen_scalar(uint64_t base, uint64_t step, size_t count, uint64_t threshold, uint32_t* out);
size_t screen_avx2(uint64_t base, uint64_t step, size_t count, uint64_t threshold, uint32_t* out);

size_t screen(Kernel k, uint64_t base, uint64_t step, size_t count, uint64_t threshold, uint32_t* out);

}  // namespace dioph
