#pragma once

#include <complex>
#include <cstddef>

namespace fellq::detail {

// In-place radix-2 Cooley-Tukey transform.  n must be a power of two.
// Forward transform is unnormalized: X_k = sum_j x_j e^{-2pi i jk/n}.
// Inverse is unnormalized as well: x_j = sum_k X_k e^{+2pi i jk/n};
// callers divide by n when reconstructing samples.
void fft_pow2(std::complex<double>* data, std::size_t n, bool inverse);

bool is_pow2(std::size_t n);

}  // namespace fellq::detail
