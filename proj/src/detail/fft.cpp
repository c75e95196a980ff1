#include "fellq/detail/fft.hpp"

#include <cmath>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace fellq::detail {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// Twiddle factors e^{-2pi i k/n}, k = 0..n/2-1, cached per transform size.
const std::vector<std::complex<double>>& twiddles(std::size_t n) {
  thread_local std::unordered_map<std::size_t, std::vector<std::complex<double>>> cache;
  auto it = cache.find(n);
  if (it == cache.end()) {
    std::vector<std::complex<double>> w(n / 2);
    for (std::size_t k = 0; k < n / 2; ++k) {
      const double ang = -kTwoPi * static_cast<double>(k) / static_cast<double>(n);
      w[k] = {std::cos(ang), std::sin(ang)};
    }
    it = cache.emplace(n, std::move(w)).first;
  }
  return it->second;
}

}  // namespace

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

void fft_pow2(std::complex<double>* data, std::size_t n, bool inverse) {
  if (!is_pow2(n)) throw std::invalid_argument("fft_pow2: size must be a power of two");
  if (n == 1) return;

  // Bit-reversal permutation.
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(data[i], data[j]);
  }

  const auto& w = twiddles(n);
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t half = len / 2;
    const std::size_t step = n / len;
    for (std::size_t i = 0; i < n; i += len) {
      for (std::size_t k = 0; k < half; ++k) {
        std::complex<double> tw = w[k * step];
        if (inverse) tw = std::conj(tw);
        const std::complex<double> t = data[i + k + half] * tw;
        data[i + k + half] = data[i + k] - t;
        data[i + k] += t;
      }
    }
  }
}

}  // namespace fellq::detail
