#include "fellq/fiber.hpp"

#include <cmath>
#include <stdexcept>

#include "fellq/detail/fft.hpp"

namespace fellq {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

cplx unit_phase(double turns) { return {std::cos(kTwoPi * turns), std::sin(kTwoPi * turns)}; }

void require_compatible(const GridFunction& a, const GridFunction& b, const char* what) {
  if (!same_geometry(a.geometry(), b.geometry()))
    throw std::invalid_argument(std::string(what) + ": geometry mismatch");
}

int signed_bin(std::size_t k, std::size_t n) {
  return (k < n / 2) ? static_cast<int>(k) : static_cast<int>(k) - static_cast<int>(n);
}

// Applies fn to every 1-D line along `axis`.  fn receives the line buffer and
// the flat index of the line's first element (from which the caller can
// recover the transverse coordinates).
template <typename Fn>
void for_each_line(const GridGeometry& g, int axis, std::vector<cplx>& data, Fn&& fn) {
  const std::size_t n = static_cast<std::size_t>(g.axis(axis).size);
  const std::size_t stride = g.stride(axis);
  const std::size_t block = stride * n;
  std::vector<cplx> buf(n);
  for (std::size_t base = 0; base < g.total(); base += block) {
    for (std::size_t b = 0; b < stride; ++b) {
      const std::size_t start = base + b;
      for (std::size_t i = 0; i < n; ++i) buf[i] = data[start + i * stride];
      fn(buf, start);
      for (std::size_t i = 0; i < n; ++i) data[start + i * stride] = buf[i];
    }
  }
}

// Radix-2 transform along one axis of the strided array, all lines at once;
// the butterflies run over contiguous slabs of length stride(axis).
void fft_axis_strided(std::vector<cplx>& d, const GridGeometry& g, int axis, bool inverse) {
  const std::size_t n = static_cast<std::size_t>(g.axis(axis).size);
  const std::size_t s = g.stride(axis);
  const std::size_t block = n * s;
  if (n == 1) return;

  thread_local std::vector<cplx> tw;
  thread_local std::size_t tw_n = 0;
  if (tw_n != n) {
    tw.assign(n / 2, cplx{});
    for (std::size_t k = 0; k < n / 2; ++k)
      tw[k] = unit_phase(-static_cast<double>(k) / static_cast<double>(n));
    tw_n = n;
  }

  for (std::size_t base = 0; base < d.size(); base += block) {
    cplx* p = d.data() + base;
    // bit-reversal permutation of slabs
    for (std::size_t i = 1, j = 0; i < n; ++i) {
      std::size_t bit = n >> 1;
      for (; j & bit; bit >>= 1) j ^= bit;
      j ^= bit;
      if (i < j) std::swap_ranges(p + i * s, p + (i + 1) * s, p + j * s);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
      const std::size_t half = len / 2;
      const std::size_t step = n / len;
      for (std::size_t i = 0; i < n; i += len) {
        for (std::size_t k = 0; k < half; ++k) {
          cplx w = tw[k * step];
          if (inverse) w = std::conj(w);
          cplx* a = p + (i + k) * s;
          cplx* b = p + (i + k + half) * s;
          for (std::size_t q = 0; q < s; ++q) {
            const cplx t = b[q] * w;
            b[q] = a[q] - t;
            a[q] += t;
          }
        }
      }
    }
  }
}

// Multiplies the spectral slab of signed frequency m by factor(m), in place.
template <typename Factor>
void scale_bins_strided(std::vector<cplx>& d, const GridGeometry& g, int axis, Factor&& factor) {
  const std::size_t n = static_cast<std::size_t>(g.axis(axis).size);
  const std::size_t s = g.stride(axis);
  const std::size_t block = n * s;
  std::vector<cplx> f(n);
  for (std::size_t k = 0; k < n; ++k) f[k] = factor(signed_bin(k, n));
  for (std::size_t base = 0; base < d.size(); base += block) {
    cplx* p = d.data() + base;
    for (std::size_t k = 0; k < n; ++k) {
      cplx* a = p + k * s;
      const cplx w = f[k];
      for (std::size_t q = 0; q < s; ++q) a[q] *= w;
    }
  }
}

// Exact slab rotation for grid-aligned shifts on an untwisted periodic axis.
void rotate_axis_strided(std::vector<cplx>& d, const GridGeometry& g, int axis, long long k) {
  const std::size_t n = static_cast<std::size_t>(g.axis(axis).size);
  const std::size_t s = g.stride(axis);
  const std::size_t block = n * s;
  long long r = k % static_cast<long long>(n);
  if (r < 0) r += static_cast<long long>(n);
  if (r == 0) return;
  std::vector<cplx> tmp(block);
  for (std::size_t base = 0; base < d.size(); base += block) {
    cplx* p = d.data() + base;
    // out[i] = in[(i + r) mod n]
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t src = (i + static_cast<std::size_t>(r)) % n;
      std::copy(p + src * s, p + (src + 1) * s, tmp.data() + i * s);
    }
    std::copy(tmp.begin(), tmp.end(), p);
  }
}

// y coordinate (axis 1) of the line through flat index `start`, for twisted
// axis-0 operations.  Twisted data is two-dimensional by construction.
double twist_row_coordinate(const GridGeometry& g, std::size_t start) {
  const int j = static_cast<int>(start % static_cast<std::size_t>(g.axis(1).size));
  return g.axis(1).coordinate(j);
}

void require_twist_rank(const GridFunction& a) {
  if (a.twist().frequency != 0 && a.geometry()->rank() != 2)
    throw std::invalid_argument("twisted data must live on a rank-2 grid");
}

}  // namespace

GridFunction::GridFunction(GeometryPtr geom, Twist twist, std::vector<cplx> samples)
    : geom_(std::move(geom)), twist_(twist), samples_(std::move(samples)) {
  if (!geom_) throw std::invalid_argument("GridFunction: null geometry");
  if (samples_.size() != geom_->total())
    throw std::invalid_argument("GridFunction: sample count does not match geometry");
}

GridFunction::GridFunction(GeometryPtr geom, Twist twist)
    : GridFunction(geom, twist, std::vector<cplx>(geom ? geom->total() : 0)) {}

GridFunction& GridFunction::operator+=(const GridFunction& o) {
  require_compatible(*this, o, "GridFunction::+=");
  if (!(twist_ == o.twist())) throw std::invalid_argument("GridFunction::+=: twist mismatch");
  for (std::size_t i = 0; i < samples_.size(); ++i) samples_[i] += o.samples_[i];
  return *this;
}

GridFunction& GridFunction::operator-=(const GridFunction& o) {
  require_compatible(*this, o, "GridFunction::-=");
  if (!(twist_ == o.twist())) throw std::invalid_argument("GridFunction::-=: twist mismatch");
  for (std::size_t i = 0; i < samples_.size(); ++i) samples_[i] -= o.samples_[i];
  return *this;
}

GridFunction& GridFunction::operator*=(cplx s) {
  for (auto& v : samples_) v *= s;
  return *this;
}

GridFunction operator+(GridFunction a, const GridFunction& b) { return a += b; }
GridFunction operator-(GridFunction a, const GridFunction& b) { return a -= b; }
GridFunction operator*(cplx s, GridFunction a) { return a *= s; }

GridFunction multiply(const GridFunction& a, const GridFunction& b) {
  require_compatible(a, b, "multiply");
  std::vector<cplx> out(a.size());
  const auto& xs = a.samples();
  const auto& ys = b.samples();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = xs[i] * ys[i];
  return GridFunction(a.geometry(), a.twist() + b.twist(), std::move(out));
}

GridFunction conjugate(const GridFunction& a) {
  std::vector<cplx> out(a.size());
  const auto& xs = a.samples();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::conj(xs[i]);
  return GridFunction(a.geometry(), -a.twist(), std::move(out));
}

double sup_norm(const GridFunction& a) {
  double m = 0.0;
  for (const auto& v : a.samples()) m = std::max(m, std::abs(v));
  return m;
}

GridFunction shift_axis(const GridFunction& a, int axis, double delta) {
  if (delta == 0.0) return a;
  const auto& g = *a.geometry();
  const Axis& ax = g.axis(axis);
  if (!ax.periodic)
    throw std::invalid_argument("shift_axis: translation on a non-periodic axis leaves the chart");
  require_twist_rank(a);

  const int n = ax.size;
  const double u = delta / ax.length;  // shift measured in periods
  const double steps = u * n;
  const long long k = std::llround(steps);
  const bool aligned = std::abs(steps - static_cast<double>(k)) < 1e-9;
  const bool twisted = (axis == 0 && a.twist().frequency != 0);
  const int freq = a.twist().frequency;

  GridFunction out(a.geometry(), a.twist(), a.samples());

  if (aligned && !twisted) {
    rotate_axis_strided(out.mutable_samples(), g, axis, k);
    return out;
  }

  if (aligned) {  // twisted: rotation with the wrap phase per row
    for_each_line(g, axis, out.mutable_samples(), [&](std::vector<cplx>& buf, std::size_t start) {
      std::vector<cplx> src = buf;
      const double y = twist_row_coordinate(g, start);
      for (int i = 0; i < n; ++i) {
        long long idx = static_cast<long long>(i) + k;
        long long w = idx / n;  // period wrap count; each wrap picks up the twist phase
        long long r = idx % n;
        if (r < 0) {
          r += n;
          w -= 1;
        }
        cplx v = src[static_cast<std::size_t>(r)];
        if (w != 0) v *= unit_phase(-freq * y * static_cast<double>(w));
        buf[static_cast<std::size_t>(i)] = v;
      }
    });
    return out;
  }

  if (!twisted) {  // trigonometric interpolation, all lines at once
    auto& d = out.mutable_samples();
    fft_axis_strided(d, g, axis, false);
    const double inv_n = 1.0 / n;
    const double u_red = u - std::floor(u);  // e^{2pi i m u} is 1-periodic in u
    scale_bins_strided(d, g, axis, [&](int m) { return unit_phase(m * u_red) * inv_n; });
    fft_axis_strided(d, g, axis, true);
    return out;
  }

  // Twisted axis: interpolation in the phase-twisted basis, row by row.
  for_each_line(g, axis, out.mutable_samples(), [&](std::vector<cplx>& buf, std::size_t start) {
    const double y = twist_row_coordinate(g, start);
    for (int i = 0; i < n; ++i)
      buf[static_cast<std::size_t>(i)] *= unit_phase(freq * y * (static_cast<double>(i) / n));
    detail::fft_pow2(buf.data(), static_cast<std::size_t>(n), false);
    const double inv_n = 1.0 / n;
    for (std::size_t kk = 0; kk < static_cast<std::size_t>(n); ++kk) {
      const int m = signed_bin(kk, static_cast<std::size_t>(n));
      buf[kk] *= unit_phase(m * u) * inv_n;
    }
    detail::fft_pow2(buf.data(), static_cast<std::size_t>(n), true);
    for (int i = 0; i < n; ++i)
      buf[static_cast<std::size_t>(i)] *= unit_phase(-freq * y * (static_cast<double>(i) / n + u));
  });
  return out;
}

std::vector<GridFunction> shift_axis_batch(const GridFunction& a, int axis,
                                           const std::vector<double>& deltas) {
  const auto& g = *a.geometry();
  const Axis& ax = g.axis(axis);
  if (axis == 0 && a.twist().frequency != 0)
    throw std::invalid_argument("shift_axis_batch: twisted axis not supported");
  std::vector<GridFunction> out;
  out.reserve(deltas.size());

  // the shared forward transform pays off only for several non-aligned shifts
  std::vector<cplx> spectrum;
  bool have_spectrum = false;
  const int n = ax.size;
  for (double delta : deltas) {
    if (delta == 0.0) {
      out.push_back(a);
      continue;
    }
    if (!ax.periodic)
      throw std::invalid_argument("shift_axis_batch: translation on a non-periodic axis");
    const double u = delta / ax.length;
    const double steps = u * n;
    const long long k = std::llround(steps);
    if (std::abs(steps - static_cast<double>(k)) < 1e-9) {
      GridFunction r(a.geometry(), a.twist(), a.samples());
      rotate_axis_strided(r.mutable_samples(), g, axis, k);
      out.push_back(std::move(r));
      continue;
    }
    if (!have_spectrum) {
      spectrum = a.samples();
      fft_axis_strided(spectrum, g, axis, false);
      have_spectrum = true;
    }
    GridFunction r(a.geometry(), a.twist(), spectrum);
    const double inv_n = 1.0 / n;
    const double u_red = u - std::floor(u);
    scale_bins_strided(r.mutable_samples(), g, axis,
                       [&](int m) { return unit_phase(m * u_red) * inv_n; });
    fft_axis_strided(r.mutable_samples(), g, axis, true);
    out.push_back(std::move(r));
  }
  return out;
}

GridFunction shift(const GridFunction& a, const std::vector<double>& delta) {
  if (static_cast<int>(delta.size()) != a.geometry()->rank())
    throw std::invalid_argument("shift: delta rank mismatch");
  GridFunction out = a;
  for (int j = 0; j < a.geometry()->rank(); ++j)
    if (delta[static_cast<std::size_t>(j)] != 0.0) out = shift_axis(out, j, delta[static_cast<std::size_t>(j)]);
  return out;
}

GridFunction linear_phase(const GridFunction& a, int axis, double c1, double c0) {
  const auto& g = *a.geometry();
  GridFunction out = a;
  auto& data = out.mutable_samples();
  const std::size_t n = static_cast<std::size_t>(g.axis(axis).size);
  const std::size_t stride = g.stride(axis);
  const std::size_t block = stride * n;
  std::vector<cplx> phase(n);
  for (std::size_t i = 0; i < n; ++i)
    phase[i] = unit_phase(c0 + c1 * g.axis(axis).coordinate(static_cast<int>(i)));
  for (std::size_t base = 0; base < g.total(); base += block)
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t lo = base + i * stride;
      for (std::size_t b = 0; b < stride; ++b) data[lo + b] *= phase[i];
    }
  return out;
}

GridFunction coordinate_multiply(const GridFunction& a, int axis) {
  const auto& g = *a.geometry();
  GridFunction out = a;
  auto& data = out.mutable_samples();
  const std::size_t n = static_cast<std::size_t>(g.axis(axis).size);
  const std::size_t stride = g.stride(axis);
  const std::size_t block = stride * n;
  for (std::size_t base = 0; base < g.total(); base += block)
    for (std::size_t i = 0; i < n; ++i) {
      const double c = g.axis(axis).coordinate(static_cast<int>(i));
      const std::size_t lo = base + i * stride;
      for (std::size_t b = 0; b < stride; ++b) data[lo + b] *= c;
    }
  return out;
}

GridFunction derivative_axis(const GridFunction& a, int axis) {
  const auto& g = *a.geometry();
  const Axis& ax = g.axis(axis);
  if (!ax.periodic)
    throw std::invalid_argument("derivative_axis: spectral derivative needs a periodic axis");
  require_twist_rank(a);
  const int n = ax.size;
  const bool twisted = (axis == 0 && a.twist().frequency != 0);
  const int freq = a.twist().frequency;

  GridFunction out(a.geometry(), a.twist(), a.samples());
  if (!twisted) {
    auto& d = out.mutable_samples();
    fft_axis_strided(d, g, axis, false);
    const double inv_n = 1.0 / n;
    scale_bins_strided(d, g, axis,
                       [&](int m) { return cplx(0.0, kTwoPi * m / ax.length) * inv_n; });
    fft_axis_strided(d, g, axis, true);
    return out;
  }

  for_each_line(g, axis, out.mutable_samples(), [&](std::vector<cplx>& buf, std::size_t start) {
    const double y = twist_row_coordinate(g, start);
    const std::vector<cplx> orig = buf;
    for (int i = 0; i < n; ++i)
      buf[static_cast<std::size_t>(i)] *= unit_phase(freq * y * (static_cast<double>(i) / n));
    detail::fft_pow2(buf.data(), static_cast<std::size_t>(n), false);
    const double inv_n = 1.0 / n;
    for (std::size_t kk = 0; kk < static_cast<std::size_t>(n); ++kk) {
      const int m = signed_bin(kk, static_cast<std::size_t>(n));
      buf[kk] *= cplx(0.0, kTwoPi * m / ax.length) * inv_n;
    }
    detail::fft_pow2(buf.data(), static_cast<std::size_t>(n), true);
    // g = e^{-2pi i F y tau} q  =>  dg/dx = e^{-2pi i F y tau} q' - (2pi i F y / L) g
    for (int i = 0; i < n; ++i) {
      const cplx e = unit_phase(-freq * y * (static_cast<double>(i) / n));
      buf[static_cast<std::size_t>(i)] =
          e * buf[static_cast<std::size_t>(i)] -
          cplx(0.0, kTwoPi * freq * y / ax.length) * orig[static_cast<std::size_t>(i)];
    }
  });
  return out;
}

Fiber fiber_multiply(const Fiber& a, const Fiber& b) {
  if (a.grading().rank() != b.grading().rank())
    throw std::invalid_argument("fiber_multiply: grading rank mismatch");
  return Fiber(a.grading() + b.grading(), multiply(a.data(), b.data()));
}

Fiber fiber_star(const Fiber& a) { return Fiber(-a.grading(), conjugate(a.data())); }

double fiber_norm(const Fiber& a) { return sup_norm(a.data()); }

Fiber fiber_add(const Fiber& a, const Fiber& b) {
  if (a.grading() != b.grading()) throw std::invalid_argument("fiber_add: grading mismatch");
  return Fiber(a.grading(), a.data() + b.data());
}

Fiber fiber_sub(const Fiber& a, const Fiber& b) {
  if (a.grading() != b.grading()) throw std::invalid_argument("fiber_sub: grading mismatch");
  return Fiber(a.grading(), a.data() - b.data());
}

Fiber fiber_scale(cplx s, const Fiber& a) {
  GridFunction d = a.data();
  d *= s;
  return Fiber(a.grading(), std::move(d));
}

}  // namespace fellq
