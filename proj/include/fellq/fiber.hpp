#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "fellq/grading.hpp"
#include "fellq/grid.hpp"

namespace fellq {

using cplx = std::complex<double>;

// Quasi-periodic boundary rule.  frequency == 0 means an ordinary periodic
// (or chart-bounded) function.  frequency == F != 0 encodes the wrap rule
//   g(x + Lx, y) = e^{-2pi i F y} g(x, y)
// on axis 0, with y the coordinate of axis 1 (the X^c-type condition; for a
// Heisenberg fiber of weight k one has F = k c).
struct Twist {
  int frequency = 0;
  bool operator==(const Twist& o) const { return frequency == o.frequency; }
  Twist operator+(const Twist& o) const { return {frequency + o.frequency}; }
  Twist operator-() const { return {-frequency}; }
};

// A grid-sampled complex function on a model's base manifold, together with
// its boundary twist.  Values are immutable after construction in normal use;
// all transforms return fresh objects.
class GridFunction {
 public:
  GridFunction() = default;
  GridFunction(GeometryPtr geom, Twist twist, std::vector<cplx> samples);
  // Zero function.
  GridFunction(GeometryPtr geom, Twist twist);

  const GeometryPtr& geometry() const { return geom_; }
  Twist twist() const { return twist_; }
  const std::vector<cplx>& samples() const { return samples_; }
  std::vector<cplx>& mutable_samples() { return samples_; }
  std::size_t size() const { return samples_.size(); }

  GridFunction& operator+=(const GridFunction& o);
  GridFunction& operator-=(const GridFunction& o);
  GridFunction& operator*=(cplx s);

 private:
  GeometryPtr geom_;
  Twist twist_{};
  std::vector<cplx> samples_;
};

GridFunction operator+(GridFunction a, const GridFunction& b);
GridFunction operator-(GridFunction a, const GridFunction& b);
GridFunction operator*(cplx s, GridFunction a);

// Pointwise product; twists add.
GridFunction multiply(const GridFunction& a, const GridFunction& b);
// Pointwise conjugate; twist negates.
GridFunction conjugate(const GridFunction& a);
// Grid sup-norm, max_i |a_i|.
double sup_norm(const GridFunction& a);

// Pullback by the translation x_j -> x_j + delta_j (coordinate units) on
// every axis, i.e. resampling of a at the translated points.  Grid-aligned
// shifts on periodic axes are exact index rotations (with the twist phase
// applied at wrap-around); non-aligned shifts use trigonometric
// interpolation, with the twist phase folded into the basis on axis 0.
// A nonzero shift on a non-periodic axis is rejected: no model action leaves
// the chart, and no extrapolation scheme is provided.
GridFunction shift(const GridFunction& a, const std::vector<double>& delta);

// Pullback along a single axis; shift() applies axes in increasing order,
// which keeps twisted axis-0 resampling ahead of axis-1 resampling.
GridFunction shift_axis(const GridFunction& a, int axis, double delta);

// Several shifts of the same data along one untwisted periodic axis; the
// forward transform is shared across the targets.
std::vector<GridFunction> shift_axis_batch(const GridFunction& a, int axis,
                                           const std::vector<double>& deltas);

// Multiplies by e^{2pi i (c0 + c1 * coord_axis(x))}.  The twist tag is kept;
// composite actions that are twist-preserving overall (e.g. the Heisenberg
// deforming flow) apply this as their final step.
GridFunction linear_phase(const GridFunction& a, int axis, double c1, double c0);

// Spectral derivative d/dx_j along a periodic axis (twist-aware on axis 0).
GridFunction derivative_axis(const GridFunction& a, int axis);

// Pointwise multiplication by the coordinate of one axis (fundamental-domain
// values).  The twist tag is kept; only twist-consistent combinations (such
// as the Heisenberg y-direction derivative) may rely on wrap rules afterward.
GridFunction coordinate_multiply(const GridFunction& a, int axis);

// One fiber b_t of the bundle: sampled data plus its grading index.
class Fiber {
 public:
  Fiber() = default;
  Fiber(GroupIndex grading, GridFunction data) : grading_(std::move(grading)), data_(std::move(data)) {}

  const GroupIndex& grading() const { return grading_; }
  const GridFunction& data() const { return data_; }
  GridFunction& mutable_data() { return data_; }
  const GeometryPtr& geometry() const { return data_.geometry(); }
  Twist twist() const { return data_.twist(); }

 private:
  GroupIndex grading_;
  GridFunction data_;
};

// Pointwise product of fibers; gradings add, twists add (B_t B_s in B_{t+s}).
Fiber fiber_multiply(const Fiber& a, const Fiber& b);
// Pointwise conjugate; grading negates (B_t^* = B_{-t}).
Fiber fiber_star(const Fiber& a);
// Grid sup-norm, the single-fiber C*-norm proxy.
double fiber_norm(const Fiber& a);

Fiber fiber_add(const Fiber& a, const Fiber& b);
Fiber fiber_sub(const Fiber& a, const Fiber& b);
Fiber fiber_scale(cplx s, const Fiber& a);

}  // namespace fellq
