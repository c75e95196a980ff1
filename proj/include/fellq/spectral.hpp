#pragma once

#include <functional>

#include "fellq/deform.hpp"
#include "fellq/fiber.hpp"
#include "fellq/grading.hpp"

namespace fellq {

// Gauge action of the dual torus.  `lattice` holds, per dual coordinate, the
// number of aligned samples per period: for x with coordinates k/N_j the
// transform is an exact index permutation, and the Haar integral in the
// spectral projection is replaced by the exact average over this lattice.
struct GaugeAction {
  std::vector<int> lattice;
  std::function<GridFunction(const GridFunction&, const TorusPoint&)> apply_raw;

  int rank() const { return static_cast<int>(lattice.size()); }
};

// gamma_x applied to a fiber; the grading tag is preserved (each B_t is
// gamma-invariant).
Fiber apply_gauge(const GaugeAction& gauge, const Fiber& f, const TorusPoint& x);

// P_t(f): discrete average (1/prod N_j) sum_x <x,t>^{-1} gamma_x(f) over the
// aligned lattice.  Exact (not approximate) for band-limited f.  Requires
// |t_j| < N_j/2.
Fiber spectral_projection(const GridFunction& f, const GroupIndex& t, const GaugeAction& gauge);

// Termwise projection of a graded element (sums the per-term averages).
Fiber spectral_projection(const GradedElement& a, const GroupIndex& t, const GaugeAction& gauge);

// All projections P_t(f) for max_j |t_j| <= cutoff, zero fibers dropped.
GradedElement decompose(const GridFunction& f, const GaugeAction& gauge, int cutoff);

// Sum of the fiber arrays; requires a uniform twist across terms.
GridFunction reconstruct(const GradedElement& a);

// P_e, the positive conditional expectation onto B_e.
Fiber conditional_expectation(const GridFunction& f, const GaugeAction& gauge);

// sup over the support of |h(t)| * ||a_t||, the Schwartz-type seminorm.
double schwartz_seminorm(const GradedElement& a, const std::function<double(const GroupIndex&)>& h);

}  // namespace fellq
