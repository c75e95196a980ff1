#pragma once

#include <functional>

#include "fellq/deform.hpp"
#include "fellq/report.hpp"

namespace fellq {

// Differential operators of the R^{2d} action phi, in the coordinate system
// (x_1..x_d, y_1..y_d): the x-flows restrict to the gauge action, the y-flows
// generate the deforming action.  Derivatives are analytic (spectral /
// eigenvalue rules per model); the flows back the finite-difference check.
struct FlowCalculus {
  int flow_rank = 0;  // d
  std::function<Fiber(const Fiber&, int)> x_derivative;
  std::function<Fiber(const Fiber&, int)> y_derivative;
  std::function<Fiber(const Fiber&, int, double)> x_flow;
  std::function<Fiber(const Fiber&, int, double)> y_flow;
};

// Termwise derivative along direction j in [0, 2d): j < d selects x_{j+1},
// j >= d selects y_{j-d+1}.  Gradings are preserved.
GradedElement partial_derivative(const GradedElement& a, int direction, const FlowCalculus& calc);

// Central finite difference (phi_{+step} - phi_{-step}) / (2 step) along the
// same direction indexing; the O(step^2) fallback used to validate the
// analytic rules.
Fiber finite_difference_derivative(const Fiber& f, int direction, const FlowCalculus& calc,
                                   double step = 1e-4);

// {f,g} = sum_j dx_j(f) dy_j(g) - dy_j(f) dx_j(g), with ambient products.
GradedElement poisson_bracket(const GradedElement& f, const GradedElement& g,
                              const FlowCalculus& calc);

struct TaylorCheck {
  double residual = 0.0;  // ||(f x_h g - fg)/h - (1/2pi i) sum_j dx_j f dy_j g||
  double bound = 0.0;     // |h| ||f|| ||sum_{j,k} t_j t_k dy_j dy_k g||
};

// First-order Taylor remainder of the deformed product on single fibers,
// against its second-derivative bound.  Rejects hbar == 0.
TaylorCheck taylor_residual_and_bound(const Fiber& f, const Fiber& g, double hbar,
                                      const DeformingAction& theta, const FlowCalculus& calc);

// Per hbar: L1 norm of (f x_h g - fg)/h - (1/2pi i) sum_j dx_j f dy_j g and
// the summed single-fiber bound; rows sorted by hbar descending.
// Columns: hbar, residual_l1, lemma_bound, residual_over_hbar.
ScanReport derivative_limit_scan(const GradedElement& f, const GradedElement& g,
                                 const std::vector<double>& hbar_grid,
                                 const DeformingAction& theta, const FlowCalculus& calc);

// Per hbar: L1 norm of (f x_h g - g x_h f - [f,g])/h - (1/2pi i){f,g}, the
// commutator [.,.] taken with the ambient product.
// Columns: hbar, residual_l1, residual_over_hbar.
ScanReport commutator_limit_scan(const GradedElement& f, const GradedElement& g,
                                 const std::vector<double>& hbar_grid,
                                 const DeformingAction& theta, const FlowCalculus& calc);

// Least-squares slope of log(y) against log(x); points with y <= floor are
// skipped so roundoff-dominated rows do not pollute remainder-scaling fits.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y,
                    double floor = 1e-14);

// 25 log-spaced points in [1e-4, 1e-1], the default scan grid.
std::vector<double> default_hbar_grid();
std::vector<double> log_spaced(double lo, double hi, int count);
std::vector<double> lin_spaced(double lo, double hi, int count);

}  // namespace fellq
