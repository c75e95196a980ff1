#include "fellq/calculus.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fellq/detail/parallel.hpp"

namespace fellq {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;
const cplx kInvTwoPiI = cplx(0.0, -1.0 / kTwoPi);  // 1/(2 pi i)

double l1(const GradedElement& a) {
  double s = 0.0;
  for (const auto& [t, f] : a.terms()) s += fiber_norm(f);
  return s;
}

Fiber derive_fiber(const Fiber& f, int direction, const FlowCalculus& calc) {
  const int d = calc.flow_rank;
  if (direction < 0 || direction >= 2 * d)
    throw std::invalid_argument("partial_derivative: direction out of range");
  return direction < d ? calc.x_derivative(f, direction) : calc.y_derivative(f, direction - d);
}

GradedElement first_order_term(const GradedElement& f, const GradedElement& g,
                               const FlowCalculus& calc) {
  GradedElement sum;
  for (int j = 0; j < calc.flow_rank; ++j) {
    sum += ambient_product(partial_derivative(f, j, calc),
                           partial_derivative(g, calc.flow_rank + j, calc));
  }
  return kInvTwoPiI * sum;
}

void check_grid(const std::vector<double>& grid) {
  if (grid.empty()) throw std::invalid_argument("scan: empty hbar grid");
  for (double h : grid)
    if (h == 0.0) throw std::invalid_argument("scan: hbar = 0 not admissible (division by hbar)");
}

std::vector<double> descending(std::vector<double> grid) {
  std::sort(grid.begin(), grid.end(), std::greater<double>());
  return grid;
}

}  // namespace

GradedElement partial_derivative(const GradedElement& a, int direction, const FlowCalculus& calc) {
  GradedElement out;
  for (const auto& [t, f] : a.terms()) out.add_term(derive_fiber(f, direction, calc));
  return out;
}

Fiber finite_difference_derivative(const Fiber& f, int direction, const FlowCalculus& calc,
                                   double step) {
  const int d = calc.flow_rank;
  if (direction < 0 || direction >= 2 * d)
    throw std::invalid_argument("finite_difference_derivative: direction out of range");
  const auto& flow = (direction < d) ? calc.x_flow : calc.y_flow;
  const int j = (direction < d) ? direction : direction - d;
  const Fiber fwd = flow(f, j, step);
  const Fiber bwd = flow(f, j, -step);
  return fiber_scale(1.0 / (2.0 * step), fiber_sub(fwd, bwd));
}

GradedElement poisson_bracket(const GradedElement& f, const GradedElement& g,
                              const FlowCalculus& calc) {
  GradedElement sum;
  const int d = calc.flow_rank;
  for (int j = 0; j < d; ++j) {
    sum += ambient_product(partial_derivative(f, j, calc), partial_derivative(g, d + j, calc));
    sum -= ambient_product(partial_derivative(f, d + j, calc), partial_derivative(g, j, calc));
  }
  return sum;
}

TaylorCheck taylor_residual_and_bound(const Fiber& f, const Fiber& g, double hbar,
                                      const DeformingAction& theta, const FlowCalculus& calc) {
  if (hbar == 0.0)
    throw std::invalid_argument("taylor_residual_and_bound: hbar = 0; use the limit scan");

  const GradedElement fe(f), ge(g);
  GradedElement resid = deformed_product(fe, ge, theta, hbar) - ambient_product(fe, ge);
  resid *= cplx(1.0 / hbar, 0.0);
  resid -= first_order_term(fe, ge, calc);

  TaylorCheck out;
  out.residual = l1(resid);

  const GroupIndex t = f.grading();
  const int d = calc.flow_rank;
  Fiber second = fiber_scale(0.0, g);
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < d; ++k) {
      if (t[j] == 0 || t[k] == 0) continue;
      const Fiber djk = calc.y_derivative(calc.y_derivative(g, k), j);
      second = fiber_add(second, fiber_scale(static_cast<double>(t[j]) * t[k], djk));
    }
  out.bound = std::abs(hbar) * fiber_norm(f) * fiber_norm(second);
  return out;
}

ScanReport derivative_limit_scan(const GradedElement& f, const GradedElement& g,
                                 const std::vector<double>& hbar_grid,
                                 const DeformingAction& theta, const FlowCalculus& calc) {
  check_grid(hbar_grid);
  const std::vector<double> grid = descending(hbar_grid);
  const int d = calc.flow_rank;

  const GradedElement fg = ambient_product(f, g);
  const GradedElement first = first_order_term(f, g, calc);

  // Bound chain of the theorem: |h| sum_{j,k} (sum_t |t_j t_k| ||P_t f||)
  //                                           (sum_s ||P_s(dy_j dy_k g)||).
  double bound_coeff = 0.0;
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < d; ++k) {
      double af = 0.0;
      for (const auto& [t, ft] : f.terms())
        af += std::abs(static_cast<double>(t[j]) * t[k]) * fiber_norm(ft);
      const GradedElement dg = partial_derivative(partial_derivative(g, d + k, calc), d + j, calc);
      double bg = 0.0;
      for (const auto& [s, gs] : dg.terms()) bg += fiber_norm(gs);
      bound_coeff += af * bg;
    }

  ScanReport report;
  report.columns = {"hbar", "residual_l1", "lemma_bound", "residual_over_hbar"};
  report.rows.assign(grid.size(), {});
  detail::parallel_for(grid.size(), [&](std::size_t i) {
    const double h = grid[i];
    GradedElement resid = deformed_product(f, g, theta, h) - fg;
    resid *= cplx(1.0 / h, 0.0);
    resid -= first;
    const double r = l1(resid);
    report.rows[i] = {h, r, std::abs(h) * bound_coeff, r / h};
  });
  return report;
}

ScanReport commutator_limit_scan(const GradedElement& f, const GradedElement& g,
                                 const std::vector<double>& hbar_grid,
                                 const DeformingAction& theta, const FlowCalculus& calc) {
  check_grid(hbar_grid);
  const std::vector<double> grid = descending(hbar_grid);

  const GradedElement commutator = ambient_product(f, g) - ambient_product(g, f);
  const GradedElement bracket = kInvTwoPiI * poisson_bracket(f, g, calc);

  ScanReport report;
  report.columns = {"hbar", "residual_l1", "residual_over_hbar"};
  report.rows.assign(grid.size(), {});
  detail::parallel_for(grid.size(), [&](std::size_t i) {
    const double h = grid[i];
    GradedElement resid =
        deformed_product(f, g, theta, h) - deformed_product(g, f, theta, h) - commutator;
    resid *= cplx(1.0 / h, 0.0);
    resid -= bracket;
    const double r = l1(resid);
    report.rows[i] = {h, r, r / h};
  });
  return report;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y, double floor) {
  if (x.size() != y.size()) throw std::invalid_argument("loglog_slope: length mismatch");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > floor)) continue;
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  if (n < 2) throw std::invalid_argument("loglog_slope: fewer than two usable points");
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

std::vector<double> log_spaced(double lo, double hi, int count) {
  if (count < 1 || lo <= 0.0 || hi <= 0.0) throw std::invalid_argument("log_spaced: bad grid spec");
  std::vector<double> g(static_cast<std::size_t>(count));
  if (count == 1) {
    g[0] = lo;
    return g;
  }
  const double llo = std::log(lo), lhi = std::log(hi);
  for (int i = 0; i < count; ++i)
    g[static_cast<std::size_t>(i)] = std::exp(llo + (lhi - llo) * i / (count - 1));
  g.front() = lo;  // endpoints exact, not exp(log(.)) round trips
  g.back() = hi;
  return g;
}

std::vector<double> lin_spaced(double lo, double hi, int count) {
  if (count < 1) throw std::invalid_argument("lin_spaced: bad grid spec");
  std::vector<double> g(static_cast<std::size_t>(count));
  if (count == 1) {
    g[0] = lo;
    return g;
  }
  for (int i = 0; i < count; ++i)
    g[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (count - 1);
  g.front() = lo;
  g.back() = hi;
  return g;
}

std::vector<double> default_hbar_grid() { return log_spaced(1e-4, 1e-1, 25); }

int ScanReport::column_index(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (columns[i] == name) return static_cast<int>(i);
  throw std::out_of_range("ScanReport: no column named " + name);
}

std::vector<double> ScanReport::column(const std::string& name) const {
  const int c = column_index(name);
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r[static_cast<std::size_t>(c)]);
  return out;
}

}  // namespace fellq
