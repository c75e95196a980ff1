#include "fellq/norms.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "fellq/detail/parallel.hpp"

namespace fellq {

double l1_norm(const GradedElement& a) {
  double s = 0.0;
  for (const auto& [t, f] : a.terms()) s += fiber_norm(f);
  return s;
}

double module_norm(const ModuleVector& xi, const DeformingAction& theta, double hbar) {
  if (xi.empty()) return 0.0;
  GridFunction acc(xi.terms().begin()->second.geometry(), Twist{});
  for (const auto& [x, f] : xi.terms()) {
    const Fiber dens = fiber_multiply(fiber_star(f), f);  // |xi(x)|^2 in B_e
    acc += theta(dens, -x, hbar).data();
  }
  return std::sqrt(sup_norm(acc));
}

ModuleVector regrep_apply(const GradedElement& phi, const ModuleVector& xi,
                          const DeformingAction& theta, double hbar, int window) {
  int needed = 0;
  for (const auto& [x, px] : phi.terms())
    for (const auto& [u, xu] : xi.terms()) needed = std::max(needed, (x + u).max_abs());
  if (needed > window)
    throw std::invalid_argument("regrep_apply: window overflow; minimal sufficient K = " +
                                std::to_string(needed));
  ModuleVector out;
  for (const auto& [x, px] : phi.terms())
    for (const auto& [u, xu] : xi.terms()) out.add_term(fiber_multiply(px, theta(xu, x, hbar)));
  return out;
}

double reduced_norm_lower_bound(const GradedElement& phi, const DeformingAction& theta,
                                double hbar, std::span<const ModuleVector> trials, int window) {
  if (trials.empty()) throw std::invalid_argument("reduced_norm_lower_bound: no trial vectors");
  std::vector<double> quotients(trials.size(), -1.0);  // -1 marks a null trial
  detail::parallel_for(trials.size(), [&](std::size_t i) {
    const double denom = module_norm(trials[i], theta, hbar);
    if (denom <= 0.0) return;
    const ModuleVector img = regrep_apply(phi, trials[i], theta, hbar, window);
    quotients[i] = module_norm(img, theta, hbar) / denom;
  });
  double best = -1.0;
  for (double q : quotients) best = std::max(best, q);
  if (best < 0.0) throw std::invalid_argument("reduced_norm_lower_bound: all trial vectors null");
  return best;
}

NormBracket norm_bracket(const GradedElement& phi, const DeformingAction& theta, double hbar,
                         std::span<const ModuleVector> trials, int window) {
  return {reduced_norm_lower_bound(phi, theta, hbar, trials, window), l1_norm(phi)};
}

ScanReport field_scan(const GradedElement& phi, std::span<const ModuleVector> xis,
                      const std::vector<double>& hbar_grid, const DeformingAction& theta,
                      int window) {
  if (hbar_grid.empty()) throw std::invalid_argument("field_scan: empty hbar grid");
  if (xis.empty()) throw std::invalid_argument("field_scan: no trial sections");

  ScanReport report;
  report.columns = {"hbar", "l1_norm", "lower_bound"};
  for (std::size_t i = 0; i < xis.size(); ++i)
    report.columns.push_back("rayleigh_xi_" + std::to_string(i));
  report.rows.assign(hbar_grid.size(), {});

  const double l1 = l1_norm(phi);
  detail::parallel_for(hbar_grid.size(), [&](std::size_t r) {
    const double h = hbar_grid[r];
    std::vector<double> row = {h, l1, reduced_norm_lower_bound(phi, theta, h, xis, window)};
    for (const auto& xi : xis) {
      const double denom = module_norm(xi, theta, h);
      const double num = denom > 0.0
                             ? module_norm(regrep_apply(phi, xi, theta, h, window), theta, h)
                             : 0.0;
      row.push_back(denom > 0.0 ? num / denom : 0.0);
    }
    report.rows[r] = std::move(row);
  });
  return report;
}

std::vector<double> continuity_moduli(const ScanReport& report) {
  std::vector<double> mods(report.columns.size(), 0.0);
  for (std::size_t r = 1; r < report.rows.size(); ++r)
    for (std::size_t c = 0; c < report.columns.size(); ++c)
      mods[c] = std::max(mods[c], std::abs(report.rows[r][c] - report.rows[r - 1][c]));
  return mods;
}

}  // namespace fellq
