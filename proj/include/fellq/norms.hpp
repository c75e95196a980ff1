#pragma once

#include <span>
#include <vector>

#include "fellq/deform.hpp"
#include "fellq/report.hpp"

namespace fellq {

// A compactly supported section xi in the l2-module over B_e: finitely many
// fibers xi(x) in B_x.  Structurally identical to a graded element; the
// module structure enters only through module_norm / regrep_apply below.
using ModuleVector = GradedElement;

// Bracket [lower, upper] enclosing a deformed C*-norm.
struct NormBracket {
  double lower = 0.0;
  double upper = 0.0;
};

// L1 cross-section norm sum_t ||a_t||; dominates every C*-norm of the section
// algebra and never sees the deforming action.
double l1_norm(const GradedElement& a);

// ||xi|| = || sum_x theta^h_{-x}[ xi(x)^* xi(x) ] ||^{1/2}, involution and
// product undeformed.
double module_norm(const ModuleVector& xi, const DeformingAction& theta, double hbar);

// Left regular representation: (Lambda^h_phi xi)(y) = sum_x phi(x)
// theta^h_x[xi(x^{-1}y)].  The result must fit in the window [-K,K]^d; on
// overflow an std::invalid_argument is thrown naming the minimal sufficient K.
ModuleVector regrep_apply(const GradedElement& phi, const ModuleVector& xi,
                          const DeformingAction& theta, double hbar, int window);

// Certified lower bound for the reduced norm ||phi||_h: the best Rayleigh
// quotient ||Lambda^h_phi xi|| / ||xi|| over the trial sections.
double reduced_norm_lower_bound(const GradedElement& phi, const DeformingAction& theta,
                                double hbar, std::span<const ModuleVector> trials,
                                int window = 16);

NormBracket norm_bracket(const GradedElement& phi, const DeformingAction& theta, double hbar,
                         std::span<const ModuleVector> trials, int window = 16);

// Per hbar: the (constant) L1 norm, the Rayleigh lower bound over the trial
// set, and one Rayleigh column per fixed xi.
// Columns: hbar, l1_norm, lower_bound, rayleigh_xi_0, rayleigh_xi_1, ...
ScanReport field_scan(const GradedElement& phi, std::span<const ModuleVector> xis,
                      const std::vector<double>& hbar_grid, const DeformingAction& theta,
                      int window = 16);

// Max successive difference per column, the finite-difference continuity
// modulus reported alongside field scans.
std::vector<double> continuity_moduli(const ScanReport& report);

}  // namespace fellq
