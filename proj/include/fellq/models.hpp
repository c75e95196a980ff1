#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <string>

#include "fellq/calculus.hpp"
#include "fellq/deform.hpp"
#include "fellq/norms.hpp"
#include "fellq/spectral.hpp"

namespace fellq {

struct ModelParams {
  double theta = 0.0;  // deformation parameter of the sphere / torus / lens
  int p = 0, q = 0;    // lens space integers, coprime, p != 0
  int c = 1;           // Heisenberg lattice integer, positive
  double mu = 0.0, nu = 0.0;  // Heisenberg flow directions
};

// Analytic descriptors of seeded band-limited test data.  The model samples
// a recipe onto its grid; test oracles evaluate the same recipe analytically
// and independently.

// amp * z^i zbar^j w^k wbar^l on S^3, gauge grading i-j+k-l.
struct SphereMonomial {
  int i = 0, j = 0, k = 0, l = 0;
  cplx amp{1.0, 0.0};
};

// amp * e^{2pi i (a u1 + b u2)} on T^2, gauge grading a.
struct TorusMode {
  int a = 0, b = 0;
  cplx amp{1.0, 0.0};
};

// Weight-k Heisenberg datum.  For k != 0 (K = k c) the mode contributes
//   amp * sum_{j in Z} e^{2pi i (r + j K) y} exp(-pi ((x + j - x0)/sigma)^2),
// a rapidly convergent quasi-periodic sum in the class X^c; for k == 0 it is
// the plain double mode amp * e^{2pi i (m x + n y)}.
struct HeisenbergMode {
  int r = 0;
  int m = 0, n = 0;
  double x0 = 0.5, sigma = 0.2;
  cplx amp{1.0, 0.0};
};

struct FiberRecipe {
  GroupIndex grading;
  std::vector<SphereMonomial> sphere_terms;
  std::vector<TorusMode> torus_terms;
  std::vector<HeisenbergMode> heis_terms;
};

// A concrete realization of a deformation data triple (Z^d, gamma, theta^h):
// grid geometry, gauge action, deforming flow family, analytic derivative
// rules, and named generators.
struct ModelSpec {
  std::string name;
  int group_rank = 1;
  ModelParams params;
  GeometryPtr geometry;
  GaugeAction gauge;
  DeformingAction deforming;
  FlowCalculus calculus;
  std::map<std::string, GradedElement> generators;

  std::function<FiberRecipe(const GroupIndex&, std::mt19937_64&)> random_recipe;
  std::function<Fiber(const FiberRecipe&)> realize;
  std::function<Fiber(const GroupIndex&)> canonical_fiber;

  // Lens models: the order-p symmetry and its order; empty otherwise.
  CommutingAction symmetry;
  int symmetry_order = 0;
};

// Sanity model: gauge rotates the first circle of T^2, theta^h_n rotates the
// second by h n.  Generators U in B_1 and V in B_0 with V x U = e^{2pi i h} U x V.
ModelSpec build_torus(double theta, const std::vector<int>& grid = {});

// Matsumoto sphere chart (alpha, phi, psi), z = cos(alpha) e^{2pi i phi},
// w = sin(alpha) e^{2pi i psi}; gauge shifts phi and psi together, theta^h_n
// shifts phi by h n.  Generators Z, W of grading 1.
ModelSpec build_sphere(double theta, const std::vector<int>& grid = {});

// Sphere model extended with the order-p symmetry tau(z,w) = (rho z, rho^q w),
// rho = e^{2pi i / p}; lens elements are the tau-averaged graded elements.
// Rejects non-coprime (p, q) and p == 0.
ModelSpec build_lens(int p, int q, double theta, const std::vector<int>& grid = {});

// Quantum Heisenberg manifold data: weight-k fibers stored as (k, g(x,y))
// with the quasi-periodic twist folded in; the gauge acts as the scalar
// e^{2pi i k t}; theta^h translates (x,y) by (2 h mu, 2 h nu) with the exact
// quadratic phase of the group law.
ModelSpec build_heisenberg(int c, double mu, double nu, const std::vector<int>& grid = {});

ModelSpec build_model(const std::string& name, const ModelParams& params,
                      const std::vector<int>& grid = {});

// Group averaging (1/p) sum_k tau^k over the model symmetry, termwise.
GradedElement average_projection(const ModelSpec& model, const GradedElement& a);

// Fixed-point generators H = W^<> x W and M = W x Z^<> of the sphere, with
// the residuals of their defining relations:
//   (i) H^<> = H, (ii) M^<> x M = M x M^<>, (iii) M x H = H x M,
//   (iv) M^<> x M + H x H = H.
struct SphereFixedPoint {
  GradedElement H, M;
  double res_selfadjoint = 0.0;
  double res_normal = 0.0;
  double res_commute = 0.0;
  double res_quadric = 0.0;
};
SphereFixedPoint sphere_fixed_generators(const ModelSpec& sphere);

// L1 residuals between the engine products and the four closed-form
// displays for a in B_0 <-> f, b, c in B_1 <-> g, h (evaluated at hbar = 1):
//   a x b = f g,  b x a = g . f(.+2mu, .+2nu),
//   b^<> x c = conj(g(.-2mu,.-2nu)) h(.-2mu,.-2nu),  b x c^<> = g conj(h).
struct HeisClosedForms {
  double res_ab = 0.0, res_ba = 0.0, res_bstar_c = 0.0, res_b_cstar = 0.0;
};
HeisClosedForms heis_closed_form_residuals(const ModelSpec& heis, const Fiber& a, const Fiber& b,
                                           const Fiber& c);

// Seeded band-limited graded element supported on the given gradings.
GradedElement random_graded(const ModelSpec& model, const std::vector<GroupIndex>& support,
                            std::mt19937_64& rng);

// Deterministic trial sections for reduced-norm Rayleigh quotients: canonical
// single-term sections for |t| <= 2 plus `count` seeded random band-limited
// sections.
std::vector<ModuleVector> make_trial_sections(const ModelSpec& model, int count,
                                              std::uint64_t seed);

inline constexpr std::uint64_t kDefaultSeed = 0xFE11;

}  // namespace fellq
