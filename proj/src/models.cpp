#include "fellq/models.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace fellq {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kPi = 3.1415926535897932384626433832795;

cplx unit_phase(double turns) { return {std::cos(kTwoPi * turns), std::sin(kTwoPi * turns)}; }

double uniform01(std::mt19937_64& rng) {
  // fixed mapping, independent of the standard library's distribution choices
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

cplx unit_disk(std::mt19937_64& rng) {
  // rejection-free: radius sqrt for uniformity is irrelevant here, any
  // deterministic nondegenerate choice works
  const double r = 0.3 + 0.7 * uniform01(rng);
  const double a = uniform01(rng);
  return r * unit_phase(a);
}

int uniform_int(std::mt19937_64& rng, int lo, int hi) {  // inclusive bounds
  const auto span = static_cast<std::uint64_t>(hi - lo + 1);
  return lo + static_cast<int>(rng() % span);
}

GridFunction sample_grid(const GeometryPtr& geom, Twist twist,
                         const std::function<cplx(const std::vector<double>&)>& fn) {
  std::vector<cplx> out(geom->total());
  const int rank = geom->rank();
  std::vector<int> idx(static_cast<std::size_t>(rank), 0);
  std::vector<double> coords(static_cast<std::size_t>(rank), 0.0);
  for (std::size_t flat = 0; flat < geom->total(); ++flat) {
    for (int j = 0; j < rank; ++j)
      coords[static_cast<std::size_t>(j)] = geom->axis(j).coordinate(idx[static_cast<std::size_t>(j)]);
    out[flat] = fn(coords);
    for (int j = rank - 1; j >= 0; --j) {
      if (++idx[static_cast<std::size_t>(j)] < geom->axis(j).size) break;
      idx[static_cast<std::size_t>(j)] = 0;
    }
  }
  return GridFunction(geom, twist, std::move(out));
}

GroupIndex g1(int t) { return GroupIndex{t}; }

// ---------------------------------------------------------------------------
// Sphere

struct SphereData {
  GeometryPtr geom;

  cplx eval_monomial(const SphereMonomial& m, double alpha, double phi, double psi) const {
    const double ca = std::cos(alpha), sa = std::sin(alpha);
    const double radial = std::pow(ca, m.i + m.j) * std::pow(sa, m.k + m.l);
    return m.amp * radial * unit_phase((m.i - m.j) * phi + (m.k - m.l) * psi);
  }
};

ModelSpec make_sphere_model(double theta, const std::vector<int>& grid, bool lens, int p, int q) {
  std::vector<int> sizes = grid.empty() ? std::vector<int>{33, 64, 64} : grid;
  if (sizes.size() != 3) throw std::invalid_argument("sphere grid must have three axes");
  if (sizes[0] % 2 == 0)
    throw std::invalid_argument("sphere alpha axis size must be odd (pi/4 on grid)");
  if (sizes[1] != sizes[2])
    throw std::invalid_argument("sphere phi and psi axes must match (joint gauge shift)");

  ModelSpec m;
  m.name = lens ? "lens" : "sphere";
  m.group_rank = 1;
  m.params.theta = theta;
  if (lens) {
    m.params.p = p;
    m.params.q = q;
  }
  m.geometry = std::make_shared<GridGeometry>(std::vector<Axis>{
      {"alpha", sizes[0], false, 0.0, kPi / 2.0},
      {"phi", sizes[1], true, 0.0, 1.0},
      {"psi", sizes[2], true, 0.0, 1.0},
  });
  const GeometryPtr geom = m.geometry;

  m.gauge.lattice = {sizes[1]};
  m.gauge.apply_raw = [](const GridFunction& f, const TorusPoint& x) {
    GridFunction out = shift_axis(f, 1, x[0]);
    return shift_axis(out, 2, x[0]);
  };

  m.deforming.apply = [](const Fiber& b, const GroupIndex& t, double hbar) {
    return Fiber(b.grading(), shift_axis(b.data(), 1, hbar * t[0]));
  };
  m.deforming.apply_batch = [](const Fiber& b, const std::vector<GroupIndex>& ts, double hbar) {
    std::vector<double> deltas(ts.size());
    for (std::size_t i = 0; i < ts.size(); ++i) deltas[i] = hbar * ts[i][0];
    std::vector<GridFunction> moved = shift_axis_batch(b.data(), 1, deltas);
    std::vector<Fiber> out;
    out.reserve(moved.size());
    for (auto& g : moved) out.emplace_back(b.grading(), std::move(g));
    return out;
  };

  m.calculus.flow_rank = 1;
  // D1 differentiates the z rotation (phi axis), D2 the w rotation (psi);
  // the R^2 action gives dx = D1 + D2 and dy = D1.
  m.calculus.x_derivative = [](const Fiber& f, int) {
    return Fiber(f.grading(), derivative_axis(f.data(), 1) + derivative_axis(f.data(), 2));
  };
  m.calculus.y_derivative = [](const Fiber& f, int) {
    return Fiber(f.grading(), derivative_axis(f.data(), 1));
  };
  m.calculus.x_flow = [](const Fiber& f, int, double lambda) {
    return Fiber(f.grading(), shift_axis(shift_axis(f.data(), 1, lambda), 2, lambda));
  };
  m.calculus.y_flow = [](const Fiber& f, int, double lambda) {
    return Fiber(f.grading(), shift_axis(f.data(), 1, lambda));
  };

  SphereData data{geom};
  auto realize_recipe = [data](const FiberRecipe& r) {
    GridFunction g = sample_grid(data.geom, Twist{}, [&](const std::vector<double>& c) {
      cplx v = 0.0;
      for (const auto& mono : r.sphere_terms) v += data.eval_monomial(mono, c[0], c[1], c[2]);
      return v;
    });
    return Fiber(r.grading, std::move(g));
  };
  m.realize = realize_recipe;

  m.random_recipe = [](const GroupIndex& t, std::mt19937_64& rng) {
    FiberRecipe r;
    r.grading = t;
    const int terms = 2 + uniform_int(rng, 0, 1);
    for (int n = 0; n < terms; ++n) {
      SphereMonomial mono;
      for (;;) {
        mono.i = uniform_int(rng, 0, 2);
        mono.j = uniform_int(rng, 0, 2);
        mono.k = uniform_int(rng, 0, 2);
        mono.l = mono.i - mono.j + mono.k - t[0];
        if (mono.l >= 0 && mono.l <= 2) break;
      }
      mono.amp = unit_disk(rng);
      r.sphere_terms.push_back(mono);
    }
    return r;
  };

  m.canonical_fiber = [realize_recipe](const GroupIndex& t) {
    FiberRecipe r;
    r.grading = t;
    SphereMonomial mono;  // Z^t or conj(Z)^{|t|}; constant 1 at t = 0
    if (t[0] >= 0)
      mono.i = t[0];
    else
      mono.j = -t[0];
    r.sphere_terms.push_back(mono);
    return realize_recipe(r);
  };

  {
    FiberRecipe rz;
    rz.grading = g1(1);
    rz.sphere_terms.push_back({1, 0, 0, 0, 1.0});
    FiberRecipe rw;
    rw.grading = g1(1);
    rw.sphere_terms.push_back({0, 0, 1, 0, 1.0});
    m.generators.emplace("Z", GradedElement(realize_recipe(rz)));
    m.generators.emplace("W", GradedElement(realize_recipe(rw)));
  }

  if (lens) {
    if (p == 0) throw std::invalid_argument("lens: p must be nonzero");
    if (std::gcd(p, q) != 1) throw std::invalid_argument("lens: p and q must be coprime");
    const double pd = static_cast<double>(p);
    m.symmetry = [pd, q](const Fiber& f) {
      GridFunction out = shift_axis(f.data(), 1, 1.0 / pd);
      return Fiber(f.grading(), shift_axis(out, 2, static_cast<double>(q) / pd));
    };
    m.symmetry_order = std::abs(p);
  }
  return m;
}

// ---------------------------------------------------------------------------
// Torus

ModelSpec make_torus_model(double theta, const std::vector<int>& grid) {
  std::vector<int> sizes = grid.empty() ? std::vector<int>{64, 64} : grid;
  if (sizes.size() != 2) throw std::invalid_argument("torus grid must have two axes");

  ModelSpec m;
  m.name = "torus";
  m.group_rank = 1;
  m.params.theta = theta;
  m.geometry = std::make_shared<GridGeometry>(std::vector<Axis>{
      {"u1", sizes[0], true, 0.0, 1.0},
      {"u2", sizes[1], true, 0.0, 1.0},
  });
  const GeometryPtr geom = m.geometry;

  m.gauge.lattice = {sizes[0]};
  m.gauge.apply_raw = [](const GridFunction& f, const TorusPoint& x) {
    return shift_axis(f, 0, x[0]);
  };
  m.deforming.apply = [](const Fiber& b, const GroupIndex& t, double hbar) {
    return Fiber(b.grading(), shift_axis(b.data(), 1, hbar * t[0]));
  };
  m.deforming.apply_batch = [](const Fiber& b, const std::vector<GroupIndex>& ts, double hbar) {
    std::vector<double> deltas(ts.size());
    for (std::size_t i = 0; i < ts.size(); ++i) deltas[i] = hbar * ts[i][0];
    std::vector<GridFunction> moved = shift_axis_batch(b.data(), 1, deltas);
    std::vector<Fiber> out;
    out.reserve(moved.size());
    for (auto& g : moved) out.emplace_back(b.grading(), std::move(g));
    return out;
  };

  m.calculus.flow_rank = 1;
  m.calculus.x_derivative = [](const Fiber& f, int) {
    return Fiber(f.grading(), derivative_axis(f.data(), 0));
  };
  m.calculus.y_derivative = [](const Fiber& f, int) {
    return Fiber(f.grading(), derivative_axis(f.data(), 1));
  };
  m.calculus.x_flow = [](const Fiber& f, int, double lambda) {
    return Fiber(f.grading(), shift_axis(f.data(), 0, lambda));
  };
  m.calculus.y_flow = [](const Fiber& f, int, double lambda) {
    return Fiber(f.grading(), shift_axis(f.data(), 1, lambda));
  };

  auto realize_recipe = [geom](const FiberRecipe& r) {
    GridFunction g = sample_grid(geom, Twist{}, [&](const std::vector<double>& c) {
      cplx v = 0.0;
      for (const auto& mode : r.torus_terms) v += mode.amp * unit_phase(mode.a * c[0] + mode.b * c[1]);
      return v;
    });
    return Fiber(r.grading, std::move(g));
  };
  m.realize = realize_recipe;

  m.random_recipe = [](const GroupIndex& t, std::mt19937_64& rng) {
    FiberRecipe r;
    r.grading = t;
    const int terms = 2 + uniform_int(rng, 0, 1);
    for (int n = 0; n < terms; ++n)
      r.torus_terms.push_back({t[0], uniform_int(rng, -3, 3), unit_disk(rng)});
    return r;
  };

  m.canonical_fiber = [realize_recipe](const GroupIndex& t) {
    FiberRecipe r;
    r.grading = t;
    r.torus_terms.push_back({t[0], 0, 1.0});
    return realize_recipe(r);
  };

  {
    FiberRecipe ru;
    ru.grading = g1(1);
    ru.torus_terms.push_back({1, 0, 1.0});
    FiberRecipe rv;  // V = e^{-2pi i u2}, grading 0: V x U = e^{2pi i h} U x V
    rv.grading = g1(0);
    rv.torus_terms.push_back({0, -1, 1.0});
    m.generators.emplace("U", GradedElement(realize_recipe(ru)));
    m.generators.emplace("V", GradedElement(realize_recipe(rv)));
  }
  return m;
}

// ---------------------------------------------------------------------------
// Heisenberg

struct HeisData {
  GeometryPtr geom;
  int c = 1;
  double mu = 0.0, nu = 0.0;

  // theta-type flow with parameter b (= hbar * n): pullback by
  // [x,y,z] -> [x + 2b mu, y + 2b nu, z + 2b nu x + 2 b^2 mu nu], reduced to
  // the (k, g(x,y)) representation.
  Fiber flow(const Fiber& f, double b) const {
    if (b == 0.0) return f;
    const int F = f.twist().frequency;  // = k c
    GridFunction out = shift(f.data(), {2.0 * b * mu, 2.0 * b * nu});
    if (F != 0) out = linear_phase(out, 0, F * 2.0 * b * nu, F * 2.0 * b * b * mu * nu);
    return Fiber(f.grading(), std::move(out));
  }

  cplx eval_mode(const HeisenbergMode& mode, int K, double x, double y) const {
    if (K == 0) return mode.amp * unit_phase(mode.m * x + mode.n * y);
    cplx v = 0.0;
    for (int j = -4; j <= 4; ++j) {
      const double u = (x + j - mode.x0) / mode.sigma;
      v += unit_phase((mode.r + static_cast<double>(j) * K) * y) * std::exp(-kPi * u * u);
    }
    return mode.amp * v;
  }
};

ModelSpec make_heisenberg_model(int c, double mu, double nu, const std::vector<int>& grid) {
  if (c < 1) throw std::invalid_argument("heisenberg: c must be a positive integer");
  std::vector<int> sizes = grid.empty() ? std::vector<int>{64, 64} : grid;
  if (sizes.size() != 2) throw std::invalid_argument("heisenberg grid must have two axes");

  ModelSpec m;
  m.name = "heisenberg";
  m.group_rank = 1;
  m.params.c = c;
  m.params.mu = mu;
  m.params.nu = nu;
  m.geometry = std::make_shared<GridGeometry>(std::vector<Axis>{
      {"x", sizes[0], true, 0.0, 1.0},
      {"y", sizes[1], true, 0.0, 1.0},
  });
  const GeometryPtr geom = m.geometry;
  HeisData data{geom, c, mu, nu};

  // gamma_{e^{2pi i t}} shifts z by t/c; on the reduced fibers this is the
  // scalar e^{2pi i k t}, k read off the twist.
  m.gauge.lattice = {64};
  const int cc = c;
  m.gauge.apply_raw = [cc](const GridFunction& f, const TorusPoint& x) {
    const int F = f.twist().frequency;
    if (F % cc != 0) throw std::invalid_argument("heisenberg gauge: twist not a multiple of c");
    GridFunction out = f;
    out *= unit_phase(static_cast<double>(F / cc) * x[0]);
    return out;
  };

  m.deforming.apply = [data](const Fiber& b, const GroupIndex& t, double hbar) {
    return data.flow(b, hbar * t[0]);
  };

  m.calculus.flow_rank = 1;
  // x-direction: d_a = c^{-1} d_3, i.e. multiplication by 2 pi i k.
  m.calculus.x_derivative = [cc](const Fiber& f, int) {
    const int k = f.twist().frequency / cc;
    return fiber_scale(cplx(0.0, kTwoPi * k), f);
  };
  // y-direction: d_b = 2 mu d_1 + 2 nu d_2 + 2 nu x d_3, with d_3 = 2 pi i k c.
  m.calculus.y_derivative = [data](const Fiber& f, int) {
    const int F = f.twist().frequency;
    GridFunction out = 2.0 * data.mu * derivative_axis(f.data(), 0) +
                       2.0 * data.nu * derivative_axis(f.data(), 1);
    if (F != 0) {
      GridFunction xg = coordinate_multiply(f.data(), 0);
      xg *= cplx(0.0, 2.0 * kTwoPi * F * data.nu);
      out += xg;
    }
    return Fiber(f.grading(), std::move(out));
  };
  m.calculus.x_flow = [cc](const Fiber& f, int, double lambda) {
    const int k = f.twist().frequency / cc;
    return fiber_scale(unit_phase(k * lambda), f);
  };
  m.calculus.y_flow = [data](const Fiber& f, int, double lambda) { return data.flow(f, lambda); };

  auto realize_recipe = [data](const FiberRecipe& r) {
    const int K = r.grading[0] * data.c;
    GridFunction g = sample_grid(data.geom, Twist{K}, [&](const std::vector<double>& cds) {
      cplx v = 0.0;
      for (const auto& mode : r.heis_terms) v += data.eval_mode(mode, K, cds[0], cds[1]);
      return v;
    });
    return Fiber(r.grading, std::move(g));
  };
  m.realize = realize_recipe;

  m.random_recipe = [cc](const GroupIndex& t, std::mt19937_64& rng) {
    FiberRecipe r;
    r.grading = t;
    const int K = std::abs(t[0] * cc);
    const int terms = 2 + uniform_int(rng, 0, 1);
    for (int n = 0; n < terms; ++n) {
      HeisenbergMode mode;
      if (K == 0) {
        mode.m = uniform_int(rng, -3, 3);
        mode.n = uniform_int(rng, -3, 3);
      } else {
        mode.r = uniform_int(rng, 0, K - 1);
        mode.x0 = 0.2 + 0.6 * uniform01(rng);
        mode.sigma = 0.15 + 0.1 * uniform01(rng);
      }
      mode.amp = unit_disk(rng);
      r.heis_terms.push_back(mode);
    }
    return r;
  };

  m.canonical_fiber = [realize_recipe](const GroupIndex& t) {
    FiberRecipe r;
    r.grading = t;
    HeisenbergMode mode;  // k = 0: constant 1; else the centered theta-type sum
    if (t[0] == 0) {
      mode.m = 0;
      mode.n = 0;
    }
    r.heis_terms.push_back(mode);
    return realize_recipe(r);
  };

  {
    FiberRecipe ru;  // e^{2pi i x} in B_0
    ru.grading = g1(0);
    ru.heis_terms.push_back({0, 1, 0, 0.0, 0.0, 1.0});
    FiberRecipe rv;  // e^{2pi i y} in B_0
    rv.grading = g1(0);
    rv.heis_terms.push_back({0, 0, 1, 0.0, 0.0, 1.0});
    m.generators.emplace("U", GradedElement(realize_recipe(ru)));
    m.generators.emplace("V", GradedElement(realize_recipe(rv)));
    m.generators.emplace("E", GradedElement(m.canonical_fiber(g1(1))));
  }
  return m;
}

}  // namespace

ModelSpec build_torus(double theta, const std::vector<int>& grid) {
  return make_torus_model(theta, grid);
}

ModelSpec build_sphere(double theta, const std::vector<int>& grid) {
  return make_sphere_model(theta, grid, false, 0, 0);
}

ModelSpec build_lens(int p, int q, double theta, const std::vector<int>& grid) {
  return make_sphere_model(theta, grid, true, p, q);
}

ModelSpec build_heisenberg(int c, double mu, double nu, const std::vector<int>& grid) {
  return make_heisenberg_model(c, mu, nu, grid);
}

ModelSpec build_model(const std::string& name, const ModelParams& params,
                      const std::vector<int>& grid) {
  if (name == "torus") return build_torus(params.theta, grid);
  if (name == "sphere") return build_sphere(params.theta, grid);
  if (name == "lens") return build_lens(params.p, params.q, params.theta, grid);
  if (name == "heisenberg") return build_heisenberg(params.c, params.mu, params.nu, grid);
  throw std::invalid_argument("unknown model: " + name);
}

GradedElement average_projection(const ModelSpec& model, const GradedElement& a) {
  if (!model.symmetry || model.symmetry_order < 1)
    throw std::invalid_argument("average_projection: model has no finite symmetry");
  GradedElement sum = a;
  GradedElement powered = a;
  for (int k = 1; k < model.symmetry_order; ++k) {
    powered = extend_action(model.symmetry, powered);
    sum += powered;
  }
  sum *= cplx(1.0 / model.symmetry_order, 0.0);
  return sum;
}

SphereFixedPoint sphere_fixed_generators(const ModelSpec& sphere) {
  if (sphere.generators.count("Z") == 0 || sphere.generators.count("W") == 0)
    throw std::invalid_argument("sphere_fixed_generators: needs a sphere-type model");
  const double h = sphere.params.theta;
  const auto& th = sphere.deforming;
  const GradedElement& Z = sphere.generators.at("Z");
  const GradedElement& W = sphere.generators.at("W");

  SphereFixedPoint out;
  out.H = deformed_product(deformed_star(W, th, h), W, th, h);
  out.M = deformed_product(W, deformed_star(Z, th, h), th, h);

  auto l1 = [](const GradedElement& e) { return l1_norm(e); };
  const GradedElement Hs = deformed_star(out.H, th, h);
  out.res_selfadjoint = l1(Hs - out.H);
  const GradedElement Ms = deformed_star(out.M, th, h);
  out.res_normal =
      l1(deformed_product(Ms, out.M, th, h) - deformed_product(out.M, Ms, th, h));
  out.res_commute =
      l1(deformed_product(out.M, out.H, th, h) - deformed_product(out.H, out.M, th, h));
  out.res_quadric = l1(deformed_product(Ms, out.M, th, h) +
                       deformed_product(out.H, out.H, th, h) - out.H);
  return out;
}

HeisClosedForms heis_closed_form_residuals(const ModelSpec& heis, const Fiber& a, const Fiber& b,
                                           const Fiber& c) {
  if (heis.name != "heisenberg")
    throw std::invalid_argument("heis_closed_form_residuals: not a heisenberg model");
  if (!a.grading().is_zero() || b.grading()[0] != 1 || c.grading()[0] != 1)
    throw std::invalid_argument("heis_closed_form_residuals: need a in B_0 and b, c in B_1");
  const double mu = heis.params.mu, nu = heis.params.nu;
  const auto& th = heis.deforming;

  auto l1 = [](const GradedElement& e) { return l1_norm(e); };
  const GradedElement A(a), B(b), C(c);

  // a x b = f g (pointwise)
  const GradedElement ab = deformed_product(A, B, th, 1.0);
  const GradedElement ab_closed(fiber_multiply(a, b));

  // b x a = g(x,y) f(x+2mu, y+2nu)
  const GradedElement ba = deformed_product(B, A, th, 1.0);
  const Fiber a_shift(a.grading(), shift(a.data(), {2.0 * mu, 2.0 * nu}));
  const GradedElement ba_closed(fiber_multiply(b, a_shift));

  // b^<> x c = conj(g(x-2mu, y-2nu)) h(x-2mu, y-2nu)
  const GradedElement bsc =
      deformed_product(deformed_star(B, th, 1.0), C, th, 1.0);
  const Fiber b_back(b.grading(), shift(b.data(), {-2.0 * mu, -2.0 * nu}));
  const Fiber c_back(c.grading(), shift(c.data(), {-2.0 * mu, -2.0 * nu}));
  const GradedElement bsc_closed(fiber_multiply(fiber_star(b_back), c_back));

  // b x c^<> = g conj(h)
  const GradedElement bcs =
      deformed_product(B, deformed_star(C, th, 1.0), th, 1.0);
  const GradedElement bcs_closed(fiber_multiply(b, fiber_star(c)));

  HeisClosedForms out;
  out.res_ab = l1(ab - ab_closed);
  out.res_ba = l1(ba - ba_closed);
  out.res_bstar_c = l1(bsc - bsc_closed);
  out.res_b_cstar = l1(bcs - bcs_closed);
  return out;
}

GradedElement random_graded(const ModelSpec& model, const std::vector<GroupIndex>& support,
                            std::mt19937_64& rng) {
  GradedElement out;
  for (const auto& t : support) out.add_term(model.realize(model.random_recipe(t, rng)));
  if (model.symmetry) out = average_projection(model, out);
  return out;
}

std::vector<ModuleVector> make_trial_sections(const ModelSpec& model, int count,
                                              std::uint64_t seed) {
  std::vector<ModuleVector> trials;
  for (int t = -2; t <= 2; ++t) trials.emplace_back(GradedElement(model.canonical_fiber(g1(t))));
  std::mt19937_64 rng(seed);
  for (int n = 0; n < count; ++n) {
    const int lo = uniform_int(rng, -2, 1);
    const int len = uniform_int(rng, 1, 2);
    std::vector<GroupIndex> support;
    for (int t = lo; t < lo + len; ++t) support.push_back(g1(t));
    trials.push_back(random_graded(model, support, rng));
  }
  return trials;
}

}  // namespace fellq
