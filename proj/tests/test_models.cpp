#include <doctest.h>

#include <random>

#include "fellq/models.hpp"
#include "fellq/norms.hpp"
#include "fellq/spectral.hpp"
#include "support/oracles.hpp"

using namespace fellq;

TEST_CASE("torus relation V x U = e(theta) U x V at rational and trivial theta") {
  for (double theta : {0.0, 0.5, 0.25, 0.3}) {
    const ModelSpec m = build_torus(theta);
    const GradedElement vu = deformed_product(m.generators.at("V"), m.generators.at("U"),
                                              m.deforming, theta);
    const GradedElement uv = deformed_product(m.generators.at("U"), m.generators.at("V"),
                                              m.deforming, theta);
    CHECK(l1_norm(vu - oracles::turn(theta) * uv) < 1e-12);
  }
}

TEST_CASE("sphere relations M-1' to M-3' across theta values") {
  for (double theta : {0.0, 0.25, 0.3}) {
    const ModelSpec m = build_sphere(theta);
    const auto& th = m.deforming;
    const GradedElement& Z = m.generators.at("Z");
    const GradedElement& W = m.generators.at("W");

    const GradedElement wz = deformed_product(W, Z, th, theta);
    const GradedElement zw = deformed_product(Z, W, th, theta);
    CHECK(l1_norm(wz - oracles::turn(theta) * zw) <= 1e-12);

    const GradedElement unit(m.canonical_fiber(GroupIndex{0}));
    CHECK(l1_norm(deformed_product(deformed_star(Z, th, theta), Z, th, theta) +
                  deformed_product(deformed_star(W, th, theta), W, th, theta) - unit) <= 1e-12);

    for (const GradedElement* g : {&Z, &W}) {
      const GradedElement gs = deformed_star(*g, th, theta);
      CHECK(l1_norm(deformed_product(gs, *g, th, theta) -
                    deformed_product(*g, gs, th, theta)) <= 1e-12);
    }
  }
}

TEST_CASE("sphere fixed-point generators and their relations") {
  const ModelSpec m = build_sphere(0.3);
  const SphereFixedPoint fp = sphere_fixed_generators(m);
  CHECK(fp.res_selfadjoint <= 1e-12);
  CHECK(fp.res_normal <= 1e-12);
  CHECK(fp.res_commute <= 1e-12);
  CHECK(fp.res_quadric <= 1e-12);

  // base-point check: samples equal (w wbar, w zbar) pointwise
  const GridFunction hw = oracles::sample(m.geometry, Twist{}, [](const auto& c) {
    const cplx w = std::sin(c[0]) * oracles::turn(c[2]);
    return w * std::conj(w);
  });
  const GridFunction mw = oracles::sample(m.geometry, Twist{}, [](const auto& c) {
    const cplx z = std::cos(c[0]) * oracles::turn(c[1]);
    const cplx w = std::sin(c[0]) * oracles::turn(c[2]);
    return w * std::conj(z);
  });
  CHECK(oracles::max_abs_diff(fp.H.term(GroupIndex{0}).data(), hw) < 1e-12);
  CHECK(oracles::max_abs_diff(fp.M.term(GroupIndex{0}).data(), mw) < 1e-12);
}

TEST_CASE("sphere products are 1-periodic in theta") {
  const ModelSpec a = build_sphere(0.25);
  const ModelSpec b = build_sphere(1.25);
  const GradedElement wz_a =
      deformed_product(a.generators.at("W"), a.generators.at("Z"), a.deforming, 0.25);
  const GradedElement wz_b =
      deformed_product(b.generators.at("W"), b.generators.at("Z"), b.deforming, 1.25);
  CHECK(l1_norm(wz_a - wz_b) == 0.0);  // dyadic theta: bit-exact

  const GradedElement wz_c =
      deformed_product(a.generators.at("W"), a.generators.at("Z"), a.deforming, 0.3);
  const GradedElement wz_d =
      deformed_product(a.generators.at("W"), a.generators.at("Z"), a.deforming, 1.3);
  CHECK(l1_norm(wz_c - wz_d) < 1e-12);
}

TEST_CASE("lens construction: preconditions and averaging") {
  CHECK_THROWS_AS(build_lens(4, 2, 0.3), std::invalid_argument);
  CHECK_THROWS_AS(build_lens(0, 1, 0.3), std::invalid_argument);

  for (auto [p, q] : {std::pair{3, 1}, std::pair{5, 2}}) {
    const ModelSpec m = build_lens(p, q, 0.3);
    std::mt19937_64 rng(89);
    const GradedElement a = random_graded(m, {GroupIndex{-1}, GroupIndex{1}}, rng);

    const GradedElement once = average_projection(m, a);
    CHECK(l1_norm(average_projection(m, once) - once) <= 1e-12);

    // Z^p is tau-invariant: tau(Z^p) = rho^p Z^p = Z^p
    GradedElement zp = m.generators.at("Z");
    for (int k = 1; k < p; ++k) zp = ambient_product(zp, m.generators.at("Z"));
    CHECK(l1_norm(average_projection(m, zp) - zp) <= 1e-12);

    // averaging respects the deformed product on invariant elements
    std::mt19937_64 rng2(97);
    const GradedElement x = random_graded(m, {GroupIndex{0}, GroupIndex{1}}, rng2);
    const GradedElement y = random_graded(m, {GroupIndex{-1}, GroupIndex{0}}, rng2);
    const GradedElement lhs = average_projection(m, deformed_product(x, y, m.deforming, 0.3));
    const GradedElement rhs = deformed_product(average_projection(m, x),
                                               average_projection(m, y), m.deforming, 0.3);
    CHECK(l1_norm(lhs - rhs) <= 1e-10);

    // averaging commutes with the spectral projections
    for (const auto& [t, f] : x.terms()) {
      const Fiber left = spectral_projection(average_projection(m, x), t, m.gauge);
      const GradedElement right = average_projection(m, GradedElement(spectral_projection(x, t, m.gauge)));
      if (right.has_term(t))
        CHECK(sup_norm(left.data() - right.term(t).data()) <= 1e-12);
      else
        CHECK(fiber_norm(left) <= 1e-12);
    }
  }
}

TEST_CASE("heisenberg closed forms against analytic evaluation") {
  const ModelSpec m = build_heisenberg(1, 0.11, 0.23);
  const double mu = 0.11, nu = 0.23;
  std::mt19937_64 rng(kDefaultSeed);
  for (int n = 0; n < 4; ++n) {
    const FiberRecipe rf = m.random_recipe(GroupIndex{0}, rng);
    const FiberRecipe rg = m.random_recipe(GroupIndex{1}, rng);
    const FiberRecipe rh = m.random_recipe(GroupIndex{1}, rng);
    const Fiber a = m.realize(rf);
    const Fiber b = m.realize(rg);
    const Fiber c = m.realize(rh);

    const GradedElement A(a), B(b), C(c);
    const auto eval = [&](const FiberRecipe& r, double x, double y) {
      return oracles::eval_heis(r, m.params.c, x, y);
    };

    // engine products against the closed forms, the latter evaluated
    // analytically from the recipes (no grid interpolation on this side)
    const GradedElement ab = deformed_product(A, B, m.deforming, 1.0);
    const GridFunction ab_oracle = oracles::sample(m.geometry, Twist{1}, [&](const auto& cd) {
      return eval(rf, cd[0], cd[1]) * eval(rg, cd[0], cd[1]);
    });
    CHECK(oracles::max_abs_diff(ab.term(GroupIndex{1}).data(), ab_oracle) <= 1e-10);

    const GradedElement ba = deformed_product(B, A, m.deforming, 1.0);
    const GridFunction ba_oracle = oracles::sample(m.geometry, Twist{1}, [&](const auto& cd) {
      return eval(rg, cd[0], cd[1]) * eval(rf, cd[0] + 2 * mu, cd[1] + 2 * nu);
    });
    CHECK(oracles::max_abs_diff(ba.term(GroupIndex{1}).data(), ba_oracle) <= 1e-10);

    const GradedElement bsc = deformed_product(deformed_star(B, m.deforming, 1.0), C,
                                               m.deforming, 1.0);
    const GridFunction bsc_oracle = oracles::sample(m.geometry, Twist{0}, [&](const auto& cd) {
      return std::conj(eval(rg, cd[0] - 2 * mu, cd[1] - 2 * nu)) *
             eval(rh, cd[0] - 2 * mu, cd[1] - 2 * nu);
    });
    CHECK(oracles::max_abs_diff(bsc.term(GroupIndex{0}).data(), bsc_oracle) <= 1e-10);

    const GradedElement bcs = deformed_product(B, deformed_star(C, m.deforming, 1.0),
                                               m.deforming, 1.0);
    const GridFunction bcs_oracle = oracles::sample(m.geometry, Twist{0}, [&](const auto& cd) {
      return eval(rg, cd[0], cd[1]) * std::conj(eval(rh, cd[0], cd[1]));
    });
    CHECK(oracles::max_abs_diff(bcs.term(GroupIndex{0}).data(), bcs_oracle) <= 1e-10);

    // the packaged residual record agrees
    const HeisClosedForms cf = heis_closed_form_residuals(m, a, b, c);
    CHECK(cf.res_ab <= 1e-10);
    CHECK(cf.res_ba <= 1e-10);
    CHECK(cf.res_bstar_c <= 1e-10);
    CHECK(cf.res_b_cstar <= 1e-10);
  }
}

TEST_CASE("heisenberg degenerate cases: mu = nu = 0 and the unit") {
  const ModelSpec m0 = build_heisenberg(1, 0.0, 0.0);
  std::mt19937_64 rng(101);
  const Fiber a = m0.realize(m0.random_recipe(GroupIndex{0}, rng));
  const Fiber b = m0.realize(m0.random_recipe(GroupIndex{1}, rng));
  const GradedElement ab = deformed_product(GradedElement(a), GradedElement(b), m0.deforming, 1.0);
  const GradedElement ba = deformed_product(GradedElement(b), GradedElement(a), m0.deforming, 1.0);
  CHECK(l1_norm(ab - ba) <= 1e-12);

  const ModelSpec m = build_heisenberg(1, 0.11, 0.23);
  const Fiber unit = m.canonical_fiber(GroupIndex{0});
  std::mt19937_64 rng2(103);
  const Fiber g = m.realize(m.random_recipe(GroupIndex{1}, rng2));
  const GradedElement ug = deformed_product(GradedElement(unit), GradedElement(g), m.deforming, 1.0);
  const GradedElement gu = deformed_product(GradedElement(g), GradedElement(unit), m.deforming, 1.0);
  CHECK(l1_norm(ug - GradedElement(g)) <= 1e-12);
  CHECK(l1_norm(gu - GradedElement(g)) <= 1e-12);
}

TEST_CASE("heisenberg closed-form residuals reject weight mismatch") {
  const ModelSpec m = build_heisenberg(1, 0.11, 0.23);
  std::mt19937_64 rng(107);
  const Fiber a = m.realize(m.random_recipe(GroupIndex{0}, rng));
  const Fiber b = m.realize(m.random_recipe(GroupIndex{1}, rng));
  CHECK_THROWS_AS(heis_closed_form_residuals(m, b, b, b), std::invalid_argument);
  CHECK_THROWS_AS(heis_closed_form_residuals(m, a, a, b), std::invalid_argument);
}

TEST_CASE("heisenberg rejects non-positive c; composition honors the quadratic term") {
  CHECK_THROWS_AS(build_heisenberg(0, 0.1, 0.2), std::invalid_argument);

  const ModelSpec m = build_heisenberg(1, 0.11, 0.23);
  std::mt19937_64 rng(109);
  const Fiber b = m.realize(m.random_recipe(GroupIndex{1}, rng));
  for (double h : {0.1, 0.7071067811865476}) {
    const Fiber twice = m.deforming(m.deforming(b, GroupIndex{1}, h), GroupIndex{1}, h);
    const Fiber direct = m.deforming(b, GroupIndex{1}, 2.0 * h);
    CHECK(oracles::max_abs_diff(twice.data(), direct.data()) <= 1e-10);
  }
}

TEST_CASE("every model passes the commuting-actions requirement") {
  std::vector<ModelSpec> models;
  models.push_back(build_torus(0.3));
  models.push_back(build_sphere(0.3));
  models.push_back(build_lens(5, 2, 0.3));
  models.push_back(build_heisenberg(1, 0.11, 0.23));
  for (const auto& m : models) {
    const int n = m.gauge.lattice[0];
    std::mt19937_64 rng(113);
    const Fiber f = m.realize(m.random_recipe(GroupIndex{1}, rng));
    for (double h : {0.0, 0.1, 1.0 / 3.0, 0.7}) {
      const TorusPoint x{7.0 / n};
      const Fiber lhs = apply_gauge(m.gauge, m.deforming(f, GroupIndex{1}, h), x);
      const Fiber rhs = m.deforming(apply_gauge(m.gauge, f, x), GroupIndex{1}, h);
      CHECK(oracles::max_abs_diff(lhs.data(), rhs.data()) <= 1e-10);
    }
  }
}

TEST_CASE("random graded elements are gauge eigenvectors of their keys") {
  for (const ModelSpec& m :
       {build_sphere(0.3), build_torus(0.1), build_heisenberg(1, 0.11, 0.23)}) {
    std::mt19937_64 rng(127);
    const GradedElement a = random_graded(m, {GroupIndex{-2}, GroupIndex{1}}, rng);
    const int n = m.gauge.lattice[0];
    const TorusPoint x{9.0 / n};
    for (const auto& [t, f] : a.terms()) {
      const Fiber gx = apply_gauge(m.gauge, f, x);
      CHECK(sup_norm(gx.data() - pairing(x, t) * f.data()) <= 1e-10);
    }
  }
}
