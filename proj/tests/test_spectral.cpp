#include <doctest.h>

#include <random>

#include "fellq/models.hpp"
#include "fellq/norms.hpp"
#include "fellq/spectral.hpp"
#include "support/oracles.hpp"

using namespace fellq;

TEST_CASE("projections pick gauge eigenvectors: Z, constants") {
  const ModelSpec m = build_sphere(0.0);
  const Fiber Z = m.generators.at("Z").term(GroupIndex{1});

  const Fiber p1 = spectral_projection(Z.data(), GroupIndex{1}, m.gauge);
  CHECK(oracles::max_abs_diff(p1.data(), Z.data()) < 1e-12);
  CHECK(fiber_norm(spectral_projection(Z.data(), GroupIndex{0}, m.gauge)) < 1e-12);

  const Fiber unit = m.canonical_fiber(GroupIndex{0});
  CHECK(oracles::max_abs_diff(spectral_projection(unit.data(), GroupIndex{0}, m.gauge).data(),
                              unit.data()) < 1e-13);
  for (int t : {-2, -1, 1, 2})
    CHECK(fiber_norm(spectral_projection(unit.data(), GroupIndex{t}, m.gauge)) < 1e-13);
}

TEST_CASE("linearity: P_1(Z + W Wbar) = Z and P_0 = W Wbar") {
  const ModelSpec m = build_sphere(0.0);
  const GradedElement Z = m.generators.at("Z");
  const GradedElement W = m.generators.at("W");
  const GradedElement wwbar = ambient_product(W, ambient_star(W));
  const GridFunction raw = reconstruct(Z + wwbar);

  const Fiber p1 = spectral_projection(raw, GroupIndex{1}, m.gauge);
  const Fiber p0 = spectral_projection(raw, GroupIndex{0}, m.gauge);
  CHECK(oracles::max_abs_diff(p1.data(), Z.term(GroupIndex{1}).data()) < 1e-12);
  CHECK(oracles::max_abs_diff(p0.data(), wwbar.term(GroupIndex{0}).data()) < 1e-12);
}

TEST_CASE("decompose then reconstruct is the identity on band-limited data") {
  const ModelSpec m = build_torus(0.0);
  std::mt19937_64 rng(43);
  const GradedElement a =
      random_graded(m, {GroupIndex{-3}, GroupIndex{0}, GroupIndex{2}}, rng);
  const GridFunction raw = reconstruct(a);
  const GradedElement dec = decompose(raw, m.gauge, 8);
  CHECK(oracles::max_abs_diff(reconstruct(dec), raw) < 1e-12);

  // a single fiber decomposes to itself
  const Fiber b = a.terms().begin()->second;
  const GradedElement single = decompose(b.data(), m.gauge, 8);
  CHECK(single.term_count() == 1);
  CHECK(oracles::max_abs_diff(single.term(b.grading()).data(), b.data()) < 1e-12);
}

TEST_CASE("smooth bump in the gauge angle decays below 1e-8 by |t| = 8") {
  const ModelSpec m = build_torus(0.0);
  const GridFunction bump = oracles::sample(m.geometry, Twist{}, [](const auto& c) {
    return cplx(std::exp(0.5 * (std::cos(6.283185307179586 * c[0]) - 1.0)), 0.0);
  });
  const GradedElement dec = decompose(bump, m.gauge, 8);
  CHECK(fiber_norm(spectral_projection(bump, GroupIndex{1}, m.gauge)) > 1e-3);
  for (int t : {-8, 8}) {
    const Fiber tail = spectral_projection(bump, GroupIndex{t}, m.gauge);
    CHECK(fiber_norm(tail) < 1e-8);
    CHECK(fiber_norm(tail) > 0.0);
  }
  CHECK(oracles::max_abs_diff(reconstruct(dec), bump) < 1e-8);
}

TEST_CASE("conditional expectation: squares, eigenvectors, cross terms") {
  const ModelSpec m = build_sphere(0.0);
  const GradedElement Z = m.generators.at("Z");
  const GradedElement W = m.generators.at("W");

  const GradedElement zz = ambient_product(Z, ambient_star(Z));
  const GridFunction raw_zz = reconstruct(zz);
  CHECK(oracles::max_abs_diff(conditional_expectation(raw_zz, m.gauge).data(), raw_zz) < 1e-12);

  CHECK(fiber_norm(conditional_expectation(reconstruct(Z), m.gauge)) < 1e-12);

  // (Z + W*)(Z* + W): the cross terms land at gradings +-2 and are killed,
  // Z Zbar + Wbar W survives at grading 0
  const GradedElement sum = Z + ambient_star(W);
  const GradedElement prod = ambient_product(sum, ambient_star(sum));
  const Fiber p0 = spectral_projection(prod, GroupIndex{0}, m.gauge);
  const GradedElement expected = ambient_product(Z, ambient_star(Z)) + ambient_product(W, ambient_star(W));
  CHECK(oracles::max_abs_diff(p0.data(), expected.term(GroupIndex{0}).data()) < 1e-12);
  CHECK(prod.has_term(GroupIndex{2}));  // the cross terms really are elsewhere
  CHECK(prod.has_term(GroupIndex{-2}));

  // positivity margin on the square
  double neg = 0.0, imag = 0.0;
  for (const auto& v : p0.data().samples()) {
    neg = std::max(neg, -v.real());
    imag = std::max(imag, std::abs(v.imag()));
  }
  CHECK(neg <= 1e-12);
  CHECK(imag <= 1e-12);
}

TEST_CASE("idempotence and orthogonality within 1e-12") {
  const ModelSpec m = build_torus(0.0);
  std::mt19937_64 rng(47);
  const GradedElement a = random_graded(m, {GroupIndex{-1}, GroupIndex{1}, GroupIndex{3}}, rng);
  const GridFunction raw = reconstruct(a);
  for (int t : {-1, 1, 3}) {
    const Fiber pt = spectral_projection(raw, GroupIndex{t}, m.gauge);
    const Fiber ptt = spectral_projection(pt.data(), GroupIndex{t}, m.gauge);
    CHECK(oracles::max_abs_diff(ptt.data(), pt.data()) < 1e-12);
    const Fiber ps = spectral_projection(pt.data(), GroupIndex{t - 1}, m.gauge);
    CHECK(fiber_norm(ps) < 1e-12);
  }
}

TEST_CASE("projections beyond the Nyquist range are rejected") {
  const ModelSpec m = build_torus(0.0);
  const GridFunction raw = reconstruct(m.generators.at("U"));
  CHECK_THROWS_AS(spectral_projection(raw, GroupIndex{32}, m.gauge), std::invalid_argument);
  CHECK_THROWS_AS(decompose(raw, m.gauge, 32), std::invalid_argument);
  CHECK_NOTHROW(spectral_projection(raw, GroupIndex{31}, m.gauge));
}

TEST_CASE("schwartz seminorm: single fibers and weights") {
  const ModelSpec m = build_sphere(0.0);
  const GradedElement Z = m.generators.at("Z");
  auto one = [](const GroupIndex&) { return 1.0; };
  auto tsq = [](const GroupIndex& t) { return static_cast<double>(t[0]) * t[0]; };
  CHECK(schwartz_seminorm(Z, one) == doctest::Approx(1.0));
  CHECK(schwartz_seminorm(Z, tsq) == doctest::Approx(1.0));  // support {1}: 1^2 * ||Z||

  // decomposed smooth bump: finite, dominated by the Fourier decay
  const ModelSpec tor = build_torus(0.0);
  const GridFunction bump = oracles::sample(tor.geometry, Twist{}, [](const auto& c) {
    return cplx(std::exp(0.5 * (std::cos(6.283185307179586 * c[0]) - 1.0)), 0.0);
  });
  const GradedElement dec = decompose(bump, tor.gauge, 8);
  const double sem = schwartz_seminorm(dec, tsq);
  CHECK(std::isfinite(sem));
  CHECK(sem < 1.0);
}

TEST_CASE("heisenberg gauge acts as scalars and projections are exact") {
  const ModelSpec m = build_heisenberg(1, 0.11, 0.23);
  std::mt19937_64 rng(53);
  const GradedElement a = random_graded(m, {GroupIndex{-1}, GroupIndex{0}, GroupIndex{1}}, rng);
  for (const auto& [t, f] : a.terms()) {
    const Fiber pt = spectral_projection(a, t, m.gauge);
    CHECK(oracles::max_abs_diff(pt.data(), f.data()) < 1e-12);
  }
  CHECK(fiber_norm(spectral_projection(a, GroupIndex{2}, m.gauge)) < 1e-12);
}
