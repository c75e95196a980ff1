// Acceptance suite: drives every gate criterion at its stated tolerance and
// prints one pass/fail line per criterion.  Exits nonzero if any fail.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <vector>

#include "cli.hpp"
#include "fellq/calculus.hpp"
#include "fellq/detail/parallel.hpp"
#include "fellq/models.hpp"
#include "fellq/norms.hpp"
#include "fellq/spectral.hpp"
#include "fellq/verification.hpp"
#include "support/oracles.hpp"

using namespace fellq;

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kPiSq = 9.869604401089358;

struct Criterion {
  int id;
  std::string summary;
  bool pass;
  std::string detail;
  double seconds;
};

std::vector<Criterion> g_results;

double now_s() {
  return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

template <typename Fn>
void criterion(int id, const std::string& summary, Fn&& fn) {
  const double t0 = now_s();
  bool pass = false;
  std::string detail;
  try {
    detail = fn(pass);
  } catch (const std::exception& e) {
    pass = false;
    detail = std::string("exception: ") + e.what();
  }
  const double dt = now_s() - t0;
  g_results.push_back({id, summary, pass, detail, dt});
  std::printf("[%s] criterion %2d: %s (%s; %.1fs)\n", pass ? "PASS" : "FAIL", id, summary.c_str(),
              detail.c_str(), dt);
  std::fflush(stdout);
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

GradedElement seeded_element(const ModelSpec& m, std::mt19937_64& rng) {
  for (;;) {
    const int lo = -2 + static_cast<int>(rng() % 4);
    const int len = 1 + static_cast<int>(rng() % 3);
    std::vector<GroupIndex> support;
    for (int t = lo; t < lo + len && t <= 2; ++t) support.push_back(GroupIndex{t});
    GradedElement e = random_graded(m, support, rng);
    if (l1_norm(e) > 1e-3) return e;
  }
}

Fiber sphere_mono(const ModelSpec& m, int i, int j, int k, int l) {
  FiberRecipe r;
  r.grading = GroupIndex{i - j + k - l};
  r.sphere_terms.push_back({i, j, k, l, 1.0});
  return m.realize(r);
}

// --------------------------------------------------------------------------

void criterion1_axioms() {
  criterion(1, "deformed Fell-bundle axioms on seeded triples", [&](bool& pass) {
    const std::vector<double> hbars = {0.0, 0.1, 0.3, 0.7071067811865476};
    double worst = 0.0;
    double slowest = 0.0;
    std::string note;
    std::vector<ModelSpec> models;
    models.push_back(build_torus(0.3));
    models.push_back(build_sphere(0.3));
    models.push_back(build_lens(3, 1, 0.3));
    models.push_back(build_heisenberg(1, 0.11, 0.23));
    for (const ModelSpec& m : models) {
      const double t0 = now_s();
      std::mt19937_64 rng(kDefaultSeed);
      std::vector<std::array<GradedElement, 3>> triples;
      for (int i = 0; i < 20; ++i)
        triples.push_back({seeded_element(m, rng), seeded_element(m, rng), seeded_element(m, rng)});
      std::vector<double> per(triples.size(), 0.0);
      detail::parallel_for(triples.size(), [&](std::size_t i) {
        double w = 0.0;
        for (double h : hbars) {
          const AxiomResiduals r =
              axiom_residuals(triples[i][0], triples[i][1], triples[i][2], m.deforming, h);
          w = std::max(w, std::max(r.associativity, r.star_antimult));
        }
        per[i] = w;
      });
      for (double w : per) worst = std::max(worst, w);
      const double dt = now_s() - t0;
      slowest = std::max(slowest, dt);
      note += m.name + " " + fmt(dt).substr(0, 3) + "s ";
    }
    pass = worst <= 1e-10 && slowest <= 30.0;
    return "max residual " + fmt(worst) + " <= 1e-10, slowest model " + fmt(slowest) + "s <= 30s";
  });
}

void criterion2_sphere_relations() {
  criterion(2, "sphere relations and fixed-point relations", [&](bool& pass) {
    double worst = 0.0;
    for (double theta : {0.0, 0.25, 0.3}) {
      const ModelSpec m = build_sphere(theta);
      const auto& th = m.deforming;
      const GradedElement& Z = m.generators.at("Z");
      const GradedElement& W = m.generators.at("W");
      const GradedElement unit(m.canonical_fiber(GroupIndex{0}));

      worst = std::max(worst, l1_norm(deformed_product(W, Z, th, theta) -
                                      oracles::turn(theta) * deformed_product(Z, W, th, theta)));
      worst = std::max(worst,
                       l1_norm(deformed_product(deformed_star(Z, th, theta), Z, th, theta) +
                               deformed_product(deformed_star(W, th, theta), W, th, theta) - unit));
      for (const GradedElement* g : {&Z, &W}) {
        const GradedElement gs = deformed_star(*g, th, theta);
        worst = std::max(worst, l1_norm(deformed_product(gs, *g, th, theta) -
                                        deformed_product(*g, gs, th, theta)));
      }
      const SphereFixedPoint fp = sphere_fixed_generators(m);
      worst = std::max({worst, fp.res_selfadjoint, fp.res_normal, fp.res_commute, fp.res_quadric});
    }
    pass = worst <= 1e-12;
    return "max relation residual " + fmt(worst) + " <= 1e-12";
  });
}

void criterion3_taylor() {
  criterion(3, "Taylor bound on single-fiber monomial pairs", [&](bool& pass) {
    const ModelSpec m = build_sphere(0.3);
    std::vector<Fiber> monos;
    monos.push_back(m.canonical_fiber(GroupIndex{0}));  // 1
    monos.push_back(sphere_mono(m, 1, 0, 0, 0));        // Z
    monos.push_back(sphere_mono(m, 0, 0, 1, 0));        // W
    monos.push_back(sphere_mono(m, 0, 1, 0, 0));        // Zbar
    monos.push_back(sphere_mono(m, 0, 0, 0, 1));        // Wbar
    monos.push_back(sphere_mono(m, 1, 0, 1, 0));        // ZW   (t = 2)
    monos.push_back(sphere_mono(m, 0, 1, 0, 1));        // conj (t = -2)
    monos.push_back(sphere_mono(m, 1, 0, 0, 1));        // Z Wbar (t = 0)
    const std::vector<double> grid = default_hbar_grid();

    std::vector<double> worst_per(monos.size() * monos.size(), 0.0);
    detail::parallel_for(worst_per.size(), [&](std::size_t idx) {
      const Fiber& f = monos[idx / monos.size()];
      const Fiber& g = monos[idx % monos.size()];
      double w = -1.0;
      for (double h : grid) {
        const TaylorCheck tc = taylor_residual_and_bound(f, g, h, m.deforming, m.calculus);
        w = std::max(w, tc.residual - tc.bound);
      }
      worst_per[idx] = w;
    });
    double worst = -1.0;
    for (double w : worst_per) worst = std::max(worst, w);
    pass = worst <= 1e-9;
    return "64 pairs x 25 hbar, max(residual - bound) = " + fmt(worst) + " <= 1e-9";
  });
}

void criterion4_derivative_limit() {
  criterion(4, "derivative limit: pi^2 value and slope one", [&](bool& pass) {
    const ModelSpec sph = build_sphere(0.3);
    const ScanReport wz = derivative_limit_scan(sph.generators.at("W"), sph.generators.at("Z"),
                                                default_hbar_grid(), sph.deforming, sph.calculus);
    const double limit = wz.column("residual_over_hbar").back();
    const bool pi_ok = std::abs(limit - kPiSq) <= 1e-3;

    bool slopes_ok = true;
    double worst_slope_err = 0.0;
    auto check_slope = [&](const ScanReport& s) {
      const double slope = loglog_slope(s.column("hbar"), s.column("residual_l1"));
      worst_slope_err = std::max(worst_slope_err, std::abs(slope - 1.0));
      slopes_ok = slopes_ok && std::abs(slope - 1.0) <= 0.05;
      bool dominated = true;
      if (s.columns.size() >= 3 && s.columns[2] == "lemma_bound") {
        const auto res = s.column("residual_l1");
        const auto bnd = s.column("lemma_bound");
        for (std::size_t i = 0; i < res.size(); ++i) dominated = dominated && res[i] <= bnd[i] + 1e-9;
      }
      slopes_ok = slopes_ok && dominated;
    };
    check_slope(wz);

    // a band-limited multi-term sphere pair with genuine theta dependence
    {
      FiberRecipe rf;
      rf.grading = GroupIndex{1};
      rf.sphere_terms.push_back({1, 0, 1, 1, cplx(0.8, 0.1)});
      rf.sphere_terms.push_back({2, 1, 0, 0, cplx(0.2, -0.4)});
      FiberRecipe rg;
      rg.grading = GroupIndex{-1};
      rg.sphere_terms.push_back({0, 1, 1, 1, cplx(0.5, 0.3)});
      rg.sphere_terms.push_back({1, 2, 0, 0, cplx(-0.3, 0.2)});
      const GradedElement f(sph.realize(rf));
      const GradedElement g = GradedElement(sph.realize(rg)) + sph.generators.at("Z");
      check_slope(derivative_limit_scan(f, g, default_hbar_grid(), sph.deforming, sph.calculus));
    }

    const ModelSpec tor = build_torus(0.3);
    check_slope(derivative_limit_scan(tor.generators.at("U"), tor.generators.at("V"),
                                      default_hbar_grid(), tor.deforming, tor.calculus));

    const ModelSpec heis = build_heisenberg(1, 0.11, 0.23);
    check_slope(derivative_limit_scan(heis.generators.at("E"), heis.generators.at("U"),
                                      default_hbar_grid(), heis.deforming, heis.calculus));

    pass = pi_ok && slopes_ok;
    return "residual/hbar at 1e-4 = " + fmt(limit) + " (pi^2 within 1e-3: " +
           (pi_ok ? "yes" : "NO") + "), worst |slope-1| = " + fmt(worst_slope_err);
  });
}

void criterion5_poisson() {
  criterion(5, "Poisson corollary: commutator slope and bracket forms", [&](bool& pass) {
    const ModelSpec sph = build_sphere(0.3);
    const GradedElement& W = sph.generators.at("W");
    const GradedElement& Z = sph.generators.at("Z");
    const ScanReport cs =
        commutator_limit_scan(W, Z, default_hbar_grid(), sph.deforming, sph.calculus);
    const double slope = loglog_slope(cs.column("hbar"), cs.column("residual_l1"));

    // bracket equals D2 ^ D1 on the sphere
    const GradedElement bracket = poisson_bracket(W, Z, sph.calculus);
    const GradedElement d2d1 = cplx(-kTwoPi * kTwoPi, 0.0) * ambient_product(W, Z);
    const double sphere_bracket = l1_norm(bracket - d2d1);

    // Heisenberg: slope and the displayed 2 c^{-1} d3 ^ (mu d1 + nu d2)
    const ModelSpec heis = build_heisenberg(1, 0.11, 0.23);
    const ScanReport hs = commutator_limit_scan(heis.generators.at("E"), heis.generators.at("U"),
                                                default_hbar_grid(), heis.deforming, heis.calculus);
    const double hslope = loglog_slope(hs.column("hbar"), hs.column("residual_l1"));

    std::mt19937_64 rng(kDefaultSeed);
    const GradedElement f = random_graded(heis, {GroupIndex{0}, GroupIndex{1}}, rng);
    const GradedElement g = random_graded(heis, {GroupIndex{-1}, GroupIndex{0}}, rng);
    const GradedElement lhs = poisson_bracket(f, g, heis.calculus);
    auto d3 = [&](const GradedElement& e) {
      GradedElement out;
      for (const auto& [t, ft] : e.terms())
        out.add_term(fiber_scale(cplx(0.0, kTwoPi * ft.twist().frequency), ft));
      return out;
    };
    auto d12 = [&](const GradedElement& e) {
      GradedElement out;
      for (const auto& [t, ft] : e.terms())
        out.add_term(Fiber(t, heis.params.mu * derivative_axis(ft.data(), 0) +
                                  heis.params.nu * derivative_axis(ft.data(), 1)));
      return out;
    };
    GradedElement rhs = ambient_product(d3(f), d12(g)) - ambient_product(d12(f), d3(g));
    rhs *= cplx(2.0 / heis.params.c, 0.0);
    const double heis_bracket = l1_norm(lhs - rhs);

    pass = std::abs(slope - 1.0) <= 0.05 && std::abs(hslope - 1.0) <= 0.05 &&
           sphere_bracket <= 1e-8 && heis_bracket <= 1e-8;
    return "slopes " + fmt(slope) + "/" + fmt(hslope) + ", bracket residuals " +
           fmt(sphere_bracket) + "/" + fmt(heis_bracket) + " <= 1e-8";
  });
}

void criterion6_heis_closed_forms() {
  criterion(6, "Heisenberg closed-form products on seeded triples", [&](bool& pass) {
    const ModelSpec m = build_heisenberg(1, 0.11, 0.23);
    const double mu = m.params.mu, nu = m.params.nu;
    std::mt19937_64 rng(kDefaultSeed);
    double worst = 0.0;
    for (int n = 0; n < 10; ++n) {
      const FiberRecipe rf = m.random_recipe(GroupIndex{0}, rng);
      const FiberRecipe rg = m.random_recipe(GroupIndex{1}, rng);
      const FiberRecipe rh = m.random_recipe(GroupIndex{1}, rng);
      const GradedElement A(m.realize(rf)), B(m.realize(rg)), C(m.realize(rh));
      auto eval = [&](const FiberRecipe& r, double x, double y) {
        return oracles::eval_heis(r, m.params.c, x, y);
      };

      const GridFunction ab = deformed_product(A, B, m.deforming, 1.0).term(GroupIndex{1}).data();
      worst = std::max(worst, oracles::max_abs_diff(
                                  ab, oracles::sample(m.geometry, Twist{1}, [&](const auto& c) {
                                    return eval(rf, c[0], c[1]) * eval(rg, c[0], c[1]);
                                  })));
      const GridFunction ba = deformed_product(B, A, m.deforming, 1.0).term(GroupIndex{1}).data();
      worst = std::max(worst, oracles::max_abs_diff(
                                  ba, oracles::sample(m.geometry, Twist{1}, [&](const auto& c) {
                                    return eval(rg, c[0], c[1]) *
                                           eval(rf, c[0] + 2 * mu, c[1] + 2 * nu);
                                  })));
      const GridFunction bsc = deformed_product(deformed_star(B, m.deforming, 1.0), C,
                                                m.deforming, 1.0)
                                   .term(GroupIndex{0})
                                   .data();
      worst = std::max(worst, oracles::max_abs_diff(
                                  bsc, oracles::sample(m.geometry, Twist{0}, [&](const auto& c) {
                                    return std::conj(eval(rg, c[0] - 2 * mu, c[1] - 2 * nu)) *
                                           eval(rh, c[0] - 2 * mu, c[1] - 2 * nu);
                                  })));
      const GridFunction bcs = deformed_product(B, deformed_star(C, m.deforming, 1.0),
                                                m.deforming, 1.0)
                                   .term(GroupIndex{0})
                                   .data();
      worst = std::max(worst, oracles::max_abs_diff(
                                  bcs, oracles::sample(m.geometry, Twist{0}, [&](const auto& c) {
                                    return eval(rg, c[0], c[1]) * std::conj(eval(rh, c[0], c[1]));
                                  })));
    }
    pass = worst <= 1e-10;
    return "10 triples, max residual against analytic closed forms " + fmt(worst) + " <= 1e-10";
  });
}

void criterion7_spectral() {
  criterion(7, "spectral exactness, orthogonality, positivity", [&](bool& pass) {
    double recon = 0.0, ortho = 0.0, posit = 0.0;
    for (const ModelSpec& m : {build_sphere(0.3), build_torus(0.3)}) {
      std::mt19937_64 rng(kDefaultSeed);
      const GradedElement a = seeded_element(m, rng);
      const GridFunction raw = reconstruct(a);
      recon = std::max(recon, oracles::max_abs_diff(reconstruct(decompose(raw, m.gauge, 8)), raw));

      for (const auto& [t, f] : a.terms()) {
        const Fiber pt = spectral_projection(raw, t, m.gauge);
        ortho = std::max(ortho, oracles::max_abs_diff(
                                    spectral_projection(pt.data(), t, m.gauge).data(), pt.data()));
        ortho = std::max(ortho,
                         fiber_norm(spectral_projection(pt.data(), t + GroupIndex{1}, m.gauge)));
      }

      const GradedElement sq = ambient_product(a, ambient_star(a));
      const Fiber p0 = spectral_projection(sq, GroupIndex::zero(1), m.gauge);
      for (const auto& v : p0.data().samples()) {
        posit = std::max(posit, -v.real());
        posit = std::max(posit, std::abs(v.imag()));
      }
    }
    pass = recon <= 1e-12 && ortho <= 1e-12 && posit <= 1e-12;
    return "reconstruct " + fmt(recon) + ", orthogonality " + fmt(ortho) + ", positivity margin " +
           fmt(posit) + " (all <= 1e-12)";
  });
}

void criterion8_field_continuity() {
  criterion(8, "continuous-field evidence via norm scans", [&](bool& pass) {
    const ModelSpec m = build_sphere(0.3);

    // single-fiber element: lower bound column constant within 1e-10
    const GradedElement zf(m.canonical_fiber(GroupIndex{1}));
    const auto trials = make_trial_sections(m, 8, kDefaultSeed);
    const ScanReport single = field_scan(zf, trials, lin_spaced(0.0, 0.5, 9), m.deforming);
    double lb_var = 0.0, l1_var = 0.0;
    {
      const auto lb = single.column("lower_bound");
      const auto l1c = single.column("l1_norm");
      for (double v : lb) lb_var = std::max(lb_var, std::abs(v - lb.front()));
      for (double v : l1c) l1_var = std::max(l1_var, std::abs(v - l1c.front()));
    }

    // Z + W: the shifted suprema move with hbar, so the Rayleigh columns
    // genuinely vary and the refinement ratio is informative
    const GradedElement phi = m.generators.at("Z") + m.generators.at("W");
    const auto all = make_trial_sections(m, 8, kDefaultSeed ^ 0x8f);
    // random sections only: the canonical eigenvectors move by pure phases
    const std::vector<ModuleVector> xis(all.begin() + 5, all.end());
    const ScanReport coarse = field_scan(phi, xis, lin_spaced(0.0, 0.5, 9), m.deforming);
    const ScanReport fine = field_scan(phi, xis, lin_spaced(0.0, 0.5, 17), m.deforming);
    const auto mc = continuity_moduli(coarse);
    const auto mf = continuity_moduli(fine);
    double l1_var2 = 0.0;
    {
      const auto l1c = coarse.column("l1_norm");
      for (double v : l1c) l1_var2 = std::max(l1_var2, std::abs(v - l1c.front()));
    }
    bool halving = true, any_moving = false;
    double worst_ratio = 0.5;
    for (std::size_t c = 3; c < coarse.columns.size(); ++c) {
      if (mc[c] < 1e-10) continue;
      any_moving = true;
      const double ratio = mf[c] / mc[c];
      if (std::abs(ratio - 0.5) > std::abs(worst_ratio - 0.5)) worst_ratio = ratio;
      halving = halving && ratio >= 0.4 && ratio <= 0.6;
    }
    pass = lb_var <= 1e-10 && l1_var == 0.0 && l1_var2 == 0.0 && any_moving && halving;
    return "lower-bound variation " + fmt(lb_var) + " <= 1e-10, l1 column exactly constant, "
           "refinement ratio " + fmt(worst_ratio) + " in [0.4, 0.6]";
  });
}

void criterion9_lens_fixed_point() {
  criterion(9, "lens fixed-point equivariance and projections", [&](bool& pass) {
    double equiv = 0.0, proj = 0.0;
    for (auto [p, q] : {std::pair{3, 1}, std::pair{5, 2}}) {
      const ModelSpec m = build_lens(p, q, 0.3);
      std::mt19937_64 rng(kDefaultSeed);
      const GradedElement a = seeded_element(m, rng);  // already averaged
      const GradedElement b = seeded_element(m, rng);
      const double theta = m.params.theta;

      const GradedElement prod_in = average_projection(m, deformed_product(a, b, m.deforming, theta));
      const GradedElement prod_out = deformed_product(average_projection(m, a),
                                                      average_projection(m, b), m.deforming, theta);
      equiv = std::max(equiv, l1_norm(prod_in - prod_out));

      const GradedElement star_in = average_projection(m, deformed_star(a, m.deforming, theta));
      const GradedElement star_out = deformed_star(average_projection(m, a), m.deforming, theta);
      equiv = std::max(equiv, l1_norm(star_in - star_out));

      for (const auto& [t, f] : a.terms()) {
        const Fiber left = spectral_projection(average_projection(m, a), t, m.gauge);
        const GradedElement right =
            average_projection(m, GradedElement(spectral_projection(a, t, m.gauge)));
        // a term averaged to numerical zero may be dropped from the support
        if (right.has_term(t))
          proj = std::max(proj, sup_norm(left.data() - right.term(t).data()));
        else
          proj = std::max(proj, fiber_norm(left));
      }
    }
    pass = equiv <= 1e-10 && proj <= 1e-12;
    return "equivariance " + fmt(equiv) + " <= 1e-10, projection commutation " + fmt(proj) +
           " <= 1e-12";
  });
}

void criterion10_runtime_and_determinism(double suite_start) {
  criterion(10, "whole-suite runtime and byte-deterministic CSV", [&](bool& pass) {
    using namespace fellq::cli;
    const ModelSpec m = build_sphere(0.3);
    auto make = [&] {
      ScanReport r = derivative_limit_scan(m.generators.at("W"), m.generators.at("Z"),
                                           log_spaced(1e-4, 1e-1, 25), m.deforming, m.calculus);
      RunConfig cfg;
      cfg.command = "derivative-scan";
      cfg.model = "sphere";
      echo_config(r, cfg);
      return render_csv(r);
    };
    const std::string a = make();
    const std::string b = make();
    const bool deterministic = (a == b) && !a.empty();

    const double elapsed = now_s() - suite_start;
    pass = deterministic && elapsed <= 300.0;
    return std::string("CSV bytes identical across runs: ") + (deterministic ? "yes" : "NO") +
           ", suite runtime " + fmt(elapsed) + "s <= 300s";
  });
}

}  // namespace

int main() {
  const double start = now_s();
  std::printf("fellq acceptance suite\n");

  criterion1_axioms();
  criterion2_sphere_relations();
  criterion3_taylor();
  criterion4_derivative_limit();
  criterion5_poisson();
  criterion6_heis_closed_forms();
  criterion7_spectral();
  criterion8_field_continuity();
  criterion9_lens_fixed_point();
  criterion10_runtime_and_determinism(start);

  int failed = 0;
  for (const auto& c : g_results)
    if (!c.pass) ++failed;
  std::printf("ACCEPTANCE: %zu/%zu criteria passed (total %.1fs)\n", g_results.size() - failed,
              g_results.size(), now_s() - start);
  return failed == 0 ? 0 : 1;
}
