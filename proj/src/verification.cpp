#include "fellq/verification.hpp"

#include <array>
#include <stdexcept>
#include <cmath>

#include "fellq/detail/parallel.hpp"
#include "fellq/tolerances.hpp"

namespace fellq {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

cplx unit_phase(double turns) { return {std::cos(kTwoPi * turns), std::sin(kTwoPi * turns)}; }

GroupIndex g1(int t) { return GroupIndex{t}; }

double fiber_dist(const Fiber& a, const Fiber& b) { return sup_norm(a.data() - b.data()); }

std::vector<GroupIndex> random_support(std::mt19937_64& rng, int max_len) {
  const int lo = -2 + static_cast<int>(rng() % 4);  // in [-2, 1]
  const int len = 1 + static_cast<int>(rng() % static_cast<unsigned>(max_len));
  std::vector<GroupIndex> s;
  for (int t = lo; t < lo + len && t <= 2; ++t) s.push_back(g1(t));
  return s;
}

struct Harness {
  const ModelSpec& m;
  const CheckOptions& opts;
  std::vector<CheckResult> results;

  void add(const std::string& name, double residual, double tolerance) {
    results.push_back({name, residual, tolerance});
  }

  GradedElement seeded(std::mt19937_64& rng, int max_len = 3) {
    // lens averaging can annihilate (or nearly annihilate) a draw; retry
    for (int attempt = 0; attempt < 32; ++attempt) {
      GradedElement e = random_graded(m, random_support(rng, max_len), rng);
      if (l1_norm(e) > 1e-3) return e;
    }
    throw std::runtime_error("seeded: could not draw a nonzero element");
  }

  void run();
  void check_actions();
  void check_axioms();
  void check_spectral();
  void check_calculus();
  void check_model_identities();
};

void Harness::check_actions() {
  const auto& th = m.deforming;
  const Fiber b1 = m.canonical_fiber(g1(1));
  const Fiber bm1 = m.canonical_fiber(g1(-1));
  std::mt19937_64 rng(opts.seed ^ 0xac710);
  const Fiber br = m.realize(m.random_recipe(g1(1), rng));

  // gauge group law on the aligned lattice (index permutations compose exactly)
  {
    const int n = m.gauge.lattice[0];
    const TorusPoint x{3.0 / n}, y{5.0 / n}, xy{8.0 / n};
    double r = 0.0;
    for (const Fiber* f : {&b1, &br}) {
      const GridFunction a = m.gauge.apply_raw(m.gauge.apply_raw(f->data(), x), y);
      const GridFunction b = m.gauge.apply_raw(f->data(), xy);
      r = std::max(r, sup_norm(a - b));
    }
    add("gauge aligned composition", r, tol::kExactPhase);
  }

  // theta group law theta^h_{t+s} = theta^h_t theta^h_s, and the identities
  // theta^0 = id, theta^h_0 = id
  {
    double r = 0.0;
    for (double h : opts.hbars) {
      for (const Fiber* f : {&b1, &bm1, &br}) {
        const Fiber once = th(th(*f, g1(1), h), g1(2), h);
        const Fiber both = th(*f, g1(3), h);
        r = std::max(r, fiber_dist(once, both));
        r = std::max(r, fiber_dist(th(*f, g1(0), h), *f));
        r = std::max(r, fiber_dist(th(*f, g1(2), 0.0), *f));
      }
    }
    add("deforming flow group law", r, tol::kInterp);
  }

  // gauge and deforming actions commute at grid level
  {
    const int n = m.gauge.lattice[0];
    double r = 0.0;
    for (double h : opts.hbars) {
      for (const Fiber* f : {&b1, &br}) {
        for (int k : {1, 7}) {
          const TorusPoint x{static_cast<double>(k) / n};
          const Fiber a = apply_gauge(m.gauge, th(*f, g1(1), h), x);
          const Fiber b = th(apply_gauge(m.gauge, *f, x), g1(1), h);
          r = std::max(r, fiber_dist(a, b));
        }
      }
    }
    add("gauge/deforming commutation", r, tol::kInterp);
  }

  // fibers are gauge eigenvectors of their advertised grading
  {
    double r = 0.0;
    const int n = m.gauge.lattice[0];
    for (int t = -2; t <= 2; ++t) {
      const Fiber f = m.canonical_fiber(g1(t));
      const TorusPoint x{5.0 / n};
      const Fiber gx = apply_gauge(m.gauge, f, x);
      r = std::max(r, fiber_dist(gx, fiber_scale(pairing(x, g1(t)), f)));
    }
    add("generator eigen-relation", r, tol::kInterp);
  }
}

void Harness::check_axioms() {
  const auto& th = m.deforming;
  std::mt19937_64 rng(opts.seed);
  std::vector<std::array<GradedElement, 3>> triples;
  for (int i = 0; i < opts.triples; ++i)
    triples.push_back({seeded(rng), seeded(rng), seeded(rng)});

  struct Acc {
    double assoc = 0, star = 0, cstar0 = 0, cstar = 0, submult = 0, h0 = 0, graded = 0,
           star2 = 0, norm1 = 0;
  };
  std::vector<Acc> acc(triples.size());
  detail::parallel_for(triples.size(), [&](std::size_t i) {
    const auto& [a, b, c] = triples[i];
    Acc& o = acc[i];
    double scale = 1.0;
    for (const GradedElement* e : {&a, &b, &c})
      for (const auto& [t, f] : e->terms()) scale = std::max(scale, fiber_norm(f));
    for (double h : opts.hbars) {
      const AxiomResiduals r = axiom_residuals(a, b, c, th, h);
      o.assoc = std::max(o.assoc, r.associativity);
      o.star = std::max(o.star, r.star_antimult);
      if (h == 0.0) {
        o.cstar0 = std::max(o.cstar0, std::max(r.cstar_identity, r.submultiplicativity));
      } else {
        // grid sup-norms sample translated maxima off-grid; compare relative
        o.cstar = std::max(o.cstar, r.cstar_identity / (scale * scale));
        o.submult = std::max(o.submult, r.submultiplicativity / (scale * scale));
      }

      if (h != opts.hbars.back()) continue;  // structural identities: one hbar suffices

      // grading containment: support(a x b) inside support(a) + support(b)
      const GradedElement ab = deformed_product(a, b, th, h);
      for (const auto& [t, f] : ab.terms()) {
        bool found = false;
        for (const auto& [ta, fa] : a.terms())
          for (const auto& [tb, fb] : b.terms())
            if (ta + tb == t) found = true;
        if (!found) o.graded = 1.0;
      }

      // involutivity of the deformed star
      const GradedElement ss = deformed_star(deformed_star(a, th, h), th, h);
      o.star2 = std::max(o.star2, l1_norm(ss - a));

      // deformed star isometry on single fibers (grid sup of a translated
      // magnitude, so relative with the same resolution slack); fibers that
      // are tiny against the triple scale make the quotient ill-conditioned
      for (const auto& [t, f] : a.terms()) {
        const double nf = fiber_norm(f);
        if (nf < 1e-2 * scale) continue;
        const GradedElement fs = deformed_star(GradedElement(f), th, h);
        o.norm1 = std::max(o.norm1, std::abs(l1_norm(fs) - nf) / nf);
      }
    }
    // hbar = 0 degeneration to the ambient operations
    o.h0 = std::max(l1_norm(deformed_product(a, b, th, 0.0) - ambient_product(a, b)),
                    l1_norm(deformed_star(a, th, 0.0) - ambient_star(a)));
  });

  Acc w;
  for (const auto& o : acc) {
    w.assoc = std::max(w.assoc, o.assoc);
    w.star = std::max(w.star, o.star);
    w.cstar0 = std::max(w.cstar0, o.cstar0);
    w.cstar = std::max(w.cstar, o.cstar);
    w.submult = std::max(w.submult, o.submult);
    w.h0 = std::max(w.h0, o.h0);
    w.graded = std::max(w.graded, o.graded);
    w.star2 = std::max(w.star2, o.star2);
    w.norm1 = std::max(w.norm1, o.norm1);
  }
  add("associativity of deformed product", w.assoc, tol::kInterp);
  add("anti-multiplicativity of deformed star", w.star, tol::kInterp);
  add("C*/submultiplicativity margins at hbar=0", w.cstar0, tol::kExactPhase);
  add("C*-identity margin, relative (grid-sup resolution)", w.cstar, 0.1);
  add("sub-multiplicativity margin, relative (grid-sup resolution)", w.submult, 0.1);
  add("trivial action degeneration (hbar=0)", w.h0, tol::kExactPhase);
  add("grading containment", w.graded, 0.0);
  add("deformed star involutivity", w.star2, tol::kExactPhase);
  add("deformed star isometry, relative (grid-sup resolution)", w.norm1, 0.1);
}

void Harness::check_spectral() {
  std::mt19937_64 rng(opts.seed ^ 0x5bec);
  const GradedElement a = seeded(rng);
  const int n = m.gauge.lattice[0];

  // projection recovers the terms; off-support projections vanish
  {
    double r = 0.0;
    for (const auto& [t, f] : a.terms())
      r = std::max(r, fiber_dist(spectral_projection(a, t, m.gauge), f));
    for (int t = -4; t <= 4; ++t)
      if (!a.has_term(g1(t)))
        r = std::max(r, fiber_norm(spectral_projection(a, g1(t), m.gauge)));
    add("spectral projection exactness", r, tol::kExactPhase);
  }

  // idempotence / orthogonality on single fibers
  {
    double r = 0.0;
    const Fiber f = m.canonical_fiber(g1(1));
    const Fiber pf = spectral_projection(f.data(), g1(1), m.gauge);
    r = std::max(r, fiber_dist(pf, f));
    r = std::max(r, fiber_norm(spectral_projection(f.data(), g1(0), m.gauge)));
    r = std::max(r, fiber_norm(spectral_projection(f.data(), g1(-1), m.gauge)));
    add("projection idempotence/orthogonality", r, tol::kExactPhase);
  }

  // positivity of the conditional expectation on squares
  {
    const GradedElement sq = ambient_product(a, ambient_star(a));
    double neg = 0.0, imag = 0.0;
    if (!sq.empty()) {
      const Fiber p0 = spectral_projection(sq, GroupIndex::zero(m.group_rank), m.gauge);
      for (const auto& v : p0.data().samples()) {
        neg = std::max(neg, -v.real());
        imag = std::max(imag, std::abs(v.imag()));
      }
    }
    add("conditional expectation positivity", std::max(neg, imag), tol::kExactPhase);
  }

  // contractivity ||P_t f|| <= ||f||; on single-twist models the bound is the
  // raw sup norm of the recombined sample, otherwise the L1 majorant
  {
    bool uniform_twist = true;
    const Twist t0 = a.terms().begin()->second.twist();
    for (const auto& [t, f] : a.terms())
      if (!(f.twist() == t0)) uniform_twist = false;
    double bound = 0.0;
    if (uniform_twist) {
      bound = sup_norm(reconstruct(a));
    } else {
      for (const auto& [s, g] : a.terms()) bound += fiber_norm(g);
    }
    double r = 0.0;
    for (const auto& [t, f] : a.terms()) {
      const Fiber pf = spectral_projection(a, t, m.gauge);
      r = std::max(r, std::max(0.0, fiber_norm(pf) - bound));
    }
    add("projection contractivity", r, tol::kExactPhase);
  }

  // deformed gauge action: spectral subspaces unchanged (P_t gamma~_x a = <x,t> a_t)
  {
    const TorusPoint x{3.0 / n};
    const GradedElement ga =
        extend_action([&](const Fiber& f) { return apply_gauge(m.gauge, f, x); }, a);
    double r = 0.0;
    for (const auto& [t, f] : a.terms()) {
      const Fiber p = spectral_projection(ga, t, m.gauge);
      r = std::max(r, fiber_dist(p, fiber_scale(pairing(x, t), f)));
    }
    add("deformed gauge spectral subspaces", r, tol::kExactPhase);
  }

  // homomorphism property of the extended action for the deformed operations
  {
    std::mt19937_64 rng2(opts.seed ^ 0x7e11);
    const GradedElement b = seeded(rng2);
    const TorusPoint x{7.0 / n};
    const CommutingAction gam = [&](const Fiber& f) { return apply_gauge(m.gauge, f, x); };
    double r = 0.0;
    for (double h : opts.hbars) {
      const GradedElement lhs = extend_action(gam, deformed_product(a, b, m.deforming, h));
      const GradedElement rhs =
          deformed_product(extend_action(gam, a), extend_action(gam, b), m.deforming, h);
      r = std::max(r, l1_norm(lhs - rhs));
      const GradedElement ls = extend_action(gam, deformed_star(a, m.deforming, h));
      const GradedElement rs = deformed_star(extend_action(gam, a), m.deforming, h);
      r = std::max(r, l1_norm(ls - rs));
    }
    add("extended action is deformed automorphism", r, tol::kInterp);
  }

  // Schwartz seminorm sanity on the decomposed element
  {
    const double sem = schwartz_seminorm(a, [](const GroupIndex& t) {
      return static_cast<double>(t[0]) * t[0];
    });
    add("schwartz seminorm finite", std::isfinite(sem) ? 0.0 : 1.0, 0.0);
  }
}

void Harness::check_calculus() {
  const auto& calc = m.calculus;
  std::mt19937_64 rng(opts.seed ^ 0xca1c);
  const GradedElement f = seeded(rng);
  const GradedElement g = seeded(rng);

  // gauge-direction eigenvalue law: dx on grading t = 2 pi i t
  {
    double r = 0.0;
    for (const auto& [t, ft] : f.terms()) {
      const Fiber d = calc.x_derivative(ft, 0);
      r = std::max(r, fiber_dist(d, fiber_scale(cplx(0.0, kTwoPi * t[0]), ft)));
    }
    add("gauge-direction eigenvalue law", r, tol::kExactPhase);
  }

  // Leibniz rule for the ambient product
  {
    double r = 0.0;
    for (int dir : {0, 1}) {
      const GradedElement lhs = partial_derivative(ambient_product(f, g), dir, calc);
      const GradedElement rhs = ambient_product(partial_derivative(f, dir, calc), g) +
                                ambient_product(f, partial_derivative(g, dir, calc));
      r = std::max(r, l1_norm(lhs - rhs));
    }
    add("Leibniz rule", r, tol::kSecondDeriv);
  }

  // projections commute with derivatives: the t-term of d(f) is d(f_t)
  {
    double r = 0.0;
    for (int dir : {0, 1}) {
      const GradedElement df = partial_derivative(f, dir, calc);
      for (const auto& [t, ft] : f.terms()) {
        const Fiber lhs = dir == 0 ? calc.x_derivative(ft, 0) : calc.y_derivative(ft, 0);
        const Fiber rhs = df.has_term(t) ? df.term(t) : fiber_scale(0.0, ft);
        r = std::max(r, fiber_dist(lhs, rhs));
      }
    }
    add("projection/derivative commutation", r, tol::kInterp);
  }

  // finite differences validate the analytic rules on the generators
  {
    double r = 0.0;
    for (const auto& [name, gen] : m.generators) {
      for (const auto& [t, ft] : gen.terms()) {
        for (int dir : {0, 1}) {
          const Fiber fd = finite_difference_derivative(ft, dir, calc, 1e-4);
          const Fiber an = dir == 0 ? calc.x_derivative(ft, 0) : calc.y_derivative(ft, 0);
          r = std::max(r, fiber_dist(fd, an));
        }
      }
    }
    add("finite-difference derivative agreement", r, tol::kTrialNoise);
  }

  // Taylor bound on single-fiber pairs
  {
    double worst = 0.0;
    for (int tf = -2; tf <= 2; ++tf)
      for (int tg = -1; tg <= 1; ++tg) {
        const Fiber a = m.canonical_fiber(g1(tf));
        const Fiber b = m.canonical_fiber(g1(tg));
        for (double h : {1e-3, 1e-2, 1e-1}) {
          const TaylorCheck tc = taylor_residual_and_bound(a, b, h, m.deforming, calc);
          worst = std::max(worst, tc.residual - tc.bound);
        }
      }
    add("first-order Taylor bound", std::max(0.0, worst), tol::kSecondDeriv);
  }
}

void Harness::check_model_identities() {
  const auto& th = m.deforming;
  const double h = m.params.theta;

  if (m.name == "sphere" || m.name == "lens") {
    const GradedElement& Z = m.generators.at("Z");
    const GradedElement& W = m.generators.at("W");
    const cplx phase = unit_phase(h);

    const GradedElement wz = deformed_product(W, Z, th, h);
    const GradedElement zw = deformed_product(Z, W, th, h);
    add("sphere relation W x Z = e(theta) Z x W", l1_norm(wz - phase * zw), tol::kExactPhase);

    GradedElement unit(m.canonical_fiber(GroupIndex::zero(1)));
    const GradedElement zz = deformed_product(deformed_star(Z, th, h), Z, th, h);
    const GradedElement ww = deformed_product(deformed_star(W, th, h), W, th, h);
    add("sphere relation Z*Z + W*W = 1", l1_norm(zz + ww - unit), tol::kExactPhase);

    double rn = 0.0;
    for (const GradedElement* gen : {&Z, &W}) {
      const GradedElement s = deformed_star(*gen, th, h);
      rn = std::max(rn, l1_norm(deformed_product(s, *gen, th, h) -
                                deformed_product(*gen, s, th, h)));
    }
    add("sphere normality", rn, tol::kExactPhase);

    const SphereFixedPoint fp = sphere_fixed_generators(m);
    add("fixed-point relation H* = H", fp.res_selfadjoint, tol::kExactPhase);
    add("fixed-point relation M normal", fp.res_normal, tol::kExactPhase);
    add("fixed-point relation MH = HM", fp.res_commute, tol::kExactPhase);
    add("fixed-point relation M*M + H^2 = H", fp.res_quadric, tol::kExactPhase);
  }

  if (m.name == "torus") {
    const GradedElement& U = m.generators.at("U");
    const GradedElement& V = m.generators.at("V");
    const GradedElement vu = deformed_product(V, U, th, h);
    const GradedElement uv = deformed_product(U, V, th, h);
    add("torus relation V x U = e(theta) U x V", l1_norm(vu - unit_phase(h) * uv),
        tol::kExactPhase);
  }

  if (m.name == "lens") {
    std::mt19937_64 rng(opts.seed ^ 0x1e45);
    const GradedElement a = seeded(rng);
    const GradedElement b = seeded(rng);

    const GradedElement once = average_projection(m, a);
    add("lens averaging idempotent", l1_norm(average_projection(m, once) - once),
        tol::kExactPhase);

    // Z^p is tau-invariant
    GradedElement zp = m.generators.at("Z");
    for (int k = 1; k < m.params.p; ++k) zp = ambient_product(zp, m.generators.at("Z"));
    add("lens invariance of Z^p", l1_norm(average_projection(m, zp) - zp), tol::kExactPhase);

    // equivariance on invariant elements (a, b are already averaged)
    double r = 0.0;
    for (double hh : opts.hbars) {
      const GradedElement lhs = average_projection(m, deformed_product(a, b, th, hh));
      const GradedElement rhs = deformed_product(average_projection(m, a),
                                                 average_projection(m, b), th, hh);
      r = std::max(r, l1_norm(lhs - rhs));
    }
    add("lens averaging respects deformed product", r, tol::kInterp);

    // averaging commutes with the spectral projections
    double rp = 0.0;
    for (const auto& [t, f] : a.terms()) {
      const Fiber lhs = spectral_projection(average_projection(m, a), t, m.gauge);
      const GradedElement pa(spectral_projection(a, t, m.gauge));
      const GradedElement rhs = average_projection(m, pa);
      if (rhs.has_term(t))
        rp = std::max(rp, fiber_dist(lhs, rhs.term(t)));
      else
        rp = std::max(rp, fiber_norm(lhs));
    }
    add("lens averaging commutes with projections", rp, tol::kExactPhase);
  }

  if (m.name == "heisenberg") {
    std::mt19937_64 rng(opts.seed ^ 0x4e15);
    const Fiber a = m.realize(m.random_recipe(g1(0), rng));
    const Fiber b = m.realize(m.random_recipe(g1(1), rng));
    const Fiber c = m.realize(m.random_recipe(g1(1), rng));

    const HeisClosedForms cf = heis_closed_form_residuals(m, a, b, c);
    add("heisenberg closed form a x b", cf.res_ab, tol::kInterp);
    add("heisenberg closed form b x a", cf.res_ba, tol::kInterp);
    add("heisenberg closed form b* x c", cf.res_bstar_c, tol::kInterp);
    add("heisenberg closed form b x c*", cf.res_b_cstar, tol::kInterp);

    // composing theta^h twice equals theta^{2h} (quadratic phase honored)
    double r = 0.0;
    for (double hh : {0.1, 0.37}) {
      const Fiber twice = th(th(b, g1(1), hh), g1(1), hh);
      const Fiber direct = th(b, g1(1), 2.0 * hh);
      r = std::max(r, fiber_dist(twice, direct));
    }
    add("heisenberg flow quadratic term", r, tol::kInterp);

    // Poisson bracket equals 2 c^{-1} d3 ^ (mu d1 + nu d2)
    const GradedElement F(a), G(b);
    const GradedElement lhs = poisson_bracket(F, G, m.calculus);
    auto displayed = [&](const GradedElement& x, const GradedElement& y) {
      // 2/c [ d3(x) (mu d1 + nu d2)(y) - (mu d1 + nu d2)(x) d3(y) ]
      auto d3 = [&](const GradedElement& e) {
        GradedElement out;
        for (const auto& [t, ft] : e.terms())
          out.add_term(fiber_scale(cplx(0.0, kTwoPi * ft.twist().frequency), ft));
        return out;
      };
      auto d12 = [&](const GradedElement& e) {
        GradedElement out;
        for (const auto& [t, ft] : e.terms())
          out.add_term(Fiber(t, m.params.mu * derivative_axis(ft.data(), 0) +
                                    m.params.nu * derivative_axis(ft.data(), 1)));
        return out;
      };
      GradedElement r2 = ambient_product(d3(x), d12(y)) - ambient_product(d12(x), d3(y));
      r2 *= cplx(2.0 / m.params.c, 0.0);
      return r2;
    };
    add("heisenberg Poisson bracket closed form", l1_norm(lhs - displayed(F, G)),
        tol::kSmoothTail);
  }
}

void Harness::run() {
  check_actions();
  check_axioms();
  check_spectral();
  check_calculus();
  check_model_identities();
}

}  // namespace

std::vector<CheckResult> run_model_checks(const ModelSpec& model, const CheckOptions& opts) {
  Harness h{model, opts, {}};
  h.run();
  return h.results;
}

bool all_pass(const std::vector<CheckResult>& results) {
  for (const auto& r : results)
    if (!r.pass()) return false;
  return true;
}

}  // namespace fellq
