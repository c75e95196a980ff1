#include "fellq/spectral.hpp"

#include <cmath>
#include <stdexcept>

namespace fellq {

namespace {

// Enumerates the aligned lattice (k_1/N_1, ..., k_d/N_d).
template <typename Fn>
void for_each_lattice_point(const std::vector<int>& lattice, Fn&& fn) {
  std::vector<int> k(lattice.size(), 0);
  while (true) {
    std::vector<double> coords(lattice.size());
    for (std::size_t j = 0; j < lattice.size(); ++j)
      coords[j] = static_cast<double>(k[j]) / lattice[j];
    fn(TorusPoint(std::move(coords)));
    std::size_t j = 0;
    for (; j < lattice.size(); ++j) {
      if (++k[j] < lattice[j]) break;
      k[j] = 0;
    }
    if (j == lattice.size()) return;
  }
}

void check_nyquist(const GroupIndex& t, const GaugeAction& gauge) {
  if (t.rank() != gauge.rank())
    throw std::invalid_argument("spectral_projection: grading rank does not match gauge rank");
  for (int j = 0; j < t.rank(); ++j)
    if (2 * std::abs(t[j]) >= gauge.lattice[static_cast<std::size_t>(j)])
      throw std::invalid_argument("spectral_projection: grading beyond Nyquist range of the gauge lattice");
}

std::size_t lattice_size(const GaugeAction& gauge) {
  std::size_t n = 1;
  for (int nj : gauge.lattice) n *= static_cast<std::size_t>(nj);
  return n;
}

}  // namespace

Fiber apply_gauge(const GaugeAction& gauge, const Fiber& f, const TorusPoint& x) {
  return Fiber(f.grading(), gauge.apply_raw(f.data(), x));
}

Fiber spectral_projection(const GridFunction& f, const GroupIndex& t, const GaugeAction& gauge) {
  check_nyquist(t, gauge);
  const double weight = 1.0 / static_cast<double>(lattice_size(gauge));
  std::vector<cplx> acc(f.size(), cplx(0.0, 0.0));
  for_each_lattice_point(gauge.lattice, [&](const TorusPoint& x) {
    const cplx ph = std::conj(pairing(x, t)) * weight;
    const GridFunction gx = gauge.apply_raw(f, x);
    const auto& s = gx.samples();
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += ph * s[i];
  });
  return Fiber(t, GridFunction(f.geometry(), f.twist(), std::move(acc)));
}

Fiber spectral_projection(const GradedElement& a, const GroupIndex& t, const GaugeAction& gauge) {
  check_nyquist(t, gauge);
  if (a.empty()) throw std::invalid_argument("spectral_projection: empty graded element");
  const GeometryPtr geom = a.terms().begin()->second.geometry();
  std::vector<cplx> acc(geom->total(), cplx(0.0, 0.0));
  Twist tw{};  // zero lies in every twist class; a matching term fixes the tag
  for (const auto& [s, f] : a.terms()) {
    const Fiber p = spectral_projection(f.data(), t, gauge);
    const auto& v = p.data().samples();
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += v[i];
    if (s == t) tw = f.twist();
  }
  return Fiber(t, GridFunction(geom, tw, std::move(acc)));
}

GradedElement decompose(const GridFunction& f, const GaugeAction& gauge, int cutoff) {
  const int d = gauge.rank();
  for (int j = 0; j < d; ++j)
    if (2 * cutoff >= gauge.lattice[static_cast<std::size_t>(j)])
      throw std::invalid_argument("decompose: cutoff beyond Nyquist range");

  // One gauge orbit pass; every P_t reuses the transformed copies.
  const double weight = 1.0 / static_cast<double>(lattice_size(gauge));
  std::vector<GroupIndex> box;
  {
    std::vector<int> t(static_cast<std::size_t>(d), -cutoff);
    while (true) {
      box.emplace_back(t);
      int j = 0;
      for (; j < d; ++j) {
        if (++t[static_cast<std::size_t>(j)] <= cutoff) break;
        t[static_cast<std::size_t>(j)] = -cutoff;
      }
      if (j == d) break;
    }
  }
  std::vector<std::vector<cplx>> acc(box.size(), std::vector<cplx>(f.size(), cplx(0.0, 0.0)));
  for_each_lattice_point(gauge.lattice, [&](const TorusPoint& x) {
    const GridFunction gx = gauge.apply_raw(f, x);
    const auto& s = gx.samples();
    for (std::size_t b = 0; b < box.size(); ++b) {
      const cplx ph = std::conj(pairing(x, box[b])) * weight;
      auto& dst = acc[b];
      for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += ph * s[i];
    }
  });
  GradedElement out;
  for (std::size_t b = 0; b < box.size(); ++b)
    out.add_term(Fiber(box[b], GridFunction(f.geometry(), f.twist(), std::move(acc[b]))));
  return out;
}

GridFunction reconstruct(const GradedElement& a) {
  if (a.empty()) throw std::invalid_argument("reconstruct: empty graded element");
  GridFunction sum = a.terms().begin()->second.data();
  bool first = true;
  for (const auto& [t, f] : a.terms()) {
    if (first) {
      first = false;
      continue;
    }
    sum += f.data();  // throws on twist mismatch: cross-twist sums are not a single grid function
  }
  return sum;
}

Fiber conditional_expectation(const GridFunction& f, const GaugeAction& gauge) {
  return spectral_projection(f, GroupIndex::zero(gauge.rank()), gauge);
}

double schwartz_seminorm(const GradedElement& a,
                         const std::function<double(const GroupIndex&)>& h) {
  double m = 0.0;
  for (const auto& [t, f] : a.terms()) m = std::max(m, std::abs(h(t)) * fiber_norm(f));
  return m;
}

}  // namespace fellq
