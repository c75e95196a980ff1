#include "fellq/deform.hpp"

#include <stdexcept>

#include "fellq/tolerances.hpp"

namespace fellq {

namespace {

double l1(const GradedElement& a) {
  double s = 0.0;
  for (const auto& [t, f] : a.terms()) s += fiber_norm(f);
  return s;
}

}  // namespace

void GradedElement::add_term(const Fiber& f) {
  auto it = terms_.find(f.grading());
  if (it == terms_.end()) {
    if (fiber_norm(f) >= tol::kZeroDrop) terms_.emplace(f.grading(), f);
    return;
  }
  it->second.mutable_data() += f.data();
  if (fiber_norm(it->second) < tol::kZeroDrop) terms_.erase(it);
}

const Fiber& GradedElement::term(const GroupIndex& t) const {
  auto it = terms_.find(t);
  if (it == terms_.end()) throw std::out_of_range("GradedElement::term: no term at " + t.str());
  return it->second;
}

std::vector<GroupIndex> GradedElement::support() const {
  std::vector<GroupIndex> s;
  s.reserve(terms_.size());
  for (const auto& [t, f] : terms_) s.push_back(t);
  return s;
}

GradedElement& GradedElement::operator+=(const GradedElement& o) {
  for (const auto& [t, f] : o.terms()) add_term(f);
  return *this;
}

GradedElement& GradedElement::operator-=(const GradedElement& o) {
  for (const auto& [t, f] : o.terms()) add_term(fiber_scale(-1.0, f));
  return *this;
}

GradedElement& GradedElement::operator*=(cplx s) {
  std::map<GroupIndex, Fiber> out;
  for (const auto& [t, f] : terms_) {
    Fiber g = fiber_scale(s, f);
    if (fiber_norm(g) >= tol::kZeroDrop) out.emplace(t, std::move(g));
  }
  terms_ = std::move(out);
  return *this;
}

GradedElement operator+(GradedElement a, const GradedElement& b) { return a += b; }
GradedElement operator-(GradedElement a, const GradedElement& b) { return a -= b; }
GradedElement operator*(cplx s, GradedElement a) { return a *= s; }

GradedElement ambient_product(const GradedElement& a, const GradedElement& b) {
  GradedElement out;
  for (const auto& [t, at] : a.terms())
    for (const auto& [s, bs] : b.terms()) out.add_term(fiber_multiply(at, bs));
  return out;
}

GradedElement ambient_star(const GradedElement& a) {
  GradedElement out;
  for (const auto& [t, f] : a.terms()) out.add_term(fiber_star(f));
  return out;
}

GradedElement deformed_product(const GradedElement& a, const GradedElement& b,
                               const DeformingAction& theta, double hbar) {
  GradedElement out;
  const std::vector<GroupIndex> ts = a.support();
  for (const auto& [s, bs] : b.terms()) {
    const std::vector<Fiber> moved = theta.batch(bs, ts, hbar);
    std::size_t i = 0;
    for (const auto& [t, at] : a.terms()) out.add_term(fiber_multiply(at, moved[i++]));
  }
  return out;
}

GradedElement deformed_star(const GradedElement& a, const DeformingAction& theta, double hbar) {
  GradedElement out;
  for (const auto& [t, f] : a.terms()) out.add_term(theta(fiber_star(f), -t, hbar));
  return out;
}

AxiomResiduals axiom_residuals(const GradedElement& a, const GradedElement& b,
                               const GradedElement& c, const DeformingAction& theta, double hbar) {
  AxiomResiduals r;

  const GradedElement ab = deformed_product(a, b, theta, hbar);
  const GradedElement bc = deformed_product(b, c, theta, hbar);
  r.associativity = l1(deformed_product(ab, c, theta, hbar) - deformed_product(a, bc, theta, hbar));

  const GradedElement lhs = deformed_star(ab, theta, hbar);
  const GradedElement rhs =
      deformed_product(deformed_star(b, theta, hbar), deformed_star(a, theta, hbar), theta, hbar);
  r.star_antimult = l1(lhs - rhs);

  for (const GradedElement* e : {&a, &b, &c}) {
    for (const auto& [t, f] : e->terms()) {
      const Fiber fs = theta(fiber_star(f), -t, hbar);
      const Fiber sq = fiber_multiply(fs, theta(f, -t, hbar));  // f^<> x f
      const double n = fiber_norm(f);
      r.cstar_identity = std::max(r.cstar_identity, std::abs(fiber_norm(sq) - n * n));
    }
  }
  // submultiplicativity margin over the (a_t, b_s) pairs of the product
  for (const auto& [t, f] : a.terms())
    for (const auto& [s, g] : b.terms()) {
      const Fiber prod = fiber_multiply(f, theta(g, t, hbar));
      const double excess = fiber_norm(prod) - fiber_norm(f) * fiber_norm(g);
      r.submultiplicativity = std::max(r.submultiplicativity, std::max(0.0, excess));
    }
  return r;
}

GradedElement extend_action(const CommutingAction& alpha, const GradedElement& a) {
  GradedElement out;
  for (const auto& [t, f] : a.terms()) out.add_term(alpha(f));
  return out;
}

}  // namespace fellq
