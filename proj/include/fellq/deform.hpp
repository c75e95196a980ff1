#pragma once

#include <functional>
#include <map>
#include <vector>

#include "fellq/fiber.hpp"
#include "fellq/grading.hpp"

namespace fellq {

// Finite sum sum_t b_t delta_t in the algebraic direct sum of the fibers.
// Terms whose sup-norm falls below tol::kZeroDrop are not stored.
class GradedElement {
 public:
  GradedElement() = default;
  explicit GradedElement(const Fiber& f) { add_term(f); }

  // Accumulates f into the term at f.grading().
  void add_term(const Fiber& f);

  bool empty() const { return terms_.empty(); }
  std::size_t term_count() const { return terms_.size(); }
  const std::map<GroupIndex, Fiber>& terms() const { return terms_; }
  bool has_term(const GroupIndex& t) const { return terms_.count(t) != 0; }
  // Throws if absent.
  const Fiber& term(const GroupIndex& t) const;
  std::vector<GroupIndex> support() const;

  GradedElement& operator+=(const GradedElement& o);
  GradedElement& operator-=(const GradedElement& o);
  GradedElement& operator*=(cplx s);

 private:
  std::map<GroupIndex, Fiber> terms_;
};

GradedElement operator+(GradedElement a, const GradedElement& b);
GradedElement operator-(GradedElement a, const GradedElement& b);
GradedElement operator*(cplx s, GradedElement a);

// Undeformed operations of the ambient algebra, extended bilinearly /
// termwise over finite supports.
GradedElement ambient_product(const GradedElement& a, const GradedElement& b);
GradedElement ambient_star(const GradedElement& a);

// The deforming action theta^hbar of Z^d on the bundle: apply(b, t, hbar)
// realizes theta^hbar_t applied to the fiber b (pullback by the flow composed
// with any model phase).  Models construct these; theta^hbar_0 and theta^0_t
// must be the identity.  apply_batch, when set, evaluates several acting
// group elements against one fiber sharing the transform work.
struct DeformingAction {
  std::function<Fiber(const Fiber&, const GroupIndex&, double)> apply;
  std::function<std::vector<Fiber>(const Fiber&, const std::vector<GroupIndex>&, double)>
      apply_batch;

  Fiber operator()(const Fiber& b, const GroupIndex& t, double hbar) const {
    if (t.is_zero() || hbar == 0.0) return b;
    return apply(b, t, hbar);
  }

  std::vector<Fiber> batch(const Fiber& b, const std::vector<GroupIndex>& ts, double hbar) const {
    if (hbar != 0.0 && apply_batch) return apply_batch(b, ts, hbar);
    std::vector<Fiber> out;
    out.reserve(ts.size());
    for (const auto& t : ts) out.push_back((*this)(b, t, hbar));
    return out;
  }
};

// a x_h b, the bilinear extension of a_t x b_s = a_t theta^h_t(b_s).
GradedElement deformed_product(const GradedElement& a, const GradedElement& b,
                               const DeformingAction& theta, double hbar);

// a^<>, termwise theta^h_{-t}(a_t^*).
GradedElement deformed_star(const GradedElement& a, const DeformingAction& theta, double hbar);

// Residuals of the deformed Fell-bundle axioms on concrete inputs.
struct AxiomResiduals {
  double associativity = 0.0;        // L1 of (axb)xc - ax(bxc)
  double star_antimult = 0.0;        // L1 of (axb)^<> - b^<> x a^<>
  double cstar_identity = 0.0;       // max_t | ||b_t^<> x b_t|| - ||b_t||^2 |
  double submultiplicativity = 0.0;  // max over pairs of (||a_t x b_s|| - ||a_t|| ||b_s||)_+
};

AxiomResiduals axiom_residuals(const GradedElement& a, const GradedElement& b,
                               const GradedElement& c, const DeformingAction& theta, double hbar);

// An automorphism of the ambient algebra commuting with gauge and deforming
// actions, applied fiberwise.
using CommutingAction = std::function<Fiber(const Fiber&)>;

// Termwise extension of a commuting action to graded elements; the extension
// is automorphic for the deformed operations as well.
GradedElement extend_action(const CommutingAction& alpha, const GradedElement& a);

}  // namespace fellq
