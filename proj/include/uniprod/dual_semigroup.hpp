#pragma once

/**
 * m-faced dual semigroups on freely generated algebras.
 *
 * The comultiplication Λ: B → B⊔B is given on generators and extended as a
 * faced homomorphism.  The default rule is primitive, v ↦ v@1 + v@2, which
 * makes B the tensor algebra over the span of its generators.
 */

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "uniprod/faced_algebra.hpp"

namespace uniprod {

class DualSemigroup {
 public:
  /// rule[g] is Λ(g) as a polynomial over B⊔B (use pair_algebra() of a
  /// primitive instance, or free_product(B, B)).
  DualSemigroup(AlgebraPtr base, std::vector<Polynomial> rule);

  static DualSemigroup primitive(const AlgebraPtr& base);

  const AlgebraPtr& base() const { return base_; }
  const AlgebraPtr& pair_algebra() const { return pair_; }
  const FacedHomomorphism& comultiplication() const { return lambda_; }

  bool is_primitive() const { return primitive_; }
  /// Every generator image is a combination of single letters, so Λ
  /// preserves the letter count of words.
  bool is_degree_preserving() const { return degree_preserving_; }

  Polynomial comultiply(const Polynomial& p) const { return lambda_.apply(p); }
  Polynomial comultiply(const Word& w) const { return lambda_.apply(w); }

 private:
  AlgebraPtr base_;
  AlgebraPtr pair_;
  FacedHomomorphism lambda_;
  bool primitive_ = false;
  bool degree_preserving_ = false;
};

inline Polynomial comultiply(const DualSemigroup& D, const Polynomial& p) { return D.comultiply(p); }

struct LawCheck {
  bool pass = true;
  std::string law;
  /// Offending generator id, or word for extended checks.
  std::string witness;
  std::string detail;
};

/// (id⊔0)Λ = id = (0⊔id)Λ on every generator.
LawCheck check_counit(const DualSemigroup& D);

/// (Λ⊔id)Λ = (id⊔Λ)Λ on generators (sufficient, both sides being
/// homomorphisms) and, as a cross-check, on all words up to degree.  A failing
/// counit law is reported first.
LawCheck check_coassoc(const DualSemigroup& D, unsigned degree);

/// star(Λ(g)) = Λ(star g) on every generator; requires involution data.
LawCheck check_star_compatible(const DualSemigroup& D);

/// Λ_n: B → B^{⊔n} with Λ_1 = id and Λ_{n+1} = (Λ_n ⊔ id)Λ.
FacedHomomorphism iterated_comultiplication(const DualSemigroup& D, unsigned n);
Polynomial iterate_comultiplication(const DualSemigroup& D, unsigned n, const Polynomial& p);

/// (id ⊔ Λ_{n-1})Λ, the other bracketing; used to test bracketing independence.
FacedHomomorphism iterated_comultiplication_right(const DualSemigroup& D, unsigned n);

}  // namespace uniprod
