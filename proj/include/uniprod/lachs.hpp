#pragma once

/**
 * The Lachs functor L(A) = S(A^{⊕d}) and the bialgebra it induces on a dual
 * semigroup.
 *
 * A SymWord is a basis element of the symmetric tensor algebra: a sorted
 * multiset of (component, word) pairs, the empty multiset being the unit.
 * σ is computed factor-wise: the product over the pairs (k, w) of the k-th
 * symbolic product value on w, with every monomial split into its leg-1 and
 * leg-2 symbols.  Δ = σ_{B,B} ∘ L(Λ) is evaluated lazily per basis element.
 */

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "uniprod/dual_semigroup.hpp"
#include "uniprod/functional.hpp"
#include "uniprod/universal_products.hpp"

namespace uniprod {

using SymAtom = std::pair<std::size_t, Word>;

class SymWord {
 public:
  SymWord() = default;
  explicit SymWord(std::vector<SymAtom> atoms);
  static SymWord single(std::size_t k, Word w) { return SymWord({{k, std::move(w)}}); }

  const std::vector<SymAtom>& atoms() const { return atoms_; }
  bool empty() const { return atoms_.empty(); }
  std::size_t size() const { return atoms_.size(); }
  /// Total letter count.
  std::size_t degree() const;

  /// Multiset union.
  friend SymWord operator*(const SymWord& a, const SymWord& b);
  friend auto operator<=>(const SymWord&, const SymWord&) = default;

 private:
  std::vector<SymAtom> atoms_;
};

std::string format_symword(const FacedAlgebra& alg, const SymWord& s);

/// Element of L(A): SymWord -> coefficient.
using SymPolynomial = std::map<SymWord, Scalar>;
/// Element of L(A_1) ⊗ L(A_2) on the basis of pairs of SymWords.
using TensorElement = std::map<std::pair<SymWord, SymWord>, Scalar>;

void add_to(TensorElement& t, const SymWord& left, const SymWord& right, const Scalar& c);
/// Product in the commutative algebra L(A_1) ⊗ L(A_2).
TensorElement tensor_product(const TensorElement& a, const TensorElement& b);

/// All SymWords over alg with d components and total degree <= degree,
/// including the unit, in a fixed order.
std::vector<SymWord> symwords_up_to(const FacedAlgebra& alg, std::size_t d, unsigned degree);

/// Linear functional on L(A).
using LachsFunctional = std::function<Scalar(const SymWord&)>;

/// S(f): multiplicative, 1 on the unit.
LachsFunctional character(const Functional& f);
/// D(f): f_k(w) on singletons {(k,w)}, 0 elsewhere (including the unit).
LachsFunctional derivation(const Functional& f);
/// The counit δ = S(0): 1 on the unit, 0 on every nonempty SymWord.
Scalar counit(const SymWord& s);

/// (f ⊗ g)(t) = Σ c·f(l)·g(r).
Scalar apply_tensor(const LachsFunctional& f, const LachsFunctional& g, const TensorElement& t);

/// L(j): each word of the multiset is mapped by j and the product expanded.
SymPolynomial lachs_map(const FacedHomomorphism& j, const SymWord& s);
/// L(j1) ⊗ L(j2).
TensorElement lachs_map(const FacedHomomorphism& j1, const FacedHomomorphism& j2,
                        const TensorElement& t);

/// σ(s) for s a SymWord over the binary free product `product`, d components.
TensorElement extract_sigma(const UniversalProduct& U, const FacedAlgebra& product, std::size_t d,
                            const SymWord& s);

/// The tensor-case fast path σ̂: b@1 ↦ b ⊗ 1, b@2 ↦ 1 ⊗ b on single words.
TensorElement sigma_hat(const FacedAlgebra& product, const SymWord& s);

/// (S(B^{⊕d}), σ_{B,B} ∘ L(Λ), S(0)).
class InducedBialgebra {
 public:
  using SigmaFn = std::function<TensorElement(const SymWord&)>;

  InducedBialgebra(DualSemigroup D, ProductPtr U, std::size_t d);

  const DualSemigroup& dual_semigroup() const { return D_; }
  const ProductPtr& product() const { return U_; }
  std::size_t components() const { return d_; }
  const AlgebraPtr& base() const { return D_.base(); }

  /// Replaces σ (used to inject faults in tests).
  void override_sigma(SigmaFn sigma);

  /// L(Λ)(s) expanded into SymWords over B⊔B.
  SymPolynomial lachs_of_comultiplication(const SymWord& s) const;
  TensorElement sigma(const SymWord& s) const;
  TensorElement delta(const SymWord& s) const;

 private:
  struct Memo {
    std::mutex mutex;
    std::map<SymWord, TensorElement> delta;
  };

  DualSemigroup D_;
  ProductPtr U_;
  std::size_t d_;
  std::optional<SigmaFn> sigma_override_;
  std::shared_ptr<Memo> memo_;
};

TensorElement induced_delta(const InducedBialgebra& IB, const SymWord& s);

/// (f ⊗ g) ∘ Δ.
LachsFunctional coalg_convolve(const InducedBialgebra& IB, LachsFunctional f, LachsFunctional g);

struct IntertwineReport {
  bool pass = true;
  std::size_t checked = 0;
  std::optional<SymWord> witness;
  Scalar lhs;
  Scalar rhs;
};

/// Compares S(phi1 ⋆ phi2) with S(phi1) * S(phi2) on every SymWord to degree.
IntertwineReport check_intertwine(const InducedBialgebra& IB, const Functional& phi1,
                                  const Functional& phi2, unsigned degree);

struct LawReport {
  bool pass = true;
  std::string law;
  std::optional<SymWord> witness;
  std::size_t checked = 0;
};

/// (δ⊗id)Δ = id = (id⊗δ)Δ on basis to degree.
LawReport check_delta_counit(const InducedBialgebra& IB, unsigned degree);
/// (Δ⊗id)Δ = (id⊗Δ)Δ on basis to degree.
LawReport check_delta_coassoc(const InducedBialgebra& IB, unsigned degree);
/// With degree-preserving Λ (primitive in particular): every term of Δ(s) has left + right degree = deg s.
LawReport check_delta_degree(const InducedBialgebra& IB, unsigned degree);
/// σ(s·t) = σ(s)σ(t) on pairs of basis elements to total degree.
LawReport check_sigma_multiplicative(const InducedBialgebra& IB, unsigned degree);
/// σ ∘ L(star) = (L(star) ⊗ L(star)) ∘ σ with conjugated coefficients, on
/// basis elements of L(B⊔B) to degree.  Reported, not assumed.
LawReport check_sigma_star(const InducedBialgebra& IB, unsigned degree);

}  // namespace uniprod
