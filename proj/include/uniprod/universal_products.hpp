#pragma once

/**
 * m-d-universal products and the dual-semigroup convolution.
 *
 * A universal product is given by its evaluator on mixed words: a word over
 * A_1 ⊔ A_2 whose letters carry a leg (1 or 2), a generator of that leg's
 * factor and a face.  The evaluator returns, per component, a polynomial in
 * the sub-evaluations phi_{leg,k}(u) where u runs over words formed from
 * letters of one leg.  By universality the polynomial only depends on the
 * pattern of legs and faces, so results are cached per pattern and renamed.
 *
 * Built-ins (faces are ignored by all of them):
 *   tensor        componentwise; phi1_k(leg-1 letters) * phi2_k(leg-2 letters)
 *   free          componentwise; recursive centering of alternating blocks
 *   boolean       componentwise; product over alternating blocks
 *   monotone      phi1 ▷ phi2: leg-1 letters concatenate inside phi1, every
 *                 leg-2 block factors out on its own
 *   antimonotone  the leg mirror of monotone
 *   cfree         d = 2; component 2 is free, component 1 is c-free with
 *                 respect to component 2
 */

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "uniprod/coefficients.hpp"
#include "uniprod/dual_semigroup.hpp"
#include "uniprod/faced_algebra.hpp"
#include "uniprod/functional.hpp"

namespace uniprod {

struct MixedLetter {
  unsigned leg = 1;
  GenIndex gen = 0;
  unsigned face = 1;
  friend auto operator<=>(const MixedLetter&, const MixedLetter&) = default;
};
using MixedWord = std::vector<MixedLetter>;

/// Mixed form of a word over a binary free product.
MixedWord to_mixed(const FacedAlgebra& product, const Word& w);

/// Moment access for concrete evaluation: (component, nonempty word) -> value.
using MomentFn = std::function<Scalar(std::size_t, const Word&)>;

class UniversalProduct {
 public:
  virtual ~UniversalProduct() = default;

  virtual std::string name() const = 0;
  virtual bool applicable(unsigned m, std::size_t d) const = 0;

  /// Symbolic value on a mixed word, one polynomial per component.  Symbol
  /// factors are legs; symbol words are generator indices of the factor.
  virtual std::vector<SymbolicPolynomial> evaluate(const MixedWord& w, std::size_t d) const = 0;

  /// Optional direct numeric evaluation.  The default defers to substitution
  /// into symbolic().
  virtual std::optional<std::vector<Scalar>> evaluate_concrete(const MixedWord& w, std::size_t d,
                                                               const MomentFn& phi1,
                                                               const MomentFn& phi2) const;

  /// evaluate() on the generic word of the same leg/face pattern (distinct
  /// letters), cached, renamed to the letters of w.
  std::vector<SymbolicPolynomial> symbolic(const MixedWord& w, std::size_t d) const;

  /// Numeric value: evaluate_concrete() when provided, else substitution.
  std::vector<Scalar> concrete(const MixedWord& w, std::size_t d, const MomentFn& phi1,
                               const MomentFn& phi2) const;

 private:
  using Key = std::pair<std::vector<std::pair<unsigned, unsigned>>, std::size_t>;
  mutable std::mutex cache_mutex_;
  mutable std::map<Key, std::vector<SymbolicPolynomial>> cache_;
};

using ProductPtr = std::shared_ptr<const UniversalProduct>;

/// "tensor", "free", "boolean", "monotone", "antimonotone", "cfree".
ProductPtr make_product(std::string_view name);
const std::vector<std::string>& builtin_product_names();

/// Throws InputError when U does not apply to (m, d).
void require_applicable(const UniversalProduct& U, unsigned m, std::size_t d);

/// Concrete value vector of (phi1 ⊙ phi2)(w) for a word over
/// dom(phi1) ⊔ dom(phi2) given as `product`.
std::vector<Scalar> eval_product(const UniversalProduct& U, const Functional& phi1,
                                 const Functional& phi2, const FacedAlgebra& product,
                                 const Word& w);

/// Same on a mixed word with arbitrary moment sources.
std::vector<Scalar> eval_product(const UniversalProduct& U, const MomentFn& phi1,
                                 const MomentFn& phi2, const MixedWord& w, std::size_t d);

/// The canonical polynomial in moment symbols for a word over A_1 ⊔ A_2.
std::vector<SymbolicPolynomial> eval_product_symbolic(const UniversalProduct& U,
                                                      const FacedAlgebra& product, const Word& w,
                                                      std::size_t d);

/// Moment access of a table functional (throws on truncation underflow).
MomentFn moments_of(const Functional& phi);

/// (phi1 ⋆ phi2) = (phi1 ⊙ phi2)∘Λ on all words up to `degree` (default: the
/// smaller input degree).
Functional convolve(const UniversalProduct& U, const DualSemigroup& D, const Functional& phi1,
                    const Functional& phi2, std::optional<unsigned> degree = std::nullopt);

/// phi^{⊙n} on a word over B^{⊔n} (power.legs() == n), by splitting off the
/// last leg recursively.
std::vector<Scalar> eval_power_product(const UniversalProduct& U, const Functional& phi,
                                       const FacedAlgebra& power, const Word& w);

/// phi^{⋆n} = phi^{⊙n}∘Λ_n via the iterated comultiplication.
Functional convolution_power_iterated(const UniversalProduct& U, const DualSemigroup& D,
                                      const Functional& phi, unsigned n, unsigned degree);

/// phi^{⋆n} by n-1 successive binary convolutions.
Functional convolution_power(const UniversalProduct& U, const DualSemigroup& D,
                             const Functional& phi, unsigned n, unsigned degree);

struct AxiomFailure {
  std::string law;
  /// Trial index; with the seed it reproduces the random data.
  unsigned trial = 0;
  std::string witness;
  std::string detail;
};

struct AxiomReport {
  std::string product;
  unsigned trials = 0;
  unsigned max_len = 0;
  std::size_t checks = 0;
  std::vector<AxiomFailure> failures;
  bool pass() const { return failures.empty(); }
};

struct AxiomOptions {
  unsigned trials = 50;
  /// Three-factor words for associativity go up to max_len + 1.
  unsigned max_len = 5;
  std::uint64_t seed = 1;
  unsigned m = 1;
  std::size_t d = 1;
  /// Stop after the first failing law.
  bool stop_at_first = true;
};

/// Universality, associativity and restriction on random functionals and
/// words, all decided exactly.  Evaluation bypasses the pattern cache (which
/// itself relies on universality), so universality is actually exercised.
AxiomReport check_axioms(const UniversalProduct& U, const AxiomOptions& options);

}  // namespace uniprod
