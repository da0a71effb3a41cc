#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <vector>

#include "uniprod/coefficients.hpp"
#include "uniprod/faced_algebra.hpp"

namespace uniprod {

/// A d-valued linear functional on an m-faced algebra, stored as a moment
/// table on basis words up to a truncation degree.  Words of length <= degree
/// that are absent from the table have value 0; longer words are out of
/// range and every access to them throws TruncationError.
class Functional {
 public:
  Functional(AlgebraPtr alg, std::size_t d, unsigned degree);

  static Functional zero(AlgebraPtr alg, std::size_t d, unsigned degree) {
    return Functional(std::move(alg), d, degree);
  }

  const AlgebraPtr& algebra() const { return alg_; }
  std::size_t components() const { return d_; }
  unsigned degree() const { return degree_; }

  /// Component k is 0-based.
  void set(std::size_t k, const Word& w, const Scalar& value);
  const Scalar& value(std::size_t k, const Word& w) const;
  /// Value of the unital extension: 1 on the empty word.
  Scalar unital_value(std::size_t k, const Word& w) const;
  Scalar apply(std::size_t k, const Polynomial& p) const;
  Scalar apply(std::size_t k, const UnitalElement& x) const;

  /// Nonzero entries, graded-lex by word.
  std::vector<std::pair<Word, std::vector<Scalar>>> entries() const;

  Functional scaled(const Scalar& s) const;
  /// The same moments with a lower truncation degree.
  Functional truncated(unsigned degree) const;

  /// The pointwise composition phi∘j, to the given degree.
  Functional pullback(const FacedHomomorphism& j, unsigned degree) const;

  friend bool operator==(const Functional& a, const Functional& b);

 private:
  void check(std::size_t k, const Word& w) const;

  AlgebraPtr alg_;
  std::size_t d_;
  unsigned degree_;
  std::map<Word, std::vector<Scalar>> table_;
  static const Scalar zero_;
};

/// First word w (graded-lex) and component with phi_k(w*) != conj(phi_k(w)).
struct HermitianViolation {
  std::size_t component;
  Word word;
  Scalar value;
  Scalar starred_value;
};

std::optional<HermitianViolation> hermitian_violation(const Functional& phi);

/// The unital extension 1phi on the unitization: value vector (1,...,1) at 1.
class UnitalFunctional {
 public:
  explicit UnitalFunctional(Functional phi) : phi_(std::move(phi)) {}
  const Functional& base() const { return phi_; }
  Scalar operator()(std::size_t k, const UnitalElement& x) const { return phi_.apply(k, x); }

 private:
  Functional phi_;
};

inline UnitalFunctional unitize_functional(Functional phi) { return UnitalFunctional(std::move(phi)); }

}  // namespace uniprod
