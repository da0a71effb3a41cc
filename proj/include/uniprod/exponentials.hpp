#pragma once

/**
 * Convolution exponentials.
 *
 * On L(B) the exponential of a functional f with f(1) = 0 is the series
 * Σ f^{*k}/k!.  With a degree-preserving Λ every convolution factor must
 * absorb at least one letter, so on a SymWord of degree n the series stops
 * at k = n and is computed exactly.  exp_⊙(ψ) is the restriction of
 * exp(D(ψ)) to the singletons {(k, w)}.
 */

#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "uniprod/lachs.hpp"

namespace uniprod {

/// Polynomial in a formal time variable; entry i is the coefficient of t^i.
using TimePolynomial = std::vector<Scalar>;

Scalar evaluate_at(const TimePolynomial& p, const Scalar& t);
/// "1/2 t + 3 t^2" style rendering; "0" for the zero polynomial.
std::string format_time_polynomial(const TimePolynomial& p);

/// Memoized convolution powers f^{*k} on L(B).
class ExpEngine {
 public:
  /// Requires f(1) = 0 and a degree-preserving Λ.
  ExpEngine(InducedBialgebra IB, LachsFunctional f);

  const InducedBialgebra& bialgebra() const { return IB_; }

  /// f^{*k}(s), with f^{*0} = δ.
  Scalar power(unsigned k, const SymWord& s);
  /// Σ_{k <= deg s} f^{*k}(s)/k!.
  Scalar exp(const SymWord& s);
  /// exp(t f)(s): coefficient k is f^{*k}(s)/k!.
  TimePolynomial exp_poly(const SymWord& s);

  /// Largest k for which power() was evaluated on any SymWord.
  unsigned max_power_used() const;

 private:
  InducedBialgebra IB_;
  LachsFunctional f_;
  mutable std::mutex mutex_;
  std::map<std::pair<unsigned, SymWord>, Scalar> memo_;
  unsigned max_k_ = 0;
};

/// exp(f)(s).
Scalar exp_on_lachs(const InducedBialgebra& IB, const LachsFunctional& f, const SymWord& s);

struct ExpResult {
  Functional psi;
  std::string product;
  unsigned degree = 0;
  Functional table;
  /// Per word, per component: exp_⊙(tψ)(w) as a polynomial in t.
  std::optional<std::map<Word, std::vector<TimePolynomial>>> time_polynomials;
};

/// exp_⊙(ψ) on all words up to degree (default: ψ's degree).
ExpResult exp_dual(const ProductPtr& U, const DualSemigroup& D, const Functional& psi,
                   std::optional<unsigned> degree = std::nullopt, bool with_time = false);

/// exp_⊙(tψ)(w), one polynomial per component.
std::vector<TimePolynomial> exp_poly_in_t(const ProductPtr& U, const DualSemigroup& D,
                                          const Functional& psi, const Word& w);

/// Largest |re| or |im| of the componentwise difference.
Rational deviation(const std::vector<Scalar>& a, const std::vector<Scalar>& b);

struct TrotterRun {
  unsigned n = 1;
  Functional approximant;
  std::map<Word, Rational> deviation;
  /// Maximum over all words.
  Rational max_deviation;
};

/// (exp_⊗(ψ/n))^{⋆n}, compared with the reference exp_⊙(ψ).
TrotterRun trotter(const ProductPtr& U, const DualSemigroup& D, const Functional& psi, unsigned n,
                   unsigned degree, const Functional& reference);
TrotterRun trotter(const ProductPtr& U, const DualSemigroup& D, const Functional& psi, unsigned n,
                   unsigned degree);

struct SemigroupLawReport {
  bool pass = true;
  std::size_t points = 0;
  std::optional<Word> witness;
  Rational s;
  Rational t;
};

/// exp_⊙((s+t)ψ) = exp_⊙(sψ) ⋆ exp_⊙(tψ) on words up to degree, decided on the
/// grid s, t ∈ {1, ..., degree+1}.  Both sides are polynomials of degree at
/// most `degree` in s and in t, so agreement on the grid is the identity.
SemigroupLawReport check_semigroup_law(const ProductPtr& U, const DualSemigroup& D,
                                       const Functional& psi, unsigned degree);

}  // namespace uniprod
