#pragma once

/**
 * Positivity at truncation: Gram matrices of (unitized) moments, exact PSD
 * decisions by pivoted LDL* over Gaussian rationals, restricted states and
 * generating functionals, sampling of generating functionals from random
 * *-representations, and the Schoenberg harness.
 *
 * A pass at half-degree h certifies positivity on the span of words of
 * length <= h only.
 */

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "uniprod/exponentials.hpp"
#include "uniprod/functional.hpp"

namespace uniprod {

using Matrix = std::vector<std::vector<Scalar>>;

struct GramMatrix {
  /// Graded-lex word basis; the empty word stands for the unit.
  std::vector<Word> basis;
  Matrix entries;
  std::size_t component = 0;
  unsigned half_degree = 0;
  bool include_unit = false;
};

/// Entries 1φ_k(star(w_i) w_j) over the words of length <= half_degree,
/// preceded by the unit when include_unit is set.
GramMatrix gram(const Functional& phi, std::size_t k, unsigned half_degree, bool include_unit);

bool is_hermitian(const Matrix& m);

struct PsdVerdict {
  bool psd = true;
  /// For not_psd: x with x*Gx < 0, first nonzero entry 1.
  std::optional<std::vector<Scalar>> witness;
  /// x*Gx for the witness.
  Rational witness_value;
  /// Pivots of the LDL* elimination in order, with their row index.
  std::vector<std::pair<std::size_t, Rational>> pivots;
};

/// Exact decision; throws InputError on non-Hermitian input.
PsdVerdict psd_exact(const Matrix& g);
inline PsdVerdict psd_exact(const GramMatrix& g) { return psd_exact(g.entries); }

/// x* G x.
Scalar quadratic_form(const Matrix& g, const std::vector<Scalar>& x);

struct PositivityVerdict {
  bool pass = true;
  unsigned half_degree = 0;
  std::optional<HermitianViolation> hermitian;
  /// Per component, in order; empty when the hermitian check failed.
  std::vector<PsdVerdict> components;
  std::vector<GramMatrix> grams;
  /// Component of the first PSD failure.
  std::optional<std::size_t> failed_component;
};

/// Hermitian check, then PSD of the Gram matrix with unit, per component.
PositivityVerdict is_restricted_state(const Functional& phi, unsigned half_degree);
/// Hermitian check, then PSD of the Gram matrix without unit, per component.
PositivityVerdict is_restricted_generating_functional(const Functional& psi, unsigned half_degree);

struct SampleOptions {
  unsigned rep_dim = 2;
  std::size_t components = 1;
  /// Adds a hermitian functional supported on single letters.
  bool drift = false;
};

/// ψ_k(w) = v_k* π(w) v_k for random π with π(g*) = π(g)*.
Functional sample_generating_functional(std::uint64_t seed, const AlgebraPtr& alg, unsigned degree,
                                        const SampleOptions& options);

/// φ_k(w) = v_k* π(w) v_k / (v_k* v_k), a restricted state.
Functional sample_restricted_state(std::uint64_t seed, const AlgebraPtr& alg, unsigned degree,
                                   const SampleOptions& options);

struct SchoenbergPoint {
  Rational t;
  PositivityVerdict verdict;
};

struct SchoenbergReport {
  bool pass = true;
  /// The generating-functional check of ψ; nothing else runs when it fails.
  PositivityVerdict precondition;
  std::vector<SchoenbergPoint> points;
  /// The t-linear coefficient of exp_⊙(tψ) equals ψ on every word.
  bool derivative_ok = true;
  std::optional<Word> derivative_witness;
};

/// For each t: exp_⊙(tψ) is a restricted state at half-degree degree/2.
SchoenbergReport schoenberg_suite(const ProductPtr& U, const DualSemigroup& D,
                                  const Functional& psi, const std::vector<Rational>& times,
                                  unsigned degree);

}  // namespace uniprod
