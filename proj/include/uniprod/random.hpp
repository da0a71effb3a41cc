#pragma once

/// Seeded generators for functionals, words and homomorphisms.  Output is a
/// function of the seed only: the distributions are built on raw mt19937_64
/// draws, not on the implementation-defined std:: distributions.

#include <cstdint>
#include <random>

#include "uniprod/coefficients.hpp"
#include "uniprod/faced_algebra.hpp"
#include "uniprod/functional.hpp"

namespace uniprod {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next() { return eng_(); }
  /// Uniform in [0, n), n > 0.
  std::uint64_t below(std::uint64_t n);
  /// Uniform in [lo, hi].
  long range(long lo, long hi) { return lo + static_cast<long>(below(static_cast<std::uint64_t>(hi - lo + 1))); }
  bool coin() { return (next() >> 63) != 0; }

  /// num/den with |num| <= max_num and den in [1, max_den].
  Rational rational(long max_num, long max_den);
  /// Gaussian rational; the imaginary part is nonzero only if complex.
  Scalar scalar(bool complex, long max_num = 3, long max_den = 3);

 private:
  std::mt19937_64 eng_;
};

/// Uniformly random word with length in [min_len, max_len].
Word random_word(Rng& rng, const FacedAlgebra& alg, unsigned min_len, unsigned max_len);

/// Random moment table on all words up to degree.
Functional random_functional(Rng& rng, AlgebraPtr alg, std::size_t d, unsigned degree,
                             bool complex = true);

/// Random faced homomorphism: each generator goes to a combination of one or
/// two words of length <= max_image_len over the target generators of the
/// same face (0 if the target face is empty).
FacedHomomorphism random_substitution(Rng& rng, const AlgebraPtr& source, const AlgebraPtr& target,
                                      unsigned max_image_len);

}  // namespace uniprod
