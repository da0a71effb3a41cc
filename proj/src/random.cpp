#include "uniprod/random.hpp"

#include <limits>

namespace uniprod {

std::uint64_t Rng::below(std::uint64_t n) {
  if (n == 0) throw Error("Rng::below(0)");
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x;
  do {
    x = next();
  } while (x >= limit);
  return x % n;
}

Rational Rng::rational(long max_num, long max_den) {
  long num = range(-max_num, max_num);
  long den = range(1, max_den);
  return Rational(num, den);
}

Scalar Rng::scalar(bool complex, long max_num, long max_den) {
  Rational re = rational(max_num, max_den);
  if (!complex || coin()) return Scalar(re);
  return Scalar(re, rational(max_num, max_den));
}

Word random_word(Rng& rng, const FacedAlgebra& alg, unsigned min_len, unsigned max_len) {
  auto len = static_cast<unsigned>(rng.range(min_len, max_len));
  Word w(len);
  for (auto& g : w) g = static_cast<GenIndex>(rng.below(alg.size()));
  return w;
}

Functional random_functional(Rng& rng, AlgebraPtr alg, std::size_t d, unsigned degree,
                             bool complex) {
  Functional phi(alg, d, degree);
  for (const auto& w : words_up_to(*alg, degree)) {
    for (std::size_t k = 0; k < d; ++k) phi.set(k, w, rng.scalar(complex));
  }
  return phi;
}

FacedHomomorphism random_substitution(Rng& rng, const AlgebraPtr& source, const AlgebraPtr& target,
                                      unsigned max_image_len) {
  FacedHomomorphism j(source, target);
  for (GenIndex g = 0; g < source->size(); ++g) {
    unsigned face = source->face_of(g);
    std::vector<GenIndex> same_face;
    for (GenIndex h = 0; h < target->size(); ++h) {
      if (target->face_of(h) == face) same_face.push_back(h);
    }
    Polynomial image(target);
    if (!same_face.empty()) {
      long terms = rng.range(1, 2);
      for (long t = 0; t < terms; ++t) {
        auto len = static_cast<std::size_t>(rng.range(1, max_image_len));
        Word w(len);
        for (auto& letter : w) letter = same_face[rng.below(same_face.size())];
        Scalar c = rng.scalar(true, 2, 2);
        if (c.is_zero()) c = Scalar(1);
        image.add_term(std::move(w), c);
      }
    }
    j.set_image(g, std::move(image));
  }
  return j;
}

}  // namespace uniprod
