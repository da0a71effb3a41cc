#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "uniprod/faced_algebra.hpp"
#include "uniprod/functional.hpp"
#include "uniprod/random.hpp"

using namespace uniprod;

namespace {
AlgebraPtr ab_star() {
  return FacedAlgebra::make(1, {{"a", 1, "b"}, {"b", 1, "a"}, {"x", 1, "x"}});
}
}  // namespace

TEST_CASE("generator validation") {
  CHECK_THROWS_AS(FacedAlgebra::make(1, {{"a", 2, ""}}), InputError);
  CHECK_THROWS_AS(FacedAlgebra::make(1, {{"a", 1, ""}, {"a", 1, ""}}), InputError);
  CHECK_THROWS_AS(FacedAlgebra::make(1, {{"a", 1, "q"}}), InputError);
  CHECK_THROWS_AS(FacedAlgebra::make(2, {{"a", 1, "b"}, {"b", 2, "a"}}), InputError);
  CHECK_THROWS_AS(FacedAlgebra::make(1, {{"a", 1, "a"}, {"b", 1, ""}}), InputError);
  auto alg = ab_star();
  CHECK(alg->index_of("b") == 1);
  CHECK(alg->star_of(0) == 1);
  CHECK(alg->star_of(2) == 2);
  CHECK_THROWS_AS(alg->index_of("zz"), InputError);
}

TEST_CASE("free products are leg-major with tagged ids") {
  auto A = FacedAlgebra::make(2, {{"u", 1, ""}, {"v", 2, ""}});
  auto B = FacedAlgebra::make(2, {{"w", 2, ""}});
  auto P = free_product(A, B);
  REQUIRE(P->size() == 3);
  CHECK(P->generator(0).id == "u@1");
  CHECK(P->generator(2).id == "w@2");
  CHECK(P->face_of(2) == 2);
  CHECK(P->leg_of(2) == 2);
  CHECK(P->origin_of(2) == 0);
  CHECK(P->index_in_leg(2, 0) == 2);

  auto B3 = free_power(A, 3);
  auto B2 = free_power(A, 2);
  for (GenIndex g = 0; g < B2->size(); ++g) CHECK(B3->generator(g).id == B2->generator(g).id);
}

TEST_CASE("words parse, print and star") {
  auto alg = ab_star();
  Word w = parse_word(*alg, "a x b b");
  CHECK(w == Word{0, 2, 1, 1});
  CHECK(format_word(*alg, w) == "a x b b");
  CHECK(star_word(*alg, w) == Word{0, 0, 2, 1});
  CHECK(parse_word(*alg, "1").empty());
  CHECK_THROWS_AS(parse_word(*alg, "a q"), InputError);
  auto words = words_up_to(*alg, 3);
  CHECK(words.size() == 3 + 9 + 27);
  for (std::size_t i = 1; i < words.size(); ++i) CHECK(graded_less(words[i - 1], words[i]));
}

TEST_CASE("star is an antilinear antimultiplicative involution") {
  auto alg = ab_star();
  Rng rng(2);
  for (int t = 0; t < 50; ++t) {
    Polynomial p(alg), q(alg);
    for (int k = 0; k < 3; ++k) {
      p.add_term(random_word(rng, *alg, 1, 3), rng.scalar(true));
      q.add_term(random_word(rng, *alg, 1, 3), rng.scalar(true));
    }
    CHECK(star(star(p)) == p);
    CHECK(star(p * q) == star(q) * star(p));
    Scalar c = rng.scalar(true);
    CHECK(star(p.scaled(c)) == star(p).scaled(c.conj()));
  }
}

TEST_CASE("homomorphisms respect products and faces") {
  auto A = FacedAlgebra::make(2, {{"u", 1, ""}, {"v", 2, ""}});
  auto B = FacedAlgebra::make(2, {{"p", 1, ""}, {"q", 1, ""}, {"r", 2, ""}});
  FacedHomomorphism j(A, B);
  CHECK_THROWS_AS(j.set_image(0, Polynomial::word(B, {2})), InputError);
  j.set_image(0, Polynomial::word(B, {0}) + Polynomial::word(B, {0, 1}));
  j.set_image(1, Polynomial::word(B, {2}, Scalar(2)));
  Rng rng(9);
  for (int t = 0; t < 30; ++t) {
    Word a = random_word(rng, *A, 1, 3), b = random_word(rng, *A, 1, 3);
    Word ab = a;
    ab.insert(ab.end(), b.begin(), b.end());
    CHECK(j.apply(ab) == j.apply(a) * j.apply(b));
  }
  CHECK_THROWS(FacedHomomorphism(A, B).apply(Word{0}));
}

TEST_CASE("alternating blocks round-trip") {
  auto A = FacedAlgebra::make(1, {{"a1", 1, ""}, {"a2", 1, ""}});
  auto B = FacedAlgebra::make(1, {{"b1", 1, ""}, {"b2", 1, ""}});
  auto P = free_product(A, B);
  Word w = parse_word(*P, "a1@1 a2@1 b1@2 a1@1 b2@2 b2@2");
  auto blocks = alternating_blocks(*P, w);
  REQUIRE(blocks.size() == 4);
  CHECK(blocks[0] == Block{1, {0, 1}});
  CHECK(blocks[3] == Block{2, {1, 1}});
  CHECK(assemble_blocks(*P, blocks) == w);
}

TEST_CASE("copair and free_product_hom compose with embeddings") {
  auto A = FacedAlgebra::make(1, {{"a", 1, ""}});
  auto P = free_product(A, A);
  auto f = copair(P, {FacedHomomorphism::identity(A), FacedHomomorphism::identity(A)});
  CHECK(f.apply(embed_left(P).apply(Word{0})) == Polynomial::word(A, {0}));
  CHECK(f.apply(Word{0, 1}) == Polynomial::word(A, {0, 0}));
  auto z = copair(P, {FacedHomomorphism::identity(A), FacedHomomorphism::zero(A, A)});
  CHECK(z.apply(Word{0, 1}).is_zero());
}

TEST_CASE("unitization multiplies and stars") {
  auto alg = ab_star();
  Unitization U(alg);
  UnitalElement x(Scalar(2), Polynomial::word(alg, {0}));
  UnitalElement y(Scalar(Rational(0), Rational(1)), Polynomial::word(alg, {1}));
  auto xy = U.multiply(x, y);
  CHECK(xy.unit == Scalar(Rational(0), Rational(2)));
  CHECK(xy.body.coefficient({0, 1}) == Scalar(1));
  CHECK(xy.body.coefficient({1}) == Scalar(2));
  CHECK(xy.body.coefficient({0}) == Scalar::i());
  auto s = U.star(y);
  CHECK(s.unit == -Scalar::i());
  CHECK(s.body.coefficient({0}) == Scalar(1));
}

TEST_CASE("functionals enforce truncation") {
  auto alg = ab_star();
  Functional phi(alg, 2, 2);
  phi.set(1, {0, 1}, Scalar(3));
  CHECK(phi.value(1, {0, 1}) == Scalar(3));
  CHECK(phi.value(0, {0, 1}) == Scalar(0));
  CHECK(phi.unital_value(0, {}) == Scalar(1));
  CHECK_THROWS_AS(phi.value(0, {0, 1, 1}), TruncationError);
  CHECK_THROWS_AS(phi.set(2, {0}, Scalar(1)), Error);
  CHECK(phi.truncated(1).entries().empty());

  Functional h(alg, 1, 2);
  h.set(0, {0}, Scalar(1));
  h.set(0, {1}, Scalar(1));
  CHECK_FALSE(hermitian_violation(h).has_value());
  h.set(0, {0, 1}, Scalar::i());
  auto v = hermitian_violation(h);
  REQUIRE(v.has_value());
  CHECK(v->word == Word{0, 1});
}

TEST_CASE("pullback composes moments with a homomorphism") {
  auto A = FacedAlgebra::make(1, {{"a", 1, ""}});
  auto B = FacedAlgebra::make(1, {{"p", 1, ""}, {"q", 1, ""}});
  FacedHomomorphism j(A, B);
  j.set_image(0, Polynomial::word(B, {0}) + Polynomial::word(B, {1}));
  Rng rng(4);
  Functional phi = random_functional(rng, B, 1, 4);
  Functional pb = phi.pullback(j, 2);
  CHECK(pb.value(0, {0, 0}) == phi.value(0, {0, 0}) + phi.value(0, {0, 1}) +
                                   phi.value(0, {1, 0}) + phi.value(0, {1, 1}));
}
