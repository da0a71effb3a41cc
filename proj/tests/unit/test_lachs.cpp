#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "uniprod/lachs.hpp"
#include "uniprod/random.hpp"

using namespace uniprod;

namespace {

AlgebraPtr letters(const std::string& prefix, unsigned n, bool starred = false) {
  std::vector<Generator> g;
  for (unsigned i = 0; i < n; ++i) {
    std::string id = prefix + std::to_string(i + 1);
    g.push_back({id, 1, starred ? id : ""});
  }
  return FacedAlgebra::make(1, g);
}

std::size_t components_for(const std::string& name) { return name == "cfree" ? 2 : 1; }

SymWord random_symword(Rng& rng, const FacedAlgebra& alg, std::size_t d, unsigned atoms,
                       unsigned max_len) {
  std::vector<SymAtom> a;
  for (unsigned i = 0; i < atoms; ++i) a.emplace_back(rng.below(d), random_word(rng, alg, 1, max_len));
  return SymWord(a);
}

}  // namespace

TEST_CASE("SymWords are sorted multisets") {
  SymWord a({{0, {1}}, {0, {0, 1}}});
  SymWord b({{0, {0, 1}}, {0, {1}}});
  CHECK(a == b);
  CHECK((a * SymWord::single(0, {1})).size() == 3);
  CHECK((a * SymWord()).degree() == 3);
  CHECK_THROWS(SymWord(std::vector<SymAtom>{SymAtom{0, Word{}}}));
  auto alg = letters("g", 2);
  auto all = symwords_up_to(*alg, 1, 2);
  // unit; g1, g2; g1g1, g1g2, g2g1, g2g2; {g1,g1}, {g1,g2}, {g2,g2}
  CHECK(all.size() == 10);
  CHECK(all.front().empty());
}

TEST_CASE("σ of the free product on {a1 b1 a2 b2}") {
  auto A = letters("a", 2), B = letters("b", 2);
  auto P = free_product(A, B);
  auto s = SymWord::single(0, parse_word(*P, "a1@1 b1@2 a2@1 b2@2"));
  TensorElement expected;
  add_to(expected, SymWord::single(0, {0, 1}), SymWord({{0, {0}}, {0, {1}}}), Scalar(1));
  add_to(expected, SymWord({{0, {0}}, {0, {1}}}), SymWord::single(0, {0, 1}), Scalar(1));
  add_to(expected, SymWord({{0, {0}}, {0, {1}}}), SymWord({{0, {0}}, {0, {1}}}), Scalar(-1));
  CHECK(extract_sigma(*make_product("free"), *P, 1, s) == expected);
}

TEST_CASE("characters turn σ into the product evaluation") {
  auto A = letters("a", 2), B = letters("b", 2);
  auto P = free_product(A, B);
  Rng rng(3);
  for (const auto& name : builtin_product_names()) {
    auto U = make_product(name);
    std::size_t d = components_for(name);
    Functional f1 = random_functional(rng, A, d, 4), f2 = random_functional(rng, B, d, 4);
    for (int t = 0; t < 15; ++t) {
      SymWord s = random_symword(rng, *P, d, 1 + rng.below(2), 3);
      Scalar expected(1);
      for (const auto& [k, w] : s.atoms()) expected *= eval_product(*U, f1, f2, *P, w)[k];
      CAPTURE(name);
      CHECK(apply_tensor(character(f1), character(f2), extract_sigma(*U, *P, d, s)) == expected);
    }
  }
}

TEST_CASE("σ is natural in both factors") {
  auto A = letters("a", 2), B = letters("b", 1);
  auto A2 = letters("p", 2), B2 = letters("q", 2);
  auto P = free_product(A, B), P2 = free_product(A2, B2);
  Rng rng(5);
  for (const auto& name : builtin_product_names()) {
    auto U = make_product(name);
    std::size_t d = components_for(name);
    for (int t = 0; t < 6; ++t) {
      auto j1 = random_substitution(rng, A, A2, 2);
      auto j2 = random_substitution(rng, B, B2, 2);
      auto j = free_product_hom(P, P2, {j1, j2});
      SymWord s = random_symword(rng, *P, d, 1 + rng.below(2), 3);
      TensorElement lhs;
      for (const auto& [u, c] : lachs_map(j, s)) {
        for (const auto& [lr, v] : extract_sigma(*U, *P2, d, u)) add_to(lhs, lr.first, lr.second, c * v);
      }
      CAPTURE(name);
      CHECK(lhs == lachs_map(j1, j2, extract_sigma(*U, *P, d, s)));
    }
  }
}

TEST_CASE("σ̂ equals σ of the tensor product") {
  auto A = letters("a", 2), B = letters("b", 2);
  auto P = free_product(A, B);
  auto tensor = make_product("tensor");
  Rng rng(7);
  for (int t = 0; t < 40; ++t) {
    SymWord s = random_symword(rng, *P, 1, 1 + rng.below(3), 4);
    CHECK(sigma_hat(*P, s) == extract_sigma(*tensor, *P, 1, s));
  }
}

TEST_CASE("induced comultiplication of the free product on {vw}") {
  auto B = FacedAlgebra::make(1, {{"v", 1, "v"}, {"w", 1, "w"}});
  InducedBialgebra IB(DualSemigroup::primitive(B), make_product("free"), 1);
  SymWord vw = SymWord::single(0, {0, 1});
  TensorElement expected;
  add_to(expected, vw, SymWord(), Scalar(1));
  add_to(expected, SymWord(), vw, Scalar(1));
  add_to(expected, SymWord::single(0, {0}), SymWord::single(0, {1}), Scalar(1));
  add_to(expected, SymWord::single(0, {1}), SymWord::single(0, {0}), Scalar(1));
  CHECK(induced_delta(IB, vw) == expected);

  Functional psi(B, 1, 2);
  psi.set(0, {0}, Scalar(2));
  psi.set(0, {1}, Scalar(Rational(1, 3)));
  psi.set(0, {0, 1}, Scalar(5));
  auto dd = coalg_convolve(IB, derivation(psi), derivation(psi));
  CHECK(dd(vw) == Scalar(2) * psi.value(0, {0}) * psi.value(0, {1}));
  CHECK(coalg_convolve(IB, derivation(psi), counit)(vw) == Scalar(5));
}

TEST_CASE("Δ laws and σ multiplicativity for every built-in") {
  auto B = FacedAlgebra::make(1, {{"a", 1, "b"}, {"b", 1, "a"}});
  for (const auto& name : builtin_product_names()) {
    InducedBialgebra IB(DualSemigroup::primitive(B), make_product(name), components_for(name));
    CAPTURE(name);
    CHECK(check_delta_counit(IB, 3).pass);
    CHECK(check_delta_coassoc(IB, 3).pass);
    CHECK(check_delta_degree(IB, 3).pass);
    CHECK(check_sigma_multiplicative(IB, 3).pass);
    CHECK(check_sigma_star(IB, 3).pass);
  }
}

TEST_CASE("intertwining holds and a dropped σ term is detected") {
  auto B = FacedAlgebra::make(1, {{"x", 1, "x"}, {"y", 1, "y"}});
  Rng rng(13);
  for (const auto& name : builtin_product_names()) {
    std::size_t d = components_for(name);
    InducedBialgebra IB(DualSemigroup::primitive(B), make_product(name), d);
    Functional f1 = random_functional(rng, B, d, 3), f2 = random_functional(rng, B, d, 3);
    auto r = check_intertwine(IB, f1, f2, 3);
    CAPTURE(name);
    CHECK(r.pass);
    CHECK(r.checked > 0);
  }

  InducedBialgebra IB(DualSemigroup::primitive(B), make_product("free"), 1);
  auto pair = IB.dual_semigroup().pair_algebra();
  auto U = IB.product();
  IB.override_sigma([pair, U](const SymWord& s) {
    TensorElement t = extract_sigma(*U, *pair, 1, s);
    if (s.degree() == 4 && t.size() > 1) t.erase(std::prev(t.end()));
    return t;
  });
  Functional f1 = random_functional(rng, B, 1, 4), f2 = random_functional(rng, B, 1, 4);
  auto r = check_intertwine(IB, f1, f2, 4);
  CHECK_FALSE(r.pass);
  REQUIRE(r.witness.has_value());
  CHECK(r.witness->degree() == 4);
  CHECK(r.lhs != r.rhs);
}

TEST_CASE("a non-primitive dual semigroup still induces a bialgebra") {
  auto B = FacedAlgebra::make(1, {{"v", 1, ""}});
  auto pair = free_product(B, B);
  Polynomial rule = Polynomial::word(pair, {0}) + Polynomial::word(pair, {1}) +
                    Polynomial::word(pair, {0, 1});
  InducedBialgebra IB(DualSemigroup(B, {rule}), make_product("boolean"), 1);
  CHECK(check_delta_counit(IB, 3).pass);
  CHECK(check_delta_coassoc(IB, 3).pass);
  CHECK_THROWS_AS(check_delta_degree(IB, 3), InputError);
}
