#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "uniprod/random.hpp"
#include "uniprod/universal_products.hpp"

using namespace uniprod;

namespace {

struct Setup {
  AlgebraPtr A, B, P;
};

Setup two_legs(unsigned gens = 2) {
  std::vector<Generator> a, b;
  for (unsigned g = 0; g < gens; ++g) {
    a.push_back({"a" + std::to_string(g + 1), 1, ""});
    b.push_back({"b" + std::to_string(g + 1), 1, ""});
  }
  auto A = FacedAlgebra::make(1, a);
  auto B = FacedAlgebra::make(1, b);
  return {A, B, free_product(A, B)};
}

std::vector<oracle::Letter> letters(const FacedAlgebra& P, const Word& w) {
  std::vector<oracle::Letter> out;
  for (GenIndex g : w) out.push_back({P.leg_of(g), P.origin_of(g)});
  return out;
}

oracle::Moment moment_of(const Functional& phi, std::size_t k = 0) {
  return [&phi, k](const std::vector<unsigned>& w) { return phi.value(k, Word(w.begin(), w.end())); };
}

/// Flips the sign of the all-singletons term on words with four blocks.
class CorruptedFree final : public UniversalProduct {
 public:
  std::string name() const override { return "corrupted-free"; }
  bool applicable(unsigned, std::size_t d) const override { return d == 1; }
  std::vector<SymbolicPolynomial> evaluate(const MixedWord& w, std::size_t d) const override {
    auto out = inner_->evaluate(w, d);
    unsigned blocks = 0;
    for (std::size_t i = 0; i < w.size(); ++i) blocks += i == 0 || w[i].leg != w[i - 1].leg;
    if (blocks != 4 || w.size() != 4) return out;
    SymbolicPolynomial fixed;
    for (const auto& [m, c] : out[0].terms()) {
      fixed.add_term(m, m.size() == 4 ? -c : c);
    }
    return {fixed};
  }

 private:
  ProductPtr inner_ = make_product("free");
};

}  // namespace

TEST_CASE("free product on a1 b1 a2 b2 matches the three-term formula") {
  auto [A, B, P] = two_legs();
  auto U = make_product("free");
  Word w = parse_word(*P, "a1@1 b1@2 a2@1 b2@2");
  Rng rng(17);
  for (int t = 0; t < 20; ++t) {
    Functional f1 = random_functional(rng, A, 1, 2, false);
    Functional f2 = random_functional(rng, B, 1, 2, false);
    auto f = [&](const char* s) { return f1.value(0, parse_word(*A, s)); };
    auto g = [&](const char* s) { return f2.value(0, parse_word(*B, s)); };
    Scalar expected = f("a1 a2") * g("b1") * g("b2") + f("a1") * f("a2") * g("b1 b2") -
                      f("a1") * f("a2") * g("b1") * g("b2");
    CHECK(eval_product(*U, f1, f2, *P, w)[0] == expected);
  }
}

TEST_CASE("free and boolean products agree with the cumulant expansions") {
  auto [A, B, P] = two_legs();
  Rng rng(23);
  struct Case {
    const char* name;
    bool (*admissible)(const oracle::Partition&);
  };
  for (Case c : {Case{"free", &oracle::noncrossing}, Case{"boolean", &oracle::interval}}) {
    auto U = make_product(c.name);
    for (int t = 0; t < 4; ++t) {
      Functional f1 = random_functional(rng, A, 1, 6);
      Functional f2 = random_functional(rng, B, 1, 6);
      oracle::Cumulants k1(moment_of(f1), c.admissible), k2(moment_of(f2), c.admissible);
      for (int s = 0; s < 25; ++s) {
        Word w = random_word(rng, *P, 1, 6);
        CAPTURE(c.name);
        CAPTURE(format_word(*P, w));
        CHECK(eval_product(*U, f1, f2, *P, w)[0] ==
              oracle::mixed_moment(letters(*P, w), k1, k2, c.admissible));
      }
    }
  }
}

TEST_CASE("tensor, monotone and antimonotone closed forms") {
  auto [A, B, P] = two_legs();
  Rng rng(29);
  auto tensor = make_product("tensor");
  auto mono = make_product("monotone");
  auto anti = make_product("antimonotone");
  for (int t = 0; t < 60; ++t) {
    Functional f1 = random_functional(rng, A, 2, 5);
    Functional f2 = random_functional(rng, B, 2, 5);
    Word w = random_word(rng, *P, 1, 5);
    Word left, right;
    for (GenIndex g : w) (P->leg_of(g) == 1 ? left : right).push_back(P->origin_of(g));
    auto blocks = alternating_blocks(*P, w);
    for (std::size_t k = 0; k < 2; ++k) {
      CHECK(eval_product(*tensor, f1, f2, *P, w)[k] ==
            f1.unital_value(k, left) * f2.unital_value(k, right));
      Scalar m = f1.unital_value(k, left), a = f2.unital_value(k, right);
      for (const auto& b : blocks) {
        if (b.leg == 2) m *= f2.value(k, b.letters);
        if (b.leg == 1) a *= f1.value(k, b.letters);
      }
      CHECK(eval_product(*mono, f1, f2, *P, w)[k] == m);
      CHECK(eval_product(*anti, f1, f2, *P, w)[k] == a);
    }
  }
}

TEST_CASE("c-free reduces to free when both components coincide") {
  auto [A, B, P] = two_legs();
  Rng rng(31);
  auto cfree = make_product("cfree");
  auto free = make_product("free");
  for (int t = 0; t < 10; ++t) {
    Functional g1 = random_functional(rng, A, 1, 5);
    Functional g2 = random_functional(rng, B, 1, 5);
    Functional f1(A, 2, 5), f2(B, 2, 5);
    for (const auto& [w, v] : g1.entries()) {
      f1.set(0, w, v[0]);
      f1.set(1, w, v[0]);
    }
    for (const auto& [w, v] : g2.entries()) {
      f2.set(0, w, v[0]);
      f2.set(1, w, v[0]);
    }
    Word w = random_word(rng, *P, 1, 5);
    auto got = eval_product(*cfree, f1, f2, *P, w);
    auto ref = eval_product(*free, g1, g2, *P, w);
    CHECK(got[0] == ref[0]);
    CHECK(got[1] == ref[0]);
  }
  CHECK_THROWS_AS(require_applicable(*cfree, 1, 1), InputError);
  CHECK_NOTHROW(require_applicable(*cfree, 1, 2));
}

TEST_CASE("symbolic and concrete evaluation agree") {
  auto [A, B, P] = two_legs();
  Rng rng(37);
  for (const auto& name : builtin_product_names()) {
    auto U = make_product(name);
    std::size_t d = name == "cfree" ? 2 : 1;
    Functional f1 = random_functional(rng, A, d, 5);
    Functional f2 = random_functional(rng, B, d, 5);
    for (int s = 0; s < 20; ++s) {
      Word w = random_word(rng, *P, 1, 5);
      auto polys = eval_product_symbolic(*U, *P, w, d);
      auto direct = eval_product(*U, f1, f2, *P, w);
      for (std::size_t k = 0; k < d; ++k) {
        Scalar v = substitute(polys[k], [&](const MomentSymbol& m) {
          return m.factor == 1 ? f1.value(m.component, m.word) : f2.value(m.component, m.word);
        });
        CHECK(v == direct[k]);
      }
    }
  }
}

TEST_CASE("all built-ins pass the axiom battery") {
  for (const auto& name : builtin_product_names()) {
    AxiomOptions opt;
    opt.trials = 8;
    opt.max_len = 4;
    opt.d = name == "cfree" ? 2 : 1;
    auto r = check_axioms(*make_product(name), opt);
    CAPTURE(name);
    CHECK(r.pass());
    CHECK(r.checks > 0);
  }
}

TEST_CASE("a corrupted free product is caught by the axiom battery") {
  CorruptedFree bad;
  AxiomOptions opt;
  opt.trials = 10;
  opt.max_len = 4;
  auto r = check_axioms(bad, opt);
  REQUIRE_FALSE(r.pass());
  CHECK(r.failures.front().law == "associativity");
  CHECK_FALSE(r.failures.front().witness.empty());
}

TEST_CASE("convolution powers agree for both evaluation routes") {
  auto B = FacedAlgebra::make(1, {{"x", 1, "x"}, {"y", 1, "y"}});
  auto D = DualSemigroup::primitive(B);
  Rng rng(41);
  for (const auto& name : builtin_product_names()) {
    auto U = make_product(name);
    std::size_t d = name == "cfree" ? 2 : 1;
    Functional phi = random_functional(rng, B, d, 3);
    for (unsigned n = 1; n <= 3; ++n) {
      CAPTURE(name);
      CAPTURE(n);
      CHECK(convolution_power(*U, D, phi, n, 3) == convolution_power_iterated(*U, D, phi, n, 3));
    }
  }
}

TEST_CASE("convolution with primitive comultiplication on short words") {
  auto B = FacedAlgebra::make(1, {{"x", 1, "x"}});
  auto D = DualSemigroup::primitive(B);
  Functional f(B, 1, 2), g(B, 1, 2);
  f.set(0, {0}, Scalar(2));
  f.set(0, {0, 0}, Scalar(5));
  g.set(0, {0}, Scalar(3));
  g.set(0, {0, 0}, Scalar(7));
  // Λ(xx) = x1x1 + x1x2 + x2x1 + x2x2; every built-in with d = 1 gives
  // f(xx) + 2 f(x) g(x) + g(xx) on it.
  for (const char* name : {"tensor", "free", "boolean", "monotone", "antimonotone"}) {
    auto h = convolve(*make_product(name), D, f, g);
    CHECK(h.value(0, {0}) == Scalar(5));
    CHECK(h.value(0, {0, 0}) == Scalar(5 + 12 + 7));
  }
  CHECK_THROWS_AS(make_product("nope"), InputError);
}
