#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "uniprod/exponentials.hpp"
#include "uniprod/random.hpp"

using namespace uniprod;

namespace {

AlgebraPtr one_letter() { return FacedAlgebra::make(1, {{"x", 1, "x"}}); }

Functional semicircle_generator(unsigned degree) {
  Functional psi(one_letter(), 1, degree);
  psi.set(0, {0, 0}, Scalar(1));
  return psi;
}

Word power_of_x(unsigned n) { return Word(n, 0); }

}  // namespace

TEST_CASE("central limit moments match pair-partition counts") {
  CHECK(oracle::semicircle_moment(4) == Rational(2));
  CHECK(oracle::gaussian_moment(4) == Rational(3));
  CHECK(oracle::bernoulli_moment(4) == Rational(1));
  CHECK(oracle::arcsine_moment(4) == Rational(3, 2));
  CHECK(oracle::arcsine_moment(6) == Rational(5, 2));

  auto psi = semicircle_generator(6);
  auto D = DualSemigroup::primitive(psi.algebra());
  struct Case {
    const char* name;
    Rational (*moment)(int);
  };
  for (Case c : {Case{"free", &oracle::semicircle_moment}, Case{"tensor", &oracle::gaussian_moment},
                 Case{"boolean", &oracle::bernoulli_moment},
                 Case{"monotone", &oracle::arcsine_moment},
                 Case{"antimonotone", &oracle::arcsine_moment}}) {
    auto r = exp_dual(make_product(c.name), D, psi);
    for (unsigned n = 1; n <= 6; ++n) {
      CAPTURE(c.name);
      CAPTURE(n);
      Scalar expected = n % 2 ? Scalar(0) : Scalar(c.moment(static_cast<int>(n)));
      CHECK(r.table.value(0, power_of_x(n)) == expected);
    }
  }
}

TEST_CASE("exponential of a derivation on {vw}") {
  auto B = FacedAlgebra::make(1, {{"v", 1, ""}, {"w", 1, ""}});
  Functional psi(B, 1, 2);
  psi.set(0, {0}, Scalar(3));
  psi.set(0, {1}, Scalar(Rational(-1, 2)));
  psi.set(0, {0, 1}, Scalar(Rational(2, 7)));
  InducedBialgebra IB(DualSemigroup::primitive(B), make_product("free"), 1);
  SymWord vw = SymWord::single(0, {0, 1});
  CHECK(exp_on_lachs(IB, derivation(psi), vw) ==
        psi.value(0, {0, 1}) + psi.value(0, {0}) * psi.value(0, {1}));

  ExpEngine eng(IB, derivation(psi));
  auto poly = eng.exp_poly(vw);
  REQUIRE(poly.size() >= 3);
  CHECK(poly[0] == Scalar(0));
  CHECK(poly[1] == psi.value(0, {0, 1}));
  CHECK(poly[2] == psi.value(0, {0}) * psi.value(0, {1}));
  CHECK(eng.power(3, vw) == Scalar(0));
  CHECK(eng.power(0, SymWord()) == Scalar(1));
  CHECK(eng.exp(SymWord()) == Scalar(1));
}

TEST_CASE("the series terminates at the degree") {
  auto B = FacedAlgebra::make(1, {{"a", 1, ""}, {"b", 1, ""}});
  Rng rng(19);
  Functional psi = random_functional(rng, B, 1, 4);
  InducedBialgebra IB(DualSemigroup::primitive(B), make_product("boolean"), 1);
  ExpEngine eng(IB, derivation(psi));
  for (const auto& s : symwords_up_to(*B, 1, 3)) {
    CHECK(eng.power(static_cast<unsigned>(s.degree()) + 1, s) == Scalar(0));
  }
  CHECK(eng.max_power_used() >= 4);
}

TEST_CASE("time polynomials of the free semicircle") {
  auto psi = semicircle_generator(4);
  auto D = DualSemigroup::primitive(psi.algebra());
  auto U = make_product("free");
  auto p2 = exp_poly_in_t(U, D, psi, power_of_x(2));
  auto p4 = exp_poly_in_t(U, D, psi, power_of_x(4));
  CHECK(evaluate_at(p2[0], Scalar(Rational(1, 3))) == Scalar(Rational(1, 3)));
  CHECK(evaluate_at(p4[0], Scalar(3)) == Scalar(18));
  CHECK(format_time_polynomial(p4[0]) == "2 t^2");
  CHECK(format_time_polynomial(TimePolynomial{}) == "0");

  auto r = exp_dual(U, D, psi, 4, true);
  REQUIRE(r.time_polynomials.has_value());
  CHECK(r.time_polynomials->at(power_of_x(4))[0] == p4[0]);
}

TEST_CASE("derivative at zero recovers the generator") {
  auto B = FacedAlgebra::make(1, {{"a", 1, "b"}, {"b", 1, "a"}});
  auto D = DualSemigroup::primitive(B);
  Rng rng(23);
  for (const auto& name : builtin_product_names()) {
    std::size_t d = name == "cfree" ? 2 : 1;
    Functional psi = random_functional(rng, B, d, 3);
    auto r = exp_dual(make_product(name), D, psi, 3, true);
    for (const auto& [w, polys] : *r.time_polynomials) {
      for (std::size_t k = 0; k < d; ++k) {
        Scalar linear = polys[k].size() > 1 ? polys[k][1] : Scalar(0);
        CHECK(linear == psi.value(k, w));
      }
    }
  }
}

TEST_CASE("semigroup law for every built-in") {
  auto B = FacedAlgebra::make(1, {{"x", 1, "x"}, {"y", 1, "y"}});
  auto D = DualSemigroup::primitive(B);
  Rng rng(29);
  for (const auto& name : builtin_product_names()) {
    std::size_t d = name == "cfree" ? 2 : 1;
    Functional psi = random_functional(rng, B, d, 3);
    auto r = check_semigroup_law(make_product(name), D, psi, 3);
    CAPTURE(name);
    CHECK(r.pass);
    CHECK(r.points == 16);
  }
}

TEST_CASE("exponentials of hermitian generators are hermitian") {
  auto B = FacedAlgebra::make(1, {{"a", 1, "b"}, {"b", 1, "a"}});
  auto D = DualSemigroup::primitive(B);
  Rng rng(31);
  for (const auto& name : builtin_product_names()) {
    std::size_t d = name == "cfree" ? 2 : 1;
    Functional raw = random_functional(rng, B, d, 4);
    Functional psi(B, d, 4);
    for (const auto& w : words_up_to(*B, 4)) {
      for (std::size_t k = 0; k < d; ++k) {
        Scalar z = raw.value(k, w) + raw.value(k, star_word(*B, w)).conj();
        psi.set(k, w, z);
      }
    }
    REQUIRE_FALSE(hermitian_violation(psi).has_value());
    CAPTURE(name);
    CHECK_FALSE(hermitian_violation(exp_dual(make_product(name), D, psi).table).has_value());
  }
}

TEST_CASE("Trotter products") {
  auto psi = semicircle_generator(4);
  auto D = DualSemigroup::primitive(psi.algebra());

  auto tensor = make_product("tensor");
  for (unsigned n : {1u, 2u, 3u, 5u}) CHECK(trotter(tensor, D, psi, n, 4).max_deviation.is_zero());

  auto free = make_product("free");
  auto reference = exp_dual(free, D, psi).table;
  Rational previous(1000);
  for (unsigned n : {1u, 2u, 4u, 8u}) {
    auto run = trotter(free, D, psi, n, 4, reference);
    CHECK(run.deviation.at(power_of_x(1)).is_zero());
    CHECK(run.deviation.at(power_of_x(2)).is_zero());
    CHECK(run.deviation.at(power_of_x(4)) == Rational(1, static_cast<long>(n)));
    CHECK(run.max_deviation < previous);
    previous = run.max_deviation;
  }
  CHECK_THROWS_AS(trotter(free, D, psi, 0, 4), InputError);
}

TEST_CASE("domain errors") {
  auto psi = semicircle_generator(4);
  auto D = DualSemigroup::primitive(psi.algebra());
  CHECK_THROWS_AS(exp_dual(make_product("free"), D, psi, 5), TruncationError);

  auto B = psi.algebra();
  auto pair = free_product(B, B);
  DualSemigroup nonprim(B, {Polynomial::word(pair, {0}) + Polynomial::word(pair, {1}) +
                            Polynomial::word(pair, {0, 1})});
  CHECK_THROWS_AS(exp_dual(make_product("free"), nonprim, psi), InputError);

  InducedBialgebra IB(D, make_product("free"), 1);
  CHECK_THROWS_AS(ExpEngine(IB, character(psi)), InputError);
  CHECK(deviation({Scalar(1), Scalar(Rational(0), Rational(-3))}, {Scalar(0), Scalar(0)}) ==
        Rational(3));
}
