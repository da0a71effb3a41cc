#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "uniprod/dual_semigroup.hpp"

using namespace uniprod;

namespace {
AlgebraPtr one_letter() { return FacedAlgebra::make(1, {{"v", 1, "v"}}); }

DualSemigroup from_rule(const AlgebraPtr& B, const std::string& image) {
  auto pair = free_product(B, B);
  Polynomial p(pair);
  std::size_t start = 0;
  while (start < image.size()) {
    std::size_t plus = image.find('+', start);
    std::string term = image.substr(start, plus == std::string::npos ? std::string::npos : plus - start);
    p.add_term(parse_word(*pair, term), Scalar(1));
    if (plus == std::string::npos) break;
    start = plus + 1;
  }
  return DualSemigroup(B, {p});
}
}  // namespace

TEST_CASE("primitive comultiplication satisfies all laws") {
  auto B = FacedAlgebra::make(2, {{"a", 1, "b"}, {"b", 1, "a"}, {"c", 2, "c"}});
  auto D = DualSemigroup::primitive(B);
  CHECK(D.is_primitive());
  CHECK(D.is_degree_preserving());
  CHECK(check_counit(D).pass);
  CHECK(check_coassoc(D, 3).pass);
  CHECK(check_star_compatible(D).pass);
  auto lam = D.comultiply(Word{0, 2});
  CHECK(lam.terms().size() == 4);
}

TEST_CASE("v -> v@1 + v@2 + v@1 v@2 is a dual semigroup that is not star-compatible") {
  auto D = from_rule(one_letter(), "v@1+v@2+v@1 v@2");
  CHECK_FALSE(D.is_primitive());
  CHECK_FALSE(D.is_degree_preserving());
  CHECK(check_counit(D).pass);
  CHECK(check_coassoc(D, 3).pass);
  auto s = check_star_compatible(D);
  CHECK_FALSE(s.pass);
  CHECK(s.witness == "v");
}

TEST_CASE("broken rules are caught with the offending generator") {
  auto c = check_counit(from_rule(one_letter(), "v@1+v@2+v@1 v@1"));
  CHECK_FALSE(c.pass);
  CHECK(c.law == "counit");
  CHECK(c.witness == "v");

  auto a = check_coassoc(from_rule(one_letter(), "v@1+v@2+v@1 v@2 v@1"), 3);
  CHECK_FALSE(a.pass);
  CHECK(a.law == "coassociativity");
  CHECK(a.witness == "v");

  CHECK_THROWS_AS(DualSemigroup(one_letter(), {}), InputError);
}

TEST_CASE("iterated comultiplication does not depend on bracketing") {
  auto B = FacedAlgebra::make(1, {{"a", 1, ""}, {"b", 1, ""}});
  for (const auto& D : {DualSemigroup::primitive(B)}) {
    for (unsigned n = 1; n <= 4; ++n) {
      auto l = iterated_comultiplication(D, n);
      auto r = iterated_comultiplication_right(D, n);
      for (const auto& w : words_up_to(*B, 3)) CHECK(l.apply(w) == r.apply(w));
    }
  }
  auto one = one_letter();
  auto D = from_rule(one, "v@1+v@2+v@1 v@2");
  auto l = iterated_comultiplication(D, 3);
  auto r = iterated_comultiplication_right(D, 3);
  CHECK(l.apply(Word{0, 0}) == r.apply(Word{0, 0}));
  // v ↦ v1 + v2 + v3 + v1v2 + v1v3 + v2v3 + v1v2v3 for the three-fold split.
  CHECK(l.apply(Word{0}).terms().size() == 7);
  CHECK(iterate_comultiplication(DualSemigroup::primitive(B), 3, Polynomial::word(B, {0, 1}))
            .terms()
            .size() == 9);
}
