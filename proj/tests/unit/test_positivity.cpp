#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>

#include "oracles.hpp"
#include "uniprod/positivity.hpp"
#include "uniprod/random.hpp"

using namespace uniprod;

namespace {

Matrix random_hermitian(Rng& rng, std::size_t n) {
  Matrix m(n, std::vector<Scalar>(n));
  for (std::size_t i = 0; i < n; ++i) {
    m[i][i] = Scalar(rng.rational(4, 3));
    for (std::size_t j = i + 1; j < n; ++j) {
      m[i][j] = rng.scalar(true, 4, 3);
      m[j][i] = m[i][j].conj();
    }
  }
  return m;
}

/// B* B for a random rank-limited B, hence PSD and usually singular.
Matrix random_psd(Rng& rng, std::size_t n, std::size_t rank) {
  Matrix b(rank, std::vector<Scalar>(n));
  for (auto& row : b) {
    for (auto& x : row) x = rng.scalar(true, 3, 2);
  }
  Matrix m(n, std::vector<Scalar>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t r = 0; r < rank; ++r) m[i][j] += b[r][i].conj() * b[r][j];
    }
  }
  return m;
}

double min_eigenvalue(const Matrix& m) {
  const auto n = static_cast<Eigen::Index>(m.size());
  Eigen::MatrixXcd e(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      e(i, j) = {m[i][j].re().to_double(), m[i][j].im().to_double()};
    }
  }
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(e, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
}

AlgebraPtr one_letter() { return FacedAlgebra::make(1, {{"x", 1, "x"}}); }

}  // namespace

TEST_CASE("small PSD decisions") {
  Matrix a{{Scalar(1), Scalar(1)}, {Scalar(1), Scalar(0)}};
  auto va = psd_exact(a);
  CHECK_FALSE(va.psd);
  REQUIRE(va.witness.has_value());
  CHECK(*va.witness == std::vector<Scalar>{Scalar(1), Scalar(-1)});
  CHECK(va.witness_value == Rational(-1));

  Matrix b{{Scalar(2), Scalar::i()}, {-Scalar::i(), Scalar(2)}};
  auto vb = psd_exact(b);
  CHECK(vb.psd);
  REQUIRE(vb.pivots.size() == 2);
  CHECK(vb.pivots[0].second == Rational(2));
  CHECK(vb.pivots[1].second == Rational(3, 2));

  Matrix z{{Scalar(0), Scalar(0)}, {Scalar(0), Scalar(0)}};
  CHECK(psd_exact(z).psd);
  Matrix off{{Scalar(0), Scalar(2)}, {Scalar(2), Scalar(5)}};
  auto voff = psd_exact(off);
  CHECK_FALSE(voff.psd);
  CHECK(quadratic_form(off, *voff.witness).re().sign() < 0);
  Matrix neg{{Scalar(3), Scalar(0)}, {Scalar(0), Scalar(-1)}};
  CHECK(*psd_exact(neg).witness == std::vector<Scalar>{Scalar(0), Scalar(1)});

  Matrix bad{{Scalar(1), Scalar(2)}, {Scalar(3), Scalar(1)}};
  CHECK_THROWS_AS(psd_exact(bad), InputError);
  CHECK(psd_exact(Matrix{}).psd);
}

TEST_CASE("exact verdicts agree with float eigenvalues and random probing") {
  Rng rng(101);
  for (int t = 0; t < 120; ++t) {
    std::size_t n = 1 + rng.below(8);
    Matrix m = t % 2 ? random_hermitian(rng, n) : random_psd(rng, n, 1 + rng.below(n));
    auto v = psd_exact(m);
    double lo = min_eigenvalue(m);
    CAPTURE(t);
    CHECK(v.psd == (lo >= -1e-9));
    if (!v.psd) {
      CHECK(oracle::form(m, *v.witness).re().sign() < 0);
      CHECK(oracle::form(m, *v.witness).is_real());
    } else if (t < 20) {
      for (int s = 0; s < 500; ++s) {
        std::vector<Scalar> x(n);
        for (auto& e : x) e = rng.scalar(true, 5, 4);
        CHECK(quadratic_form(m, x).re().sign() >= 0);
      }
    }
  }
}

TEST_CASE("Gram matrices use graded-lex bases") {
  Functional phi(one_letter(), 1, 4);
  phi.set(0, {0}, Scalar(1));
  auto g = gram(phi, 0, 1, true);
  REQUIRE(g.basis.size() == 2);
  CHECK(g.basis[0].empty());
  CHECK(g.entries == Matrix{{Scalar(1), Scalar(1)}, {Scalar(1), Scalar(0)}});
  CHECK(gram(phi, 0, 2, false).basis.size() == 2);
  CHECK_THROWS_AS(gram(phi, 0, 3, true), TruncationError);
}

TEST_CASE("restricted states and generating functionals") {
  Functional bern(one_letter(), 1, 2);
  bern.set(0, {0}, Scalar(1));
  auto v = is_restricted_state(bern, 1);
  CHECK_FALSE(v.pass);
  CHECK(v.failed_component == 0u);
  CHECK(*v.components[0].witness == std::vector<Scalar>{Scalar(1), Scalar(-1)});

  Functional semi(one_letter(), 1, 4);
  semi.set(0, {0, 0}, Scalar(1));
  CHECK(is_restricted_generating_functional(semi, 2).pass);
  CHECK_FALSE(is_restricted_state(semi, 2).pass);

  auto B = FacedAlgebra::make(1, {{"a", 1, "b"}, {"b", 1, "a"}});
  Functional h(B, 1, 2);
  h.set(0, {0, 1}, Scalar::i());
  auto hv = is_restricted_generating_functional(h, 1);
  CHECK_FALSE(hv.pass);
  REQUIRE(hv.hermitian.has_value());
  CHECK(hv.components.empty());
}

TEST_CASE("sampled generating functionals are positive and hermitian") {
  auto B = FacedAlgebra::make(1, {{"a", 1, "b"}, {"b", 1, "a"}, {"x", 1, "x"}});
  for (std::uint64_t seed = 1; seed <= 12; ++seed) {
    SampleOptions opt;
    opt.rep_dim = 1 + static_cast<unsigned>(seed % 3);
    opt.components = seed % 2 ? 1 : 2;
    opt.drift = seed % 4 == 0;
    auto psi = sample_generating_functional(seed, B, 4, opt);
    CHECK(psi.components() == opt.components);
    CHECK(is_restricted_generating_functional(psi, 2).pass);
    CHECK(psi == sample_generating_functional(seed, B, 4, opt));
    auto phi = sample_restricted_state(seed, B, 4, opt);
    CHECK(is_restricted_state(phi, 2).pass);
  }
}

TEST_CASE("convolution powers of sampled states stay states") {
  auto B = FacedAlgebra::make(1, {{"a", 1, "b"}, {"b", 1, "a"}});
  auto D = DualSemigroup::primitive(B);
  for (const auto& name : builtin_product_names()) {
    SampleOptions opt;
    opt.components = name == "cfree" ? 2 : 1;
    auto phi = sample_restricted_state(7, B, 4, opt);
    for (unsigned n = 1; n <= 4; ++n) {
      CAPTURE(name);
      CAPTURE(n);
      CHECK(is_restricted_state(convolution_power(*make_product(name), D, phi, n, 4), 2).pass);
    }
  }
}

TEST_CASE("Schoenberg harness") {
  Functional semi(one_letter(), 1, 4);
  semi.set(0, {0, 0}, Scalar(1));
  auto D = DualSemigroup::primitive(one_letter());
  std::vector<Rational> times{Rational(1, 10), Rational(1), Rational(10)};
  auto r = schoenberg_suite(make_product("free"), D, semi, times, 4);
  CHECK(r.pass);
  CHECK(r.derivative_ok);
  CHECK(r.points.size() == 3);

  Functional ones(one_letter(), 1, 4);
  for (unsigned n = 1; n <= 4; ++n) ones.set(0, Word(n, 0), Scalar(1));
  CHECK(is_restricted_generating_functional(ones, 2).pass);

  auto B = FacedAlgebra::make(1, {{"a", 1, "b"}, {"b", 1, "a"}});
  Functional bad(B, 1, 4);
  bad.set(0, {0}, Scalar(1));
  auto rb = schoenberg_suite(make_product("free"), DualSemigroup::primitive(B), bad, times, 4);
  CHECK_FALSE(rb.pass);
  CHECK(rb.precondition.hermitian.has_value());
  CHECK(rb.points.empty());
}
