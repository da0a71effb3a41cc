#include "uniprod/positivity.hpp"

#include "uniprod/parallel.hpp"
#include "uniprod/random.hpp"

namespace uniprod {

GramMatrix gram(const Functional& phi, std::size_t k, unsigned half_degree, bool include_unit) {
  const auto& alg = *phi.algebra();
  if (!alg.has_involution()) throw InputError("Gram matrices need star data on the generators");
  if (2 * half_degree > phi.degree()) {
    throw TruncationError("Gram matrix at half-degree " + std::to_string(half_degree) +
                              " needs moments to degree " + std::to_string(2 * half_degree),
                          "");
  }
  GramMatrix g;
  g.component = k;
  g.half_degree = half_degree;
  g.include_unit = include_unit;
  if (include_unit) g.basis.emplace_back();
  for (auto& w : words_up_to(alg, half_degree)) g.basis.push_back(std::move(w));
  const std::size_t n = g.basis.size();
  g.entries.assign(n, std::vector<Scalar>(n));
  for (std::size_t i = 0; i < n; ++i) {
    Word left = star_word(alg, g.basis[i]);
    for (std::size_t j = 0; j < n; ++j) {
      Word w = left;
      w.insert(w.end(), g.basis[j].begin(), g.basis[j].end());
      g.entries[i][j] = phi.unital_value(k, w);
    }
  }
  return g;
}

bool is_hermitian(const Matrix& m) {
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m[i].size() != m.size()) return false;
    for (std::size_t j = 0; j <= i; ++j) {
      if (m[i][j] != m[j][i].conj()) return false;
    }
  }
  return true;
}

Scalar quadratic_form(const Matrix& g, const std::vector<Scalar>& x) {
  Scalar acc;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (x[i].is_zero()) continue;
    Scalar row;
    for (std::size_t j = 0; j < g.size(); ++j) row += g[i][j] * x[j];
    acc += x[i].conj() * row;
  }
  return acc;
}

namespace {

/// Solves A z = b for an invertible A by Gaussian elimination.
std::vector<Scalar> solve(Matrix a, std::vector<Scalar> b) {
  const std::size_t n = a.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t p = col;
    while (p < n && a[p][col].is_zero()) ++p;
    if (p == n) throw Error("singular pivot block in LDL* witness lift");
    std::swap(a[p], a[col]);
    std::swap(b[p], b[col]);
    for (std::size_t r = col + 1; r < n; ++r) {
      if (a[r][col].is_zero()) continue;
      Scalar f = a[r][col] / a[col][col];
      for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  std::vector<Scalar> z(n);
  for (std::size_t r = n; r-- > 0;) {
    Scalar acc = b[r];
    for (std::size_t c = r + 1; c < n; ++c) acc -= a[r][c] * z[c];
    z[r] = acc / a[r][r];
  }
  return z;
}

/// Extends y (supported off the eliminated set) by x_P = -G_PP^{-1} G_PR y,
/// so that x*Gx equals y*Sy for the Schur complement S.
std::vector<Scalar> lift(const Matrix& g, const std::vector<std::size_t>& eliminated,
                         std::vector<Scalar> x) {
  const std::size_t p = eliminated.size();
  if (p == 0) return x;
  Matrix a(p, std::vector<Scalar>(p));
  std::vector<Scalar> b(p);
  for (std::size_t r = 0; r < p; ++r) {
    for (std::size_t c = 0; c < p; ++c) a[r][c] = g[eliminated[r]][eliminated[c]];
    for (std::size_t j = 0; j < g.size(); ++j) {
      if (!x[j].is_zero()) b[r] += g[eliminated[r]][j] * x[j];
    }
  }
  auto z = solve(std::move(a), std::move(b));
  for (std::size_t r = 0; r < p; ++r) x[eliminated[r]] = -z[r];
  return x;
}

}  // namespace

PsdVerdict psd_exact(const Matrix& g) {
  if (!is_hermitian(g)) throw InputError("psd_exact needs a Hermitian matrix");
  const std::size_t n = g.size();
  Matrix s = g;
  std::vector<bool> active(n, true);
  std::vector<std::size_t> eliminated;
  PsdVerdict verdict;

  auto fail = [&](std::vector<Scalar> y) {
    auto x = lift(g, eliminated, std::move(y));
    std::size_t lead = 0;
    while (x[lead].is_zero()) ++lead;
    Scalar c = x[lead];
    for (auto& xi : x) xi /= c;
    Scalar value = quadratic_form(g, x);
    if (!value.is_real() || value.re().sign() >= 0) throw Error("LDL* witness does not verify");
    verdict.psd = false;
    verdict.witness = std::move(x);
    verdict.witness_value = value.re();
  };

  for (;;) {
    std::optional<std::size_t> negative;
    std::optional<std::size_t> positive;
    for (std::size_t i = 0; i < n; ++i) {
      if (!active[i]) continue;
      int sign = s[i][i].re().sign();
      if (sign < 0) {
        negative = i;
        break;
      }
      if (sign > 0 && !positive) positive = i;
    }
    if (negative) {
      std::vector<Scalar> y(n);
      y[*negative] = Scalar(1);
      fail(std::move(y));
      return verdict;
    }
    if (positive) {
      const std::size_t i = *positive;
      const Scalar pivot = s[i][i];
      for (std::size_t j = 0; j < n; ++j) {
        if (!active[j] || j == i || s[j][i].is_zero()) continue;
        Scalar f = s[j][i] / pivot;
        for (std::size_t l = 0; l < n; ++l) {
          if (active[l] && l != i) s[j][l] -= f * s[i][l];
        }
      }
      active[i] = false;
      eliminated.push_back(i);
      verdict.pivots.emplace_back(i, pivot.re());
      continue;
    }
    // Every remaining diagonal entry is zero.
    for (std::size_t i = 0; i < n; ++i) {
      if (!active[i]) continue;
      for (std::size_t j = i + 1; j < n; ++j) {
        if (!active[j] || s[i][j].is_zero()) continue;
        std::vector<Scalar> y(n);
        y[i] = -s[i][j];
        y[j] = Scalar(1);
        fail(std::move(y));
        return verdict;
      }
    }
    return verdict;
  }
}

namespace {

PositivityVerdict positivity(const Functional& phi, unsigned half_degree, bool include_unit) {
  PositivityVerdict v;
  v.half_degree = half_degree;
  v.hermitian = hermitian_violation(phi.truncated(2 * half_degree));
  if (v.hermitian) {
    v.pass = false;
    return v;
  }
  for (std::size_t k = 0; k < phi.components(); ++k) {
    v.grams.push_back(gram(phi, k, half_degree, include_unit));
    v.components.push_back(psd_exact(v.grams.back()));
    if (!v.components.back().psd && !v.failed_component) {
      v.pass = false;
      v.failed_component = k;
    }
  }
  return v;
}

}  // namespace

PositivityVerdict is_restricted_state(const Functional& phi, unsigned half_degree) {
  return positivity(phi, half_degree, true);
}

PositivityVerdict is_restricted_generating_functional(const Functional& psi, unsigned half_degree) {
  return positivity(psi, half_degree, false);
}

namespace {

/// π on generators with π(g*) = π(g)^H.
std::vector<Matrix> random_representation(Rng& rng, const FacedAlgebra& alg, unsigned dim) {
  if (!alg.has_involution()) throw InputError("sampling needs star data on the generators");
  std::vector<Matrix> pi(alg.size());
  for (GenIndex g = 0; g < alg.size(); ++g) {
    GenIndex s = alg.star_of(g);
    if (s < g) continue;
    Matrix m(dim, std::vector<Scalar>(dim));
    for (unsigned i = 0; i < dim; ++i) {
      for (unsigned j = 0; j < dim; ++j) {
        if (s == g && j < i) continue;
        m[i][j] = (s == g && i == j) ? Scalar(rng.rational(2, 2)) : rng.scalar(true, 2, 2);
        if (s == g) m[j][i] = m[i][j].conj();
      }
    }
    if (s != g) {
      Matrix h(dim, std::vector<Scalar>(dim));
      for (unsigned i = 0; i < dim; ++i) {
        for (unsigned j = 0; j < dim; ++j) h[i][j] = m[j][i].conj();
      }
      pi[s] = std::move(h);
    }
    pi[g] = std::move(m);
  }
  return pi;
}

std::vector<Scalar> nonzero_vector(Rng& rng, unsigned dim) {
  for (;;) {
    std::vector<Scalar> v(dim);
    bool nonzero = false;
    for (auto& x : v) {
      x = rng.scalar(true, 2, 2);
      nonzero = nonzero || !x.is_zero();
    }
    if (nonzero) return v;
  }
}

/// Fills component k with scale * v* π(w) v on all words up to degree.
void fill_vector_state(Functional& f, std::size_t k, const std::vector<Matrix>& pi,
                       const std::vector<Scalar>& v, const Scalar& scale) {
  const auto& alg = *f.algebra();
  const std::size_t dim = v.size();
  for (const auto& w : words_up_to(alg, f.degree())) {
    std::vector<Scalar> u = v;
    for (auto it = w.rbegin(); it != w.rend(); ++it) {
      std::vector<Scalar> next(dim);
      for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = 0; j < dim; ++j) next[i] += pi[*it][i][j] * u[j];
      }
      u = std::move(next);
    }
    Scalar value;
    for (std::size_t i = 0; i < dim; ++i) value += v[i].conj() * u[i];
    f.set(k, w, value * scale);
  }
}

Functional sample(std::uint64_t seed, const AlgebraPtr& alg, unsigned degree,
                  const SampleOptions& options, bool normalize) {
  if (options.rep_dim == 0) throw InputError("rep_dim must be positive");
  Rng rng(seed);
  Functional f(alg, options.components, degree);
  for (std::size_t k = 0; k < options.components; ++k) {
    auto pi = random_representation(rng, *alg, options.rep_dim);
    auto v = nonzero_vector(rng, options.rep_dim);
    Scalar scale(1);
    if (normalize) {
      Rational norm;
      for (const auto& x : v) norm += x.norm2();
      scale = Scalar(Rational(1) / norm);
    }
    fill_vector_state(f, k, pi, v, scale);
    if (options.drift && !normalize) {
      for (GenIndex g = 0; g < alg->size(); ++g) {
        GenIndex s = alg->star_of(g);
        if (s < g) continue;
        Scalar l = s == g ? Scalar(rng.rational(2, 2)) : rng.scalar(true, 2, 2);
        f.set(k, {g}, f.value(k, {g}) + l);
        if (s != g) f.set(k, {s}, f.value(k, {s}) + l.conj());
      }
    }
  }
  return f;
}

}  // namespace

Functional sample_generating_functional(std::uint64_t seed, const AlgebraPtr& alg, unsigned degree,
                                        const SampleOptions& options) {
  return sample(seed, alg, degree, options, false);
}

Functional sample_restricted_state(std::uint64_t seed, const AlgebraPtr& alg, unsigned degree,
                                   const SampleOptions& options) {
  return sample(seed, alg, degree, options, true);
}

SchoenbergReport schoenberg_suite(const ProductPtr& U, const DualSemigroup& D,
                                  const Functional& psi, const std::vector<Rational>& times,
                                  unsigned degree) {
  SchoenbergReport report;
  const unsigned half = degree / 2;
  report.precondition = is_restricted_generating_functional(psi.truncated(degree), half);
  if (!report.precondition.pass) {
    report.pass = false;
    return report;
  }
  for (const auto& t : times) {
    if (t.sign() <= 0) throw InputError("Schoenberg times must be positive");
  }
  auto result = exp_dual(U, D, psi, degree, true);
  const auto& polys = *result.time_polynomials;
  const std::size_t d = psi.components();

  report.points.resize(times.size());
  parallel_for(times.size(), [&](std::size_t i) {
    Functional f(D.base(), d, degree);
    for (const auto& [w, per_k] : polys) {
      for (std::size_t k = 0; k < d; ++k) f.set(k, w, evaluate_at(per_k[k], Scalar(times[i])));
    }
    report.points[i] = {times[i], is_restricted_state(f, half)};
  });
  for (const auto& p : report.points) report.pass = report.pass && p.verdict.pass;

  for (const auto& [w, per_k] : polys) {
    for (std::size_t k = 0; k < d && report.derivative_ok; ++k) {
      Scalar linear = per_k[k].size() > 1 ? per_k[k][1] : Scalar(0);
      if (linear != psi.value(k, w)) {
        report.derivative_ok = false;
        report.derivative_witness = w;
      }
    }
  }
  report.pass = report.pass && report.derivative_ok;
  return report;
}

}  // namespace uniprod
