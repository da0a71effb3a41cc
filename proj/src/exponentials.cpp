#include "uniprod/exponentials.hpp"

#include <algorithm>

#include "uniprod/parallel.hpp"

namespace uniprod {

Scalar evaluate_at(const TimePolynomial& p, const Scalar& t) {
  Scalar acc;
  for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * t + *it;
  return acc;
}

std::string format_time_polynomial(const TimePolynomial& p) {
  std::string out;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i].is_zero()) continue;
    if (!out.empty()) out += " + ";
    std::string c = p[i].pretty();
    if (i == 0) {
      out += c;
      continue;
    }
    if (c != "1") out += (p[i].is_real() ? c : "(" + c + ")") + " ";
    out += i == 1 ? "t" : "t^" + std::to_string(i);
  }
  return out.empty() ? "0" : out;
}

ExpEngine::ExpEngine(InducedBialgebra IB, LachsFunctional f) : IB_(std::move(IB)), f_(std::move(f)) {
  if (!IB_.dual_semigroup().is_degree_preserving()) {
    throw InputError("convolution exponentials need a degree-preserving comultiplication");
  }
  if (!f_(SymWord()).is_zero()) throw InputError("the exponent must vanish on the unit");
}

Scalar ExpEngine::power(unsigned k, const SymWord& s) {
  if (k == 0) return counit(s);
  {
    std::lock_guard lock(mutex_);
    max_k_ = std::max(max_k_, k);
    if (auto it = memo_.find({k, s}); it != memo_.end()) return it->second;
  }
  Scalar acc;
  for (const auto& [pair, c] : IB_.delta(s)) {
    if (pair.second.empty()) continue;
    Scalar right = f_(pair.second);
    if (right.is_zero()) continue;
    Scalar left = power(k - 1, pair.first);
    acc += c * left * right;
  }
  std::lock_guard lock(mutex_);
  memo_.emplace(std::make_pair(k, s), acc);
  return acc;
}

TimePolynomial ExpEngine::exp_poly(const SymWord& s) {
  const auto n = static_cast<unsigned>(s.degree());
  TimePolynomial out(n + 1);
  Rational factorial(1);
  for (unsigned k = 0; k <= n; ++k) {
    if (k > 0) factorial *= Rational(static_cast<long>(k));
    out[k] = power(k, s) * Scalar(Rational(1) / factorial);
  }
  while (!out.empty() && out.back().is_zero()) out.pop_back();
  return out;
}

Scalar ExpEngine::exp(const SymWord& s) { return evaluate_at(exp_poly(s), Scalar(1)); }

unsigned ExpEngine::max_power_used() const {
  std::lock_guard lock(mutex_);
  return max_k_;
}

Scalar exp_on_lachs(const InducedBialgebra& IB, const LachsFunctional& f, const SymWord& s) {
  ExpEngine engine(IB, f);
  return engine.exp(s);
}

namespace {

void check_domain(const DualSemigroup& D, const Functional& psi, unsigned degree) {
  if (!same_algebra(psi.algebra(), D.base())) {
    throw InputError("functional is not defined on the dual semigroup");
  }
  if (degree > psi.degree()) {
    throw TruncationError("requested degree " + std::to_string(degree) +
                              " exceeds the truncation degree " + std::to_string(psi.degree()),
                          "");
  }
}

}  // namespace

ExpResult exp_dual(const ProductPtr& U, const DualSemigroup& D, const Functional& psi,
                   std::optional<unsigned> degree, bool with_time) {
  const unsigned deg = degree.value_or(psi.degree());
  check_domain(D, psi, deg);
  const std::size_t d = psi.components();
  ExpEngine engine(InducedBialgebra(D, U, d), derivation(psi));
  auto words = words_up_to(*D.base(), deg);
  std::vector<std::vector<TimePolynomial>> polys(words.size(), std::vector<TimePolynomial>(d));
  parallel_for(words.size() * d, [&](std::size_t idx) {
    std::size_t i = idx / d;
    std::size_t k = idx % d;
    polys[i][k] = engine.exp_poly(SymWord::single(k, words[i]));
  });
  ExpResult result{psi, U->name(), deg, Functional(D.base(), d, deg), std::nullopt};
  if (with_time) result.time_polynomials.emplace();
  for (std::size_t i = 0; i < words.size(); ++i) {
    for (std::size_t k = 0; k < d; ++k) {
      result.table.set(k, words[i], evaluate_at(polys[i][k], Scalar(1)));
    }
    if (with_time) result.time_polynomials->emplace(words[i], polys[i]);
  }
  return result;
}

std::vector<TimePolynomial> exp_poly_in_t(const ProductPtr& U, const DualSemigroup& D,
                                          const Functional& psi, const Word& w) {
  if (w.empty()) throw InputError("exp_poly_in_t needs a nonempty word");
  check_domain(D, psi, static_cast<unsigned>(w.size()));
  ExpEngine engine(InducedBialgebra(D, U, psi.components()), derivation(psi));
  std::vector<TimePolynomial> out;
  for (std::size_t k = 0; k < psi.components(); ++k) {
    out.push_back(engine.exp_poly(SymWord::single(k, w)));
  }
  return out;
}

Rational deviation(const std::vector<Scalar>& a, const std::vector<Scalar>& b) {
  if (a.size() != b.size()) throw Error("deviation of value vectors of different lengths");
  Rational out;
  for (std::size_t k = 0; k < a.size(); ++k) {
    Scalar diff = a[k] - b[k];
    out = std::max({out, diff.re().abs(), diff.im().abs()});
  }
  return out;
}

TrotterRun trotter(const ProductPtr& U, const DualSemigroup& D, const Functional& psi, unsigned n,
                   unsigned degree, const Functional& reference) {
  if (n == 0) throw InputError("trotter needs n >= 1");
  check_domain(D, psi, degree);
  static const ProductPtr tensor = make_product("tensor");
  Functional step =
      exp_dual(tensor, D, psi.scaled(Scalar(Rational(1, static_cast<long>(n)))), degree).table;
  TrotterRun run{n, convolution_power(*U, D, step, n, degree), {}, Rational(0)};
  const std::size_t d = psi.components();
  for (const auto& w : words_up_to(*D.base(), degree)) {
    std::vector<Scalar> a;
    std::vector<Scalar> b;
    for (std::size_t k = 0; k < d; ++k) {
      a.push_back(run.approximant.value(k, w));
      b.push_back(reference.value(k, w));
    }
    Rational dev = deviation(a, b);
    run.max_deviation = std::max(run.max_deviation, dev);
    run.deviation.emplace(w, std::move(dev));
  }
  return run;
}

TrotterRun trotter(const ProductPtr& U, const DualSemigroup& D, const Functional& psi, unsigned n,
                   unsigned degree) {
  return trotter(U, D, psi, n, degree, exp_dual(U, D, psi, degree).table);
}

SemigroupLawReport check_semigroup_law(const ProductPtr& U, const DualSemigroup& D,
                                       const Functional& psi, unsigned degree) {
  check_domain(D, psi, degree);
  auto table = exp_dual(U, D, psi, degree, true);
  const auto& polys = *table.time_polynomials;
  const std::size_t d = psi.components();
  // exp_⊙(tψ) at rational t from its time polynomials.
  auto at = [&](const Rational& t) {
    Functional f(D.base(), d, degree);
    for (const auto& [w, per_k] : polys) {
      for (std::size_t k = 0; k < d; ++k) f.set(k, w, evaluate_at(per_k[k], Scalar(t)));
    }
    return f;
  };
  SemigroupLawReport report;
  std::vector<Functional> samples;
  for (unsigned i = 1; i <= 2 * degree + 2; ++i) samples.push_back(at(Rational(static_cast<long>(i))));
  for (unsigned i = 1; i <= degree + 1 && report.pass; ++i) {
    for (unsigned j = 1; j <= degree + 1; ++j) {
      ++report.points;
      Functional lhs = convolve(*U, D, samples[i - 1], samples[j - 1], degree);
      const Functional& rhs = samples[i + j - 1];
      for (const auto& w : words_up_to(*D.base(), degree)) {
        bool ok = true;
        for (std::size_t k = 0; k < d; ++k) ok = ok && lhs.value(k, w) == rhs.value(k, w);
        if (!ok) {
          report.pass = false;
          report.witness = w;
          report.s = Rational(static_cast<long>(i));
          report.t = Rational(static_cast<long>(j));
          break;
        }
      }
      if (!report.pass) break;
    }
  }
  return report;
}

}  // namespace uniprod
