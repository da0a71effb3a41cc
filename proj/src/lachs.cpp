#include "uniprod/lachs.hpp"

#include <algorithm>
#include <tuple>

namespace uniprod {

SymWord::SymWord(std::vector<SymAtom> atoms) : atoms_(std::move(atoms)) {
  for (const auto& a : atoms_) {
    if (a.second.empty()) throw Error("SymWord entries must be nonempty words");
  }
  std::sort(atoms_.begin(), atoms_.end());
}

std::size_t SymWord::degree() const {
  std::size_t n = 0;
  for (const auto& a : atoms_) n += a.second.size();
  return n;
}

SymWord operator*(const SymWord& a, const SymWord& b) {
  SymWord out;
  out.atoms_.reserve(a.atoms_.size() + b.atoms_.size());
  std::merge(a.atoms_.begin(), a.atoms_.end(), b.atoms_.begin(), b.atoms_.end(),
             std::back_inserter(out.atoms_));
  return out;
}

std::string format_symword(const FacedAlgebra& alg, const SymWord& s) {
  if (s.empty()) return "1";
  std::string out;
  for (const auto& [k, w] : s.atoms()) {
    if (!out.empty()) out += " · ";
    out += "[" + std::to_string(k + 1) + ": " + format_word(alg, w) + "]";
  }
  return out;
}

void add_to(TensorElement& t, const SymWord& left, const SymWord& right, const Scalar& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = t.try_emplace({left, right}, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) t.erase(it);
  }
}

namespace {

void add_to(SymPolynomial& p, const SymWord& s, const Scalar& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = p.try_emplace(s, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) p.erase(it);
  }
}

SymPolynomial product(const SymPolynomial& a, const SymPolynomial& b) {
  SymPolynomial out;
  for (const auto& [sa, ca] : a) {
    for (const auto& [sb, cb] : b) add_to(out, sa * sb, ca * cb);
  }
  return out;
}

/// Multiset of (component, word) pairs of one factor from a monomial.
SymWord atoms_of(const Monomial& m, std::uint32_t factor) {
  std::vector<SymAtom> atoms;
  for (const auto& [sym, mult] : m) {
    if (sym.factor != factor) continue;
    for (unsigned i = 0; i < mult; ++i) atoms.emplace_back(sym.component, sym.word);
  }
  return SymWord(std::move(atoms));
}

}  // namespace

TensorElement tensor_product(const TensorElement& a, const TensorElement& b) {
  TensorElement out;
  for (const auto& [pa, ca] : a) {
    for (const auto& [pb, cb] : b) add_to(out, pa.first * pb.first, pa.second * pb.second, ca * cb);
  }
  return out;
}

std::vector<SymWord> symwords_up_to(const FacedAlgebra& alg, std::size_t d, unsigned degree) {
  std::vector<SymAtom> atoms;
  for (const auto& w : words_up_to(alg, degree)) {
    for (std::size_t k = 0; k < d; ++k) atoms.emplace_back(k, w);
  }
  std::sort(atoms.begin(), atoms.end());
  std::vector<SymWord> out;
  std::vector<SymAtom> current;
  // Multisets as nondecreasing atom sequences.
  auto rec = [&](auto&& self, std::size_t start, unsigned budget) -> void {
    out.emplace_back(current);
    for (std::size_t i = start; i < atoms.size(); ++i) {
      if (atoms[i].second.size() > budget) continue;
      current.push_back(atoms[i]);
      self(self, i, budget - static_cast<unsigned>(atoms[i].second.size()));
      current.pop_back();
    }
  };
  rec(rec, 0, degree);
  std::stable_sort(out.begin(), out.end(), [](const SymWord& a, const SymWord& b) {
    return a.degree() < b.degree();
  });
  return out;
}

LachsFunctional character(const Functional& f) {
  return [f](const SymWord& s) {
    Scalar v(1);
    for (const auto& [k, w] : s.atoms()) {
      v *= f.value(k, w);
      if (v.is_zero()) break;
    }
    return v;
  };
}

LachsFunctional derivation(const Functional& f) {
  return [f](const SymWord& s) {
    if (s.size() != 1) return Scalar(0);
    const auto& [k, w] = s.atoms().front();
    return f.value(k, w);
  };
}

Scalar counit(const SymWord& s) { return s.empty() ? Scalar(1) : Scalar(0); }

Scalar apply_tensor(const LachsFunctional& f, const LachsFunctional& g, const TensorElement& t) {
  Scalar acc;
  for (const auto& [pair, c] : t) {
    Scalar left = f(pair.first);
    if (left.is_zero()) continue;
    acc += c * left * g(pair.second);
  }
  return acc;
}

SymPolynomial lachs_map(const FacedHomomorphism& j, const SymWord& s) {
  SymPolynomial acc{{SymWord(), Scalar(1)}};
  for (const auto& [k, w] : s.atoms()) {
    SymPolynomial image;
    const Polynomial mapped = j.apply(w);
    for (const auto& [u, c] : mapped.terms()) add_to(image, SymWord::single(k, u), c);
    acc = product(acc, image);
    if (acc.empty()) break;
  }
  return acc;
}

TensorElement lachs_map(const FacedHomomorphism& j1, const FacedHomomorphism& j2,
                        const TensorElement& t) {
  TensorElement out;
  for (const auto& [pair, c] : t) {
    auto left = lachs_map(j1, pair.first);
    if (left.empty()) continue;
    auto right = lachs_map(j2, pair.second);
    for (const auto& [l, cl] : left) {
      for (const auto& [r, cr] : right) add_to(out, l, r, c * cl * cr);
    }
  }
  return out;
}

TensorElement extract_sigma(const UniversalProduct& U, const FacedAlgebra& product, std::size_t d,
                            const SymWord& s) {
  if (product.legs() != 2) throw InputError("σ is defined on binary free products");
  SymbolicPolynomial acc(Scalar(1));
  for (const auto& [k, w] : s.atoms()) {
    if (k >= d) throw InputError("SymWord component out of range");
    acc *= eval_product_symbolic(U, product, w, d).at(k);
    if (acc.is_zero()) break;
  }
  TensorElement out;
  for (const auto& [m, c] : acc.terms()) add_to(out, atoms_of(m, 1), atoms_of(m, 2), c);
  return out;
}

TensorElement sigma_hat(const FacedAlgebra& product, const SymWord& s) {
  if (product.legs() != 2) throw InputError("σ̂ is defined on binary free products");
  std::vector<SymAtom> left;
  std::vector<SymAtom> right;
  for (const auto& [k, w] : s.atoms()) {
    Word l;
    Word r;
    for (GenIndex g : w) (product.leg_of(g) == 1 ? l : r).push_back(product.origin_of(g));
    if (!l.empty()) left.emplace_back(k, std::move(l));
    if (!r.empty()) right.emplace_back(k, std::move(r));
  }
  TensorElement out;
  add_to(out, SymWord(std::move(left)), SymWord(std::move(right)), Scalar(1));
  return out;
}

InducedBialgebra::InducedBialgebra(DualSemigroup D, ProductPtr U, std::size_t d)
    : D_(std::move(D)), U_(std::move(U)), d_(d), memo_(std::make_shared<Memo>()) {
  if (!U_) throw InputError("no universal product given");
  require_applicable(*U_, D_.base()->faces(), d_);
}

void InducedBialgebra::override_sigma(SigmaFn sigma) {
  sigma_override_ = std::move(sigma);
  memo_ = std::make_shared<Memo>();
}

SymPolynomial InducedBialgebra::lachs_of_comultiplication(const SymWord& s) const {
  return lachs_map(D_.comultiplication(), s);
}

TensorElement InducedBialgebra::sigma(const SymWord& s) const {
  if (sigma_override_) return (*sigma_override_)(s);
  return extract_sigma(*U_, *D_.pair_algebra(), d_, s);
}

TensorElement InducedBialgebra::delta(const SymWord& s) const {
  {
    std::lock_guard lock(memo_->mutex);
    if (auto it = memo_->delta.find(s); it != memo_->delta.end()) return it->second;
  }
  TensorElement out;
  for (const auto& [u, c] : lachs_of_comultiplication(s)) {
    for (const auto& [pair, cs] : sigma(u)) add_to(out, pair.first, pair.second, c * cs);
  }
  std::lock_guard lock(memo_->mutex);
  memo_->delta.emplace(s, out);
  return out;
}

TensorElement induced_delta(const InducedBialgebra& IB, const SymWord& s) { return IB.delta(s); }

LachsFunctional coalg_convolve(const InducedBialgebra& IB, LachsFunctional f, LachsFunctional g) {
  return [IB, f = std::move(f), g = std::move(g)](const SymWord& s) {
    return apply_tensor(f, g, IB.delta(s));
  };
}

IntertwineReport check_intertwine(const InducedBialgebra& IB, const Functional& phi1,
                                  const Functional& phi2, unsigned degree) {
  Functional conv = convolve(*IB.product(), IB.dual_semigroup(), phi1, phi2, degree);
  auto lhs = character(conv);
  auto rhs = coalg_convolve(IB, character(phi1), character(phi2));
  IntertwineReport report;
  for (const auto& s : symwords_up_to(*IB.base(), IB.components(), degree)) {
    ++report.checked;
    Scalar a = lhs(s);
    Scalar b = rhs(s);
    if (a != b) {
      report.pass = false;
      report.witness = s;
      report.lhs = a;
      report.rhs = b;
      break;
    }
  }
  return report;
}

namespace {

SymPolynomial as_polynomial(const SymWord& s) { return {{s, Scalar(1)}}; }

}  // namespace

LawReport check_delta_counit(const InducedBialgebra& IB, unsigned degree) {
  LawReport report;
  report.law = "counit";
  for (const auto& s : symwords_up_to(*IB.base(), IB.components(), degree)) {
    ++report.checked;
    SymPolynomial left_counit;
    SymPolynomial right_counit;
    for (const auto& [pair, c] : IB.delta(s)) {
      if (pair.first.empty()) add_to(left_counit, pair.second, c);
      if (pair.second.empty()) add_to(right_counit, pair.first, c);
    }
    if (left_counit != as_polynomial(s) || right_counit != as_polynomial(s)) {
      report.pass = false;
      report.witness = s;
      break;
    }
  }
  return report;
}

LawReport check_delta_coassoc(const InducedBialgebra& IB, unsigned degree) {
  using Triple = std::map<std::tuple<SymWord, SymWord, SymWord>, Scalar>;
  auto add = [](Triple& t, std::tuple<SymWord, SymWord, SymWord> key, const Scalar& c) {
    auto [it, inserted] = t.try_emplace(std::move(key), c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) t.erase(it);
    }
  };
  LawReport report;
  report.law = "coassociativity";
  for (const auto& s : symwords_up_to(*IB.base(), IB.components(), degree)) {
    ++report.checked;
    Triple lhs;
    Triple rhs;
    for (const auto& [pair, c] : IB.delta(s)) {
      for (const auto& [inner, ci] : IB.delta(pair.first)) {
        add(lhs, {inner.first, inner.second, pair.second}, c * ci);
      }
      for (const auto& [inner, ci] : IB.delta(pair.second)) {
        add(rhs, {pair.first, inner.first, inner.second}, c * ci);
      }
    }
    if (lhs != rhs) {
      report.pass = false;
      report.witness = s;
      break;
    }
  }
  return report;
}

LawReport check_delta_degree(const InducedBialgebra& IB, unsigned degree) {
  if (!IB.dual_semigroup().is_degree_preserving()) {
    throw InputError("degree preservation is only expected for a degree-preserving Λ");
  }
  LawReport report;
  report.law = "degree";
  for (const auto& s : symwords_up_to(*IB.base(), IB.components(), degree)) {
    ++report.checked;
    for (const auto& [pair, c] : IB.delta(s)) {
      if (pair.first.degree() + pair.second.degree() != s.degree()) {
        report.pass = false;
        report.witness = s;
        return report;
      }
    }
  }
  return report;
}

LawReport check_sigma_multiplicative(const InducedBialgebra& IB, unsigned degree) {
  LawReport report;
  report.law = "σ multiplicative";
  auto basis = symwords_up_to(*IB.dual_semigroup().pair_algebra(), IB.components(), degree);
  for (const auto& s : basis) {
    if (s.empty()) continue;
    for (const auto& t : basis) {
      if (t.empty() || s.degree() + t.degree() > degree) continue;
      ++report.checked;
      if (IB.sigma(s * t) != tensor_product(IB.sigma(s), IB.sigma(t))) {
        report.pass = false;
        report.witness = s * t;
        return report;
      }
    }
  }
  return report;
}

LawReport check_sigma_star(const InducedBialgebra& IB, unsigned degree) {
  const auto& pair = *IB.dual_semigroup().pair_algebra();
  const auto& base = *IB.base();
  if (!pair.has_involution()) throw InputError("σ star compatibility needs star data");
  auto star_sym = [](const FacedAlgebra& alg, const SymWord& s) {
    std::vector<SymAtom> atoms;
    for (const auto& [k, w] : s.atoms()) atoms.emplace_back(k, star_word(alg, w));
    return SymWord(std::move(atoms));
  };
  LawReport report;
  report.law = "σ star";
  for (const auto& s : symwords_up_to(pair, IB.components(), degree)) {
    ++report.checked;
    TensorElement rhs;
    for (const auto& [p, c] : IB.sigma(s)) {
      add_to(rhs, star_sym(base, p.first), star_sym(base, p.second), c.conj());
    }
    if (IB.sigma(star_sym(pair, s)) != rhs) {
      report.pass = false;
      report.witness = s;
      break;
    }
  }
  return report;
}

}  // namespace uniprod
