#include "uniprod/functional.hpp"

#include <algorithm>

namespace uniprod {

const Scalar Functional::zero_{};

Functional::Functional(AlgebraPtr alg, std::size_t d, unsigned degree)
    : alg_(std::move(alg)), d_(d), degree_(degree) {
  if (d_ == 0) throw InputError("a functional needs at least one component");
}

void Functional::check(std::size_t k, const Word& w) const {
  if (k >= d_) throw InputError("component " + std::to_string(k + 1) + " out of range");
  if (w.empty()) throw Error("functionals are defined on nonempty words");
  if (w.size() > degree_) {
    std::string word = format_word(*alg_, w);
    throw TruncationError("moment of '" + word + "' is beyond truncation degree " +
                              std::to_string(degree_),
                          word);
  }
}

void Functional::set(std::size_t k, const Word& w, const Scalar& value) {
  check(k, w);
  for (GenIndex g : w) {
    if (g >= alg_->size()) throw InputError("letter outside the functional's algebra");
  }
  auto it = table_.find(w);
  if (it == table_.end()) {
    if (value.is_zero()) return;
    it = table_.emplace(w, std::vector<Scalar>(d_)).first;
  }
  it->second[k] = value;
  bool all_zero = true;
  for (const auto& v : it->second) all_zero = all_zero && v.is_zero();
  if (all_zero) table_.erase(it);
}

const Scalar& Functional::value(std::size_t k, const Word& w) const {
  check(k, w);
  auto it = table_.find(w);
  return it == table_.end() ? zero_ : it->second[k];
}

Scalar Functional::unital_value(std::size_t k, const Word& w) const {
  if (w.empty()) {
    if (k >= d_) throw InputError("component out of range");
    return Scalar(1);
  }
  return value(k, w);
}

Scalar Functional::apply(std::size_t k, const Polynomial& p) const {
  Scalar total;
  for (const auto& [w, c] : p.terms()) total += c * value(k, w);
  return total;
}

Scalar Functional::apply(std::size_t k, const UnitalElement& x) const {
  return x.unit + apply(k, x.body);
}

std::vector<std::pair<Word, std::vector<Scalar>>> Functional::entries() const {
  std::vector<std::pair<Word, std::vector<Scalar>>> out(table_.begin(), table_.end());
  std::stable_sort(out.begin(), out.end(),
                   [](const auto& a, const auto& b) { return graded_less(a.first, b.first); });
  return out;
}

Functional Functional::scaled(const Scalar& s) const {
  Functional out(alg_, d_, degree_);
  for (const auto& [w, vals] : table_) {
    for (std::size_t k = 0; k < d_; ++k) out.set(k, w, vals[k] * s);
  }
  return out;
}

Functional Functional::truncated(unsigned degree) const {
  Functional out(alg_, d_, std::min(degree, degree_));
  for (const auto& [w, vals] : table_) {
    if (w.size() > out.degree_) continue;
    for (std::size_t k = 0; k < d_; ++k) out.set(k, w, vals[k]);
  }
  return out;
}

Functional Functional::pullback(const FacedHomomorphism& j, unsigned degree) const {
  if (!same_algebra(j.target(), alg_)) throw InputError("pullback along a map into another algebra");
  Functional out(j.source(), d_, degree);
  for (const auto& w : words_up_to(*j.source(), degree)) {
    Polynomial image = j.apply(w);
    for (std::size_t k = 0; k < d_; ++k) out.set(k, w, apply(k, image));
  }
  return out;
}

bool operator==(const Functional& a, const Functional& b) {
  return same_algebra(a.alg_, b.alg_) && a.d_ == b.d_ && a.degree_ == b.degree_ &&
         a.table_ == b.table_;
}

std::optional<HermitianViolation> hermitian_violation(const Functional& phi) {
  const auto& alg = *phi.algebra();
  for (const auto& w : words_up_to(alg, phi.degree())) {
    Word ws = star_word(alg, w);
    for (std::size_t k = 0; k < phi.components(); ++k) {
      const Scalar& a = phi.value(k, w);
      const Scalar& b = phi.value(k, ws);
      if (b != a.conj()) return HermitianViolation{k, w, a, b};
    }
  }
  return std::nullopt;
}

}  // namespace uniprod
