#include "uniprod/universal_products.hpp"

#include <unordered_map>

#include "uniprod/random.hpp"

namespace uniprod {

namespace {

using Mask = std::uint32_t;

struct MaskBlock {
  unsigned leg;
  Mask mask;
};

std::vector<MaskBlock> blocks_of(const MixedWord& w, Mask mask) {
  std::vector<MaskBlock> out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!(mask & (Mask{1} << i))) continue;
    if (out.empty() || out.back().leg != w[i].leg) out.push_back({w[i].leg, 0});
    out.back().mask |= Mask{1} << i;
  }
  return out;
}

Mask leg_mask(const MixedWord& w, unsigned leg) {
  Mask m = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i].leg == leg) m |= Mask{1} << i;
  }
  return m;
}

Word letters_of(const MixedWord& w, Mask mask) {
  Word out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (mask & (Mask{1} << i)) out.push_back(w[i].gen);
  }
  return out;
}

enum class Kind { tensor, free_, boolean, monotone, antimonotone, cfree };

/// The evaluation recursions of the built-in products over a value ring R.
/// moment(leg, k, mask) returns the sub-evaluation of the letters in mask,
/// which all belong to the same leg.
template <class R, class Moment>
class Recursion {
 public:
  Recursion(const MixedWord& w, const Moment& moment) : w_(w), moment_(moment) {
    if (w.size() > 31) throw Error("mixed words longer than 31 letters are not supported");
    for (const auto& l : w) {
      if (l.leg != 1 && l.leg != 2) throw Error("mixed letters must have leg 1 or 2");
    }
  }

  std::vector<R> run(Kind kind, std::size_t d) {
    std::vector<R> out;
    if (kind == Kind::cfree) {
      out.push_back(cfree_outer(full()));
      out.push_back(free_(1, full()));
      return out;
    }
    for (std::size_t k = 0; k < d; ++k) {
      switch (kind) {
        case Kind::tensor: out.push_back(tensor(k)); break;
        case Kind::free_: out.push_back(free_(k, full())); break;
        case Kind::boolean: out.push_back(boolean(k)); break;
        case Kind::monotone: out.push_back(monotone(k, 1)); break;
        case Kind::antimonotone: out.push_back(monotone(k, 2)); break;
        case Kind::cfree: break;
      }
    }
    return out;
  }

 private:
  Mask full() const { return w_.empty() ? 0 : static_cast<Mask>((std::uint64_t{1} << w_.size()) - 1); }
  static R one() { return R(Scalar(1)); }
  R moment_or_one(unsigned leg, std::size_t k, Mask m) const {
    return m ? moment_(leg, k, m) : one();
  }

  R tensor(std::size_t k) const {
    return moment_or_one(1, k, leg_mask(w_, 1)) * moment_or_one(2, k, leg_mask(w_, 2));
  }

  R boolean(std::size_t k) const {
    R out = one();
    for (const auto& b : blocks_of(w_, full())) out = out * moment_(b.leg, k, b.mask);
    return out;
  }

  // outer = 1: the outer factor's letters concatenate, the other leg's
  // blocks factor out individually.
  R monotone(std::size_t k, unsigned outer) const {
    R out = moment_or_one(outer, k, leg_mask(w_, outer));
    for (const auto& b : blocks_of(w_, full())) {
      if (b.leg != outer) out = out * moment_(b.leg, k, b.mask);
    }
    return out;
  }

  // 0 = phi(prod (c_i - phi(c_i)1)) over alternating blocks, expanded.
  R free_(std::size_t k, Mask mask) {
    if (mask == 0) return one();
    auto& memo = free_memo_[k];
    if (auto it = memo.find(mask); it != memo.end()) return it->second;
    auto bl = blocks_of(w_, mask);
    const std::size_t r = bl.size();
    R result;
    if (r == 1) {
      result = moment_(bl[0].leg, k, bl[0].mask);
    } else {
      std::vector<R> single;
      for (const auto& b : bl) single.push_back(moment_(b.leg, k, b.mask));
      for (Mask subset = 0; subset + 1 < (Mask{1} << r); ++subset) {
        Mask sub = 0;
        R outside = one();
        std::size_t n_out = 0;
        for (std::size_t i = 0; i < r; ++i) {
          if (subset & (Mask{1} << i)) {
            sub |= bl[i].mask;
          } else {
            outside = outside * single[i];
            ++n_out;
          }
        }
        R term = free_(k, sub) * outside;
        if (n_out % 2 == 0) {
          result = result - term;
        } else {
          result = result + term;
        }
      }
    }
    memo.emplace(mask, result);
    return result;
  }

  // phi(prod (c_i - psi(c_i)1)) = prod (phi(c_i) - psi(c_i)) over
  // alternating blocks; phi is component 0, psi component 1.
  R cfree_outer(Mask mask) {
    if (mask == 0) return one();
    if (auto it = cfree_memo_.find(mask); it != cfree_memo_.end()) return it->second;
    auto bl = blocks_of(w_, mask);
    const std::size_t r = bl.size();
    R result;
    if (r == 1) {
      result = moment_(bl[0].leg, 0, bl[0].mask);
    } else {
      std::vector<R> neg_psi;
      result = one();
      for (const auto& b : bl) {
        R psi = moment_(b.leg, 1, b.mask);
        result = result * (moment_(b.leg, 0, b.mask) - psi);
        neg_psi.push_back(R() - psi);
      }
      for (Mask subset = 0; subset + 1 < (Mask{1} << r); ++subset) {
        Mask sub = 0;
        R outside = one();
        for (std::size_t i = 0; i < r; ++i) {
          if (subset & (Mask{1} << i)) {
            sub |= bl[i].mask;
          } else {
            outside = outside * neg_psi[i];
          }
        }
        result = result - cfree_outer(sub) * outside;
      }
    }
    cfree_memo_.emplace(mask, result);
    return result;
  }

  const MixedWord& w_;
  const Moment& moment_;
  std::unordered_map<std::size_t, std::unordered_map<Mask, R>> free_memo_;
  std::unordered_map<Mask, R> cfree_memo_;
};

class BuiltinProduct final : public UniversalProduct {
 public:
  BuiltinProduct(std::string name, Kind kind) : name_(std::move(name)), kind_(kind) {}

  std::string name() const override { return name_; }

  bool applicable(unsigned m, std::size_t d) const override {
    if (kind_ == Kind::cfree) return m == 1 && d == 2;
    return m >= 1 && d >= 1;
  }

  std::vector<SymbolicPolynomial> evaluate(const MixedWord& w, std::size_t d) const override {
    auto moment = [&w](unsigned leg, std::size_t k, Mask m) {
      return SymbolicPolynomial::symbol(
          MomentSymbol{leg, static_cast<std::uint32_t>(k), letters_of(w, m)});
    };
    Recursion<SymbolicPolynomial, decltype(moment)> rec(w, moment);
    return rec.run(kind_, d);
  }

  std::optional<std::vector<Scalar>> evaluate_concrete(const MixedWord& w, std::size_t d,
                                                       const MomentFn& phi1,
                                                       const MomentFn& phi2) const override {
    auto moment = [&](unsigned leg, std::size_t k, Mask m) {
      return leg == 1 ? phi1(k, letters_of(w, m)) : phi2(k, letters_of(w, m));
    };
    Recursion<Scalar, decltype(moment)> rec(w, moment);
    return rec.run(kind_, d);
  }

 private:
  std::string name_;
  Kind kind_;
};

/// Symbolic-or-direct evaluation that bypasses the pattern cache.
std::vector<Scalar> raw_concrete(const UniversalProduct& U, const MixedWord& w, std::size_t d,
                                 const MomentFn& phi1, const MomentFn& phi2) {
  if (auto direct = U.evaluate_concrete(w, d, phi1, phi2)) return *direct;
  auto polys = U.evaluate(w, d);
  std::vector<Scalar> out;
  for (const auto& p : polys) {
    out.push_back(substitute(p, [&](const MomentSymbol& s) {
      return s.factor == 1 ? phi1(s.component, s.word) : phi2(s.component, s.word);
    }));
  }
  return out;
}

}  // namespace

MixedWord to_mixed(const FacedAlgebra& product, const Word& w) {
  if (product.legs() != 2) throw InputError("mixed words live on binary free products");
  MixedWord out;
  out.reserve(w.size());
  for (GenIndex g : w) out.push_back({product.leg_of(g), product.origin_of(g), product.face_of(g)});
  return out;
}

std::optional<std::vector<Scalar>> UniversalProduct::evaluate_concrete(const MixedWord&,
                                                                       std::size_t,
                                                                       const MomentFn&,
                                                                       const MomentFn&) const {
  return std::nullopt;
}

std::vector<SymbolicPolynomial> UniversalProduct::symbolic(const MixedWord& w,
                                                           std::size_t d) const {
  Key key;
  key.second = d;
  MixedWord generic;
  for (std::size_t i = 0; i < w.size(); ++i) {
    key.first.emplace_back(w[i].leg, w[i].face);
    generic.push_back({w[i].leg, static_cast<GenIndex>(i), w[i].face});
  }
  std::optional<std::vector<SymbolicPolynomial>> pattern;
  {
    std::lock_guard lock(cache_mutex_);
    auto it = cache_.find(key);
    if (it != cache_.end()) pattern = it->second;
  }
  if (!pattern) {
    pattern = evaluate(generic, d);
    std::lock_guard lock(cache_mutex_);
    cache_.emplace(key, *pattern);
  }
  std::vector<SymbolicPolynomial> out;
  out.reserve(pattern->size());
  for (const auto& p : *pattern) {
    out.push_back(p.map_symbols([&w](const MomentSymbol& s) {
      MomentSymbol r = s;
      for (auto& g : r.word) g = w.at(g).gen;
      return r;
    }));
  }
  return out;
}

std::vector<Scalar> UniversalProduct::concrete(const MixedWord& w, std::size_t d,
                                               const MomentFn& phi1, const MomentFn& phi2) const {
  if (auto direct = evaluate_concrete(w, d, phi1, phi2)) return *direct;
  std::vector<Scalar> out;
  for (const auto& p : symbolic(w, d)) {
    out.push_back(substitute(p, [&](const MomentSymbol& s) {
      return s.factor == 1 ? phi1(s.component, s.word) : phi2(s.component, s.word);
    }));
  }
  return out;
}

ProductPtr make_product(std::string_view name) {
  static const std::map<std::string, Kind, std::less<>> kinds{
      {"tensor", Kind::tensor},     {"free", Kind::free_},
      {"boolean", Kind::boolean},   {"monotone", Kind::monotone},
      {"antimonotone", Kind::antimonotone}, {"cfree", Kind::cfree}};
  auto it = kinds.find(name);
  if (it == kinds.end()) throw InputError("unknown universal product '" + std::string(name) + "'");
  return std::make_shared<BuiltinProduct>(it->first, it->second);
}

const std::vector<std::string>& builtin_product_names() {
  static const std::vector<std::string> names{"tensor",   "free",         "boolean",
                                              "monotone", "antimonotone", "cfree"};
  return names;
}

void require_applicable(const UniversalProduct& U, unsigned m, std::size_t d) {
  if (!U.applicable(m, d)) {
    throw InputError("product '" + U.name() + "' does not apply to m=" + std::to_string(m) +
                     ", d=" + std::to_string(d));
  }
}

MomentFn moments_of(const Functional& phi) {
  return [&phi](std::size_t k, const Word& w) { return phi.value(k, w); };
}

std::vector<Scalar> eval_product(const UniversalProduct& U, const MomentFn& phi1,
                                 const MomentFn& phi2, const MixedWord& w, std::size_t d) {
  if (w.empty()) throw Error("products are evaluated on nonempty words");
  return U.concrete(w, d, phi1, phi2);
}

std::vector<Scalar> eval_product(const UniversalProduct& U, const Functional& phi1,
                                 const Functional& phi2, const FacedAlgebra& product,
                                 const Word& w) {
  if (product.legs() != 2 || !same_algebra(product.factor(1), phi1.algebra()) ||
      !same_algebra(product.factor(2), phi2.algebra())) {
    throw InputError("word is not over dom(phi1) ⊔ dom(phi2)");
  }
  if (phi1.components() != phi2.components()) {
    throw InputError("factors have different component counts");
  }
  require_applicable(U, product.faces(), phi1.components());
  return eval_product(U, moments_of(phi1), moments_of(phi2), to_mixed(product, w),
                      phi1.components());
}

std::vector<SymbolicPolynomial> eval_product_symbolic(const UniversalProduct& U,
                                                      const FacedAlgebra& product, const Word& w,
                                                      std::size_t d) {
  require_applicable(U, product.faces(), d);
  if (w.empty()) throw Error("products are evaluated on nonempty words");
  return U.symbolic(to_mixed(product, w), d);
}

Functional convolve(const UniversalProduct& U, const DualSemigroup& D, const Functional& phi1,
                    const Functional& phi2, std::optional<unsigned> degree) {
  const auto& base = D.base();
  if (!same_algebra(phi1.algebra(), base) || !same_algebra(phi2.algebra(), base)) {
    throw InputError("convolution of functionals not defined on the dual semigroup");
  }
  if (phi1.components() != phi2.components()) {
    throw InputError("factors have different component counts");
  }
  const std::size_t d = phi1.components();
  require_applicable(U, base->faces(), d);
  unsigned deg = degree.value_or(std::min(phi1.degree(), phi2.degree()));
  Functional out(base, d, deg);
  const auto& pair = *D.pair_algebra();
  auto f1 = moments_of(phi1);
  auto f2 = moments_of(phi2);
  for (const auto& w : words_up_to(*base, deg)) {
    std::vector<Scalar> acc(d);
    const Polynomial image = D.comultiply(w);
    for (const auto& [u, c] : image.terms()) {
      auto vals = U.concrete(to_mixed(pair, u), d, f1, f2);
      for (std::size_t k = 0; k < d; ++k) acc[k] += c * vals[k];
    }
    for (std::size_t k = 0; k < d; ++k) out.set(k, w, acc[k]);
  }
  return out;
}

namespace {

class PowerEvaluator {
 public:
  PowerEvaluator(const UniversalProduct& U, const Functional& phi, const FacedAlgebra& power)
      : U_(U), phi_(phi), power_(power), memo_(power.legs() + 1) {}

  std::vector<Scalar> eval(unsigned n, const Word& w) {
    if (auto it = memo_[n].find(w); it != memo_[n].end()) return it->second;
    std::vector<Scalar> out;
    const std::size_t d = phi_.components();
    if (n == 1) {
      Word origin;
      for (GenIndex g : w) origin.push_back(power_.origin_of(g));
      for (std::size_t k = 0; k < d; ++k) out.push_back(phi_.value(k, origin));
    } else {
      MixedWord mixed;
      for (GenIndex g : w) {
        unsigned leg = power_.leg_of(g);
        if (leg < n) {
          mixed.push_back({1, g, power_.face_of(g)});
        } else {
          mixed.push_back({2, power_.origin_of(g), power_.face_of(g)});
        }
      }
      MomentFn left = [this, n](std::size_t k, const Word& u) { return eval(n - 1, u)[k]; };
      out = U_.concrete(mixed, d, left, moments_of(phi_));
    }
    memo_[n].emplace(w, out);
    return out;
  }

 private:
  const UniversalProduct& U_;
  const Functional& phi_;
  const FacedAlgebra& power_;
  std::vector<std::map<Word, std::vector<Scalar>>> memo_;
};

}  // namespace

std::vector<Scalar> eval_power_product(const UniversalProduct& U, const Functional& phi,
                                       const FacedAlgebra& power, const Word& w) {
  if (!power.is_free_product() || !same_algebra(power.factor(1), phi.algebra())) {
    throw InputError("word is not over a free power of dom(phi)");
  }
  require_applicable(U, power.faces(), phi.components());
  PowerEvaluator ev(U, phi, power);
  return ev.eval(static_cast<unsigned>(power.legs()), w);
}

Functional convolution_power_iterated(const UniversalProduct& U, const DualSemigroup& D,
                                      const Functional& phi, unsigned n, unsigned degree) {
  auto lambda_n = iterated_comultiplication(D, n);
  const auto& power = *lambda_n.target();
  require_applicable(U, power.faces(), phi.components());
  PowerEvaluator ev(U, phi, power);
  const std::size_t d = phi.components();
  Functional out(D.base(), d, degree);
  for (const auto& w : words_up_to(*D.base(), degree)) {
    std::vector<Scalar> acc(d);
    const Polynomial image = lambda_n.apply(w);
    for (const auto& [u, c] : image.terms()) {
      auto vals = ev.eval(n, u);
      for (std::size_t k = 0; k < d; ++k) acc[k] += c * vals[k];
    }
    for (std::size_t k = 0; k < d; ++k) out.set(k, w, acc[k]);
  }
  return out;
}

Functional convolution_power(const UniversalProduct& U, const DualSemigroup& D,
                             const Functional& phi, unsigned n, unsigned degree) {
  if (n == 0) throw InputError("convolution power needs n >= 1");
  Functional base = phi.truncated(degree);
  Functional acc = base;
  for (unsigned k = 1; k < n; ++k) acc = convolve(U, D, acc, base, degree);
  return acc;
}

AxiomReport check_axioms(const UniversalProduct& U, const AxiomOptions& opt) {
  require_applicable(U, opt.m, opt.d);
  AxiomReport report;
  report.product = U.name();
  report.trials = opt.trials;
  report.max_len = opt.max_len;
  const std::size_t d = opt.d;
  const unsigned image_len = 2;
  const unsigned degree = std::max(opt.max_len * image_len, opt.max_len + 1);

  unsigned trial = 0;
  auto fail = [&](std::string law, std::string witness, std::string detail) {
    report.failures.push_back({std::move(law), trial, std::move(witness), std::move(detail)});
  };
  auto values_str = [](const std::vector<Scalar>& v) {
    std::string s = "(";
    for (std::size_t k = 0; k < v.size(); ++k) s += (k ? ", " : "") + v[k].pretty();
    return s + ")";
  };

  for (; trial < opt.trials; ++trial) {
    Rng rng(opt.seed * 1000003ULL + trial);
    auto make_alg = [&](const std::string& prefix) {
      std::vector<Generator> gens;
      for (int g = 0; g < 2; ++g) {
        gens.push_back({prefix + std::to_string(g), static_cast<unsigned>(rng.range(1, opt.m)), ""});
      }
      return FacedAlgebra::make(opt.m, std::move(gens));
    };
    auto a1 = make_alg("a");
    auto a2 = make_alg("b");
    auto a3 = make_alg("c");
    auto phi1 = random_functional(rng, a1, d, degree);
    auto phi2 = random_functional(rng, a2, d, degree);
    auto phi3 = random_functional(rng, a3, d, degree);
    auto f1 = moments_of(phi1);
    auto f2 = moments_of(phi2);
    auto f3 = moments_of(phi3);
    auto p12 = free_product(a1, a2);
    auto p23 = free_product(a2, a3);
    auto p123 = free_product(std::vector<AlgebraPtr>{a1, a2, a3});

    // Restriction.
    for (unsigned leg = 1; leg <= 2; ++leg) {
      const auto& factor = leg == 1 ? a1 : a2;
      const auto& phi = leg == 1 ? phi1 : phi2;
      Word u = random_word(rng, *factor, 1, opt.max_len);
      MixedWord mixed;
      for (GenIndex g : u) mixed.push_back({leg, g, factor->face_of(g)});
      auto got = raw_concrete(U, mixed, d, f1, f2);
      ++report.checks;
      for (std::size_t k = 0; k < d; ++k) {
        if (got[k] != phi.value(k, u)) {
          fail("restriction", format_word(*factor, u) + " on leg " + std::to_string(leg),
               "got " + values_str(got));
          break;
        }
      }
    }

    // Universality under random substitutions j1: a1' -> a1, j2: a2' -> a2.
    {
      auto s1 = make_alg("p");
      auto s2 = make_alg("q");
      auto j1 = random_substitution(rng, s1, a1, image_len);
      auto j2 = random_substitution(rng, s2, a2, image_len);
      auto src = free_product(s1, s2);
      auto j = free_product_hom(src, p12, {j1, j2});
      Word w = random_word(rng, *src, 1, opt.max_len);
      MomentFn g1 = [&](std::size_t k, const Word& u) { return phi1.apply(k, j1.apply(u)); };
      MomentFn g2 = [&](std::size_t k, const Word& u) { return phi2.apply(k, j2.apply(u)); };
      auto lhs = raw_concrete(U, to_mixed(*src, w), d, g1, g2);
      std::vector<Scalar> rhs(d);
      const Polynomial image = j.apply(w);
      for (const auto& [u, c] : image.terms()) {
        auto v = raw_concrete(U, to_mixed(*p12, u), d, f1, f2);
        for (std::size_t k = 0; k < d; ++k) rhs[k] += c * v[k];
      }
      ++report.checks;
      if (lhs != rhs) {
        fail("universality", format_word(*src, w),
             "(phi1∘j1)⊙(phi2∘j2) = " + values_str(lhs) + ", (phi1⊙phi2)∘(j1⊔j2) = " +
                 values_str(rhs));
      }
    }

    // Associativity on three-factor words.
    {
      Word w = random_word(rng, *p123, 1, opt.max_len + 1);
      const GenIndex n1 = static_cast<GenIndex>(a1->size());
      MixedWord left_split;
      MixedWord right_split;
      for (GenIndex g : w) {
        unsigned leg = p123->leg_of(g);
        GenIndex o = p123->origin_of(g);
        unsigned face = p123->face_of(g);
        left_split.push_back(leg <= 2 ? MixedLetter{1, g, face} : MixedLetter{2, o, face});
        right_split.push_back(leg == 1 ? MixedLetter{1, o, face} : MixedLetter{2, g - n1, face});
      }
      MomentFn f12 = [&](std::size_t k, const Word& u) {
        return raw_concrete(U, to_mixed(*p12, u), d, f1, f2)[k];
      };
      MomentFn f23 = [&](std::size_t k, const Word& u) {
        return raw_concrete(U, to_mixed(*p23, u), d, f2, f3)[k];
      };
      auto lhs = raw_concrete(U, left_split, d, f12, f3);
      auto rhs = raw_concrete(U, right_split, d, f1, f23);
      ++report.checks;
      if (lhs != rhs) {
        fail("associativity", format_word(*p123, w),
             "(phi1⊙phi2)⊙phi3 = " + values_str(lhs) + ", phi1⊙(phi2⊙phi3) = " +
                 values_str(rhs));
      }
    }
    if (opt.stop_at_first && !report.failures.empty()) break;
  }
  return report;
}

}  // namespace uniprod
