#include "uniprod/dual_semigroup.hpp"

namespace uniprod {

namespace {

/// Re-expresses p over a free power `from` inside the free power `to`,
/// moving leg l to leg l + shift.
Polynomial shift_legs(const Polynomial& p, const AlgebraPtr& to, unsigned shift) {
  const auto& from = *p.algebra();
  Polynomial out(to);
  for (const auto& [w, c] : p.terms()) {
    Word moved;
    moved.reserve(w.size());
    for (GenIndex g : w) moved.push_back(to->index_in_leg(from.leg_of(g) + shift, from.origin_of(g)));
    out.add_term(std::move(moved), c);
  }
  return out;
}

/// f∘g as generator data.
FacedHomomorphism compose(const FacedHomomorphism& f, const FacedHomomorphism& g) {
  FacedHomomorphism out(g.source(), f.target());
  for (GenIndex k = 0; k < g.source()->size(); ++k) {
    if (g.image(k)) out.set_image(k, f.apply(*g.image(k)));
  }
  return out;
}

/// The map B⊔B → target sending g@1 ↦ left(g) and g@2 ↦ right(g).
FacedHomomorphism from_pair(const DualSemigroup& D, const AlgebraPtr& target,
                            const std::function<Polynomial(GenIndex)>& left,
                            const std::function<Polynomial(GenIndex)>& right) {
  const auto& pair = D.pair_algebra();
  FacedHomomorphism h(pair, target);
  for (GenIndex g = 0; g < pair->size(); ++g) {
    GenIndex o = pair->origin_of(g);
    h.set_image(g, pair->leg_of(g) == 1 ? left(o) : right(o));
  }
  return h;
}

LawCheck compare_on_generators(const DualSemigroup& D, const FacedHomomorphism& a,
                               const FacedHomomorphism& b, const std::string& law) {
  const auto& base = D.base();
  for (GenIndex g = 0; g < base->size(); ++g) {
    if (!(a.apply(Word{g}) == b.apply(Word{g}))) {
      return {false, law, base->generator(g).id, "both sides differ on this generator"};
    }
  }
  return {true, law, "", ""};
}

}  // namespace

DualSemigroup::DualSemigroup(AlgebraPtr base, std::vector<Polynomial> rule)
    : base_(std::move(base)), pair_(free_product(base_, base_)), lambda_(base_, pair_) {
  if (rule.size() != base_->size()) {
    throw InputError("comultiplication rule must give an image for every generator");
  }
  primitive_ = true;
  degree_preserving_ = true;
  for (GenIndex g = 0; g < base_->size(); ++g) {
    // Accept rules built over a structurally equal copy of B⊔B.
    Polynomial image = shift_legs(rule[g], pair_, 0);
    Polynomial prim = Polynomial::word(pair_, {pair_->index_in_leg(1, g)}) +
                      Polynomial::word(pair_, {pair_->index_in_leg(2, g)});
    primitive_ = primitive_ && image == prim;
    for (const auto& [w, c] : image.terms()) degree_preserving_ = degree_preserving_ && w.size() == 1;
    lambda_.set_image(g, std::move(image));
  }
}

DualSemigroup DualSemigroup::primitive(const AlgebraPtr& base) {
  auto pair = free_product(base, base);
  std::vector<Polynomial> rule;
  for (GenIndex g = 0; g < base->size(); ++g) {
    rule.push_back(Polynomial::word(pair, {pair->index_in_leg(1, g)}) +
                   Polynomial::word(pair, {pair->index_in_leg(2, g)}));
  }
  return DualSemigroup(base, std::move(rule));
}

LawCheck check_counit(const DualSemigroup& D) {
  const auto& base = D.base();
  auto left = copair(D.pair_algebra(), {FacedHomomorphism::identity(base),
                                         FacedHomomorphism::zero(base, base)});
  auto right = copair(D.pair_algebra(), {FacedHomomorphism::zero(base, base),
                                          FacedHomomorphism::identity(base)});
  for (GenIndex g = 0; g < base->size(); ++g) {
    Polynomial lam = D.comultiply(Word{g});
    Polynomial v = Polynomial::word(base, {g});
    if (!(left.apply(lam) == v)) {
      return {false, "counit", base->generator(g).id, "(id⊔0)Λ differs from id"};
    }
    if (!(right.apply(lam) == v)) {
      return {false, "counit", base->generator(g).id, "(0⊔id)Λ differs from id"};
    }
  }
  return {true, "counit", "", ""};
}

LawCheck check_coassoc(const DualSemigroup& D, unsigned degree) {
  LawCheck counit = check_counit(D);
  if (!counit.pass) return counit;
  auto b3 = free_power(D.base(), 3);
  const auto& lam = D.comultiplication();
  auto pair = D.pair_algebra();
  auto lam_id = from_pair(
      D, b3, [&](GenIndex g) { return shift_legs(lam.apply(Word{g}), b3, 0); },
      [&](GenIndex g) { return Polynomial::word(b3, {b3->index_in_leg(3, g)}); });
  auto id_lam = from_pair(
      D, b3, [&](GenIndex g) { return Polynomial::word(b3, {b3->index_in_leg(1, g)}); },
      [&](GenIndex g) { return shift_legs(lam.apply(Word{g}), b3, 1); });
  auto left = compose(lam_id, lam);
  auto right = compose(id_lam, lam);
  LawCheck out = compare_on_generators(D, left, right, "coassociativity");
  if (!out.pass) return out;
  for (const auto& w : words_up_to(*D.base(), degree)) {
    if (!(left.apply(w) == right.apply(w))) {
      return {false, "coassociativity", format_word(*D.base(), w), "both sides differ on this word"};
    }
  }
  return out;
}

LawCheck check_star_compatible(const DualSemigroup& D) {
  const auto& base = D.base();
  for (GenIndex g = 0; g < base->size(); ++g) {
    if (!(star(D.comultiply(Word{g})) == D.comultiply(Word{base->star_of(g)}))) {
      return {false, "star-compatibility", base->generator(g).id, "Λ(g)* differs from Λ(g*)"};
    }
  }
  return {true, "star-compatibility", "", ""};
}

FacedHomomorphism iterated_comultiplication(const DualSemigroup& D, unsigned n) {
  if (n == 0) throw InputError("iterated comultiplication needs n >= 1");
  const auto& base = D.base();
  auto b1 = free_power(base, 1);
  FacedHomomorphism acc(base, b1);
  for (GenIndex g = 0; g < base->size(); ++g) acc.set_image(g, Polynomial::word(b1, {g}));
  for (unsigned k = 1; k < n; ++k) {
    auto next = free_power(base, k + 1);
    auto h = from_pair(
        D, next, [&](GenIndex g) { return shift_legs(*acc.image(g), next, 0); },
        [&](GenIndex g) { return Polynomial::word(next, {next->index_in_leg(k + 1, g)}); });
    acc = compose(h, D.comultiplication());
  }
  return acc;
}

FacedHomomorphism iterated_comultiplication_right(const DualSemigroup& D, unsigned n) {
  if (n <= 1) return iterated_comultiplication(D, n);
  auto inner = iterated_comultiplication(D, n - 1);
  auto target = free_power(D.base(), n);
  auto h = from_pair(
      D, target, [&](GenIndex g) { return Polynomial::word(target, {target->index_in_leg(1, g)}); },
      [&](GenIndex g) { return shift_legs(*inner.image(g), target, 1); });
  return compose(h, D.comultiplication());
}

Polynomial iterate_comultiplication(const DualSemigroup& D, unsigned n, const Polynomial& p) {
  return iterated_comultiplication(D, n).apply(p);
}

}  // namespace uniprod
