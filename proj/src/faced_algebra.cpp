#include "uniprod/faced_algebra.hpp"

#include <algorithm>
#include <sstream>

namespace uniprod {

FacedAlgebra::FacedAlgebra(unsigned m, std::vector<Generator> generators)
    : m_(m), gens_(std::move(generators)) {
  if (m_ == 0) throw InputError("an m-faced algebra needs m >= 1");
  std::size_t starred = 0;
  for (GenIndex g = 0; g < gens_.size(); ++g) {
    const auto& gen = gens_[g];
    if (gen.id.empty() || gen.id.find_first_of(" \t\n") != std::string::npos) {
      throw InputError("invalid generator id '" + gen.id + "'");
    }
    if (gen.face < 1 || gen.face > m_) {
      throw InputError("generator '" + gen.id + "' has face " + std::to_string(gen.face) +
                       " outside 1.." + std::to_string(m_));
    }
    if (!by_id_.emplace(gen.id, g).second) {
      throw InputError("duplicate generator id '" + gen.id + "'");
    }
    if (!gen.star.empty()) ++starred;
  }
  if (starred != 0 && starred != gens_.size()) {
    throw InputError("star data must be given for all generators or none");
  }
  if (starred == 0) return;
  star_.resize(gens_.size());
  for (GenIndex g = 0; g < gens_.size(); ++g) {
    auto it = by_id_.find(gens_[g].star);
    if (it == by_id_.end()) {
      throw InputError("star of '" + gens_[g].id + "' is unknown generator '" + gens_[g].star + "'");
    }
    star_[g] = it->second;
  }
  for (GenIndex g = 0; g < gens_.size(); ++g) {
    if (star_[star_[g]] != g) {
      throw InputError("star is not an involution at '" + gens_[g].id + "'");
    }
    if (gens_[star_[g]].face != gens_[g].face) {
      throw InputError("star does not preserve the face of '" + gens_[g].id + "'");
    }
  }
}

GenIndex FacedAlgebra::index_of(std::string_view id) const {
  auto it = by_id_.find(id);
  if (it == by_id_.end()) throw InputError("unknown generator '" + std::string(id) + "'");
  return it->second;
}

std::optional<GenIndex> FacedAlgebra::find(std::string_view id) const {
  auto it = by_id_.find(id);
  if (it == by_id_.end()) return std::nullopt;
  return it->second;
}

GenIndex FacedAlgebra::star_of(GenIndex g) const {
  if (star_.empty()) throw InputError("algebra has no involution data");
  return star_.at(g);
}

bool operator==(const FacedAlgebra& a, const FacedAlgebra& b) {
  if (a.m_ != b.m_ || a.gens_.size() != b.gens_.size() || a.leg_ != b.leg_ ||
      a.origin_ != b.origin_) {
    return false;
  }
  for (std::size_t k = 0; k < a.gens_.size(); ++k) {
    const auto& x = a.gens_[k];
    const auto& y = b.gens_[k];
    if (x.id != y.id || x.face != y.face || x.star != y.star) return false;
  }
  return true;
}

bool same_algebra(const AlgebraPtr& a, const AlgebraPtr& b) {
  return a == b || (a && b && *a == *b);
}

AlgebraPtr free_product(const std::vector<AlgebraPtr>& factors) {
  if (factors.empty()) throw InputError("free product of no algebras");
  unsigned m = factors.front()->faces();
  bool starred = factors.front()->has_involution();
  std::vector<Generator> gens;
  std::vector<unsigned> legs;
  std::vector<GenIndex> origins;
  std::vector<GenIndex> offsets;
  for (unsigned leg = 1; leg <= factors.size(); ++leg) {
    const auto& f = factors[leg - 1];
    if (f->faces() != m) throw InputError("free product of algebras with different face counts");
    if (f->has_involution() != starred) {
      throw InputError("free product mixes algebras with and without involution");
    }
    offsets.push_back(static_cast<GenIndex>(gens.size()));
    std::string suffix = "@" + std::to_string(leg);
    for (GenIndex g = 0; g < f->size(); ++g) {
      const auto& src = f->generator(g);
      gens.push_back({src.id + suffix, src.face, starred ? src.star + suffix : std::string()});
      legs.push_back(leg);
      origins.push_back(g);
    }
  }
  auto alg = std::make_shared<FacedAlgebra>(m, std::move(gens));
  alg->factors_ = factors;
  alg->leg_ = std::move(legs);
  alg->origin_ = std::move(origins);
  alg->offset_ = std::move(offsets);
  return alg;
}

AlgebraPtr free_power(const AlgebraPtr& b, unsigned n) {
  if (n == 0) throw InputError("free power needs n >= 1");
  return free_product(std::vector<AlgebraPtr>(n, b));
}

std::string format_word(const FacedAlgebra& alg, const Word& w) {
  if (w.empty()) return "1";
  std::string out;
  for (std::size_t k = 0; k < w.size(); ++k) {
    if (k) out += ' ';
    out += alg.generator(w[k]).id;
  }
  return out;
}

Word parse_word(const FacedAlgebra& alg, std::string_view text) {
  std::istringstream is{std::string(text)};
  Word w;
  std::string tok;
  while (is >> tok) {
    if (tok == "1" && !alg.find("1")) continue;
    w.push_back(alg.index_of(tok));
  }
  return w;
}

Word star_word(const FacedAlgebra& alg, const Word& w) {
  Word out(w.rbegin(), w.rend());
  for (auto& g : out) g = alg.star_of(g);
  return out;
}

std::vector<Word> words_of_length(const FacedAlgebra& alg, unsigned length) {
  std::vector<Word> out;
  if (alg.size() == 0) return out;
  Word w(length, 0);
  while (true) {
    out.push_back(w);
    std::size_t k = length;
    while (k > 0) {
      --k;
      if (++w[k] < alg.size()) break;
      w[k] = 0;
      if (k == 0) return out;
    }
    if (length == 0) return out;
  }
}

std::vector<Word> words_up_to(const FacedAlgebra& alg, unsigned degree) {
  std::vector<Word> out;
  for (unsigned n = 1; n <= degree; ++n) {
    auto layer = words_of_length(alg, n);
    out.insert(out.end(), layer.begin(), layer.end());
  }
  return out;
}

Polynomial multiply(const Polynomial& p, const Polynomial& q) { return p * q; }

Polynomial star(const Polynomial& p) {
  Polynomial out(p.algebra());
  for (const auto& [w, c] : p.terms()) out.add_term(star_word(*p.algebra(), w), c.conj());
  return out;
}

FacedHomomorphism::FacedHomomorphism(AlgebraPtr source, AlgebraPtr target)
    : source_(std::move(source)), target_(std::move(target)), images_(source_->size()) {
  if (source_->faces() != target_->faces()) {
    throw InputError("faced homomorphism between algebras with different face counts");
  }
}

void FacedHomomorphism::set_image(GenIndex g, Polynomial image) {
  if (!same_algebra(image.algebra(), target_)) {
    throw InputError("image of '" + source_->generator(g).id + "' is not in the target algebra");
  }
  unsigned face = source_->face_of(g);
  for (const auto& [w, c] : image.terms()) {
    for (GenIndex h : w) {
      if (target_->face_of(h) != face) {
        throw InputError("image of '" + source_->generator(g).id + "' leaves face " +
                         std::to_string(face));
      }
    }
  }
  images_.at(g) = std::move(image);
}

FacedHomomorphism FacedHomomorphism::identity(const AlgebraPtr& alg) {
  FacedHomomorphism j(alg, alg);
  for (GenIndex g = 0; g < alg->size(); ++g) j.images_[g] = Polynomial::word(alg, {g});
  return j;
}

FacedHomomorphism FacedHomomorphism::zero(const AlgebraPtr& source, const AlgebraPtr& target) {
  FacedHomomorphism j(source, target);
  for (GenIndex g = 0; g < source->size(); ++g) j.images_[g] = Polynomial(target);
  return j;
}

Polynomial FacedHomomorphism::apply(const Word& w) const {
  if (w.empty()) throw Error("homomorphisms act on nonempty words");
  std::optional<Polynomial> acc;
  for (GenIndex g : w) {
    const auto& img = images_.at(g);
    if (!img) throw InputError("no image for generator '" + source_->generator(g).id + "'");
    acc = acc ? *acc * *img : *img;
    if (acc->is_zero()) break;
  }
  return *acc;
}

Polynomial FacedHomomorphism::apply(const Polynomial& p) const {
  if (!same_algebra(p.algebra(), source_)) throw InputError("polynomial not over the source algebra");
  Polynomial out(target_);
  for (const auto& [w, c] : p.terms()) out += apply(w).scaled(c);
  return out;
}

FacedHomomorphism embed(const AlgebraPtr& product, unsigned leg) {
  const auto& factor = product->factor(leg);
  FacedHomomorphism j(factor, product);
  for (GenIndex g = 0; g < factor->size(); ++g) {
    j.set_image(g, Polynomial::word(product, {product->index_in_leg(leg, g)}));
  }
  return j;
}

FacedHomomorphism copair(const AlgebraPtr& product, const std::vector<FacedHomomorphism>& maps) {
  if (maps.size() != product->legs()) throw InputError("copair needs one map per leg");
  const AlgebraPtr& target = maps.front().target();
  FacedHomomorphism j(product, target);
  for (GenIndex g = 0; g < product->size(); ++g) {
    const auto& m = maps.at(product->leg_of(g) - 1);
    if (!same_algebra(m.target(), target)) throw InputError("copair maps have different targets");
    const auto& img = m.image(product->origin_of(g));
    if (img) j.set_image(g, *img);
  }
  return j;
}

FacedHomomorphism free_product_hom(const AlgebraPtr& source_product,
                                   const AlgebraPtr& target_product,
                                   const std::vector<FacedHomomorphism>& maps) {
  std::vector<FacedHomomorphism> legs;
  for (unsigned leg = 1; leg <= maps.size(); ++leg) {
    const auto& m = maps[leg - 1];
    FacedHomomorphism lifted(m.source(), target_product);
    auto e = embed(target_product, leg);
    for (GenIndex g = 0; g < m.source()->size(); ++g) {
      if (m.image(g)) lifted.set_image(g, e.apply(*m.image(g)));
    }
    legs.push_back(std::move(lifted));
  }
  return copair(source_product, legs);
}

std::vector<Block> alternating_blocks(const FacedAlgebra& product, const Word& w) {
  std::vector<Block> out;
  for (GenIndex g : w) {
    unsigned leg = product.leg_of(g);
    if (out.empty() || out.back().leg != leg) out.push_back({leg, {}});
    out.back().letters.push_back(product.origin_of(g));
  }
  return out;
}

Word assemble_blocks(const FacedAlgebra& product, const std::vector<Block>& blocks) {
  Word w;
  for (const auto& b : blocks) {
    for (GenIndex g : b.letters) w.push_back(product.index_in_leg(b.leg, g));
  }
  return w;
}

UnitalElement Unitization::multiply(const UnitalElement& x, const UnitalElement& y) const {
  UnitalElement out(x.unit * y.unit, x.body * y.body);
  out.body += y.body.scaled(x.unit);
  out.body += x.body.scaled(y.unit);
  return out;
}

UnitalElement Unitization::star(const UnitalElement& x) const {
  return UnitalElement(x.unit.conj(), uniprod::star(x.body));
}

}  // namespace uniprod
