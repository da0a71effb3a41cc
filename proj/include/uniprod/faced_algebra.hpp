#pragma once

/**
 * m-faced free algebras presented by generators.
 *
 * A FacedAlgebra is the free nonunital algebra on a finite set of generators,
 * each tagged with a face in {1..m} and optionally paired with an adjoint
 * generator.  Free products are again FacedAlgebras whose generators carry a
 * leg tag and remember their origin in the factor; generators of
 * A_1 ⊔ ... ⊔ A_n are laid out leg-major, so the generators of the first
 * n-1 legs of a free power occupy the same indices as in the (n-1)-fold
 * power.
 */

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "uniprod/coefficients.hpp"
#include "uniprod/word.hpp"

namespace uniprod {

struct Generator {
  std::string id;
  unsigned face = 1;
  /// Id of the adjoint generator; empty when the algebra has no involution.
  std::string star;
};

class FacedAlgebra;
using AlgebraPtr = std::shared_ptr<const FacedAlgebra>;

class FacedAlgebra {
 public:
  /// Validates faces in {1..m}, unique ids, and that star is an involutive,
  /// face-preserving pairing (either all generators carry star data or none).
  FacedAlgebra(unsigned m, std::vector<Generator> generators);

  static AlgebraPtr make(unsigned m, std::vector<Generator> generators) {
    return std::make_shared<const FacedAlgebra>(m, std::move(generators));
  }

  unsigned faces() const { return m_; }
  std::size_t size() const { return gens_.size(); }
  const Generator& generator(GenIndex g) const { return gens_.at(g); }
  const std::vector<Generator>& generators() const { return gens_; }
  unsigned face_of(GenIndex g) const { return gens_.at(g).face; }

  /// Throws InputError for an unknown id.
  GenIndex index_of(std::string_view id) const;
  std::optional<GenIndex> find(std::string_view id) const;

  bool has_involution() const { return !star_.empty(); }
  /// Requires has_involution().
  GenIndex star_of(GenIndex g) const;

  // Free-product structure; a plain algebra has no factors and leg 0.
  bool is_free_product() const { return !factors_.empty(); }
  std::size_t legs() const { return factors_.size(); }
  const AlgebraPtr& factor(std::size_t leg) const { return factors_.at(leg - 1); }
  unsigned leg_of(GenIndex g) const { return leg_.empty() ? 0 : leg_.at(g); }
  GenIndex origin_of(GenIndex g) const { return origin_.empty() ? g : origin_.at(g); }
  /// Index of (factor generator g, leg) in this free product.
  GenIndex index_in_leg(unsigned leg, GenIndex g) const { return offset_.at(leg - 1) + g; }

  friend bool operator==(const FacedAlgebra& a, const FacedAlgebra& b);

 private:
  friend AlgebraPtr free_product(const std::vector<AlgebraPtr>& factors);

  unsigned m_;
  std::vector<Generator> gens_;
  std::map<std::string, GenIndex, std::less<>> by_id_;
  std::vector<GenIndex> star_;
  std::vector<AlgebraPtr> factors_;
  std::vector<unsigned> leg_;
  std::vector<GenIndex> origin_;
  std::vector<GenIndex> offset_;
};

/// Pointer equality or structural equality.
bool same_algebra(const AlgebraPtr& a, const AlgebraPtr& b);

/// A_1 ⊔ ... ⊔ A_n with generator ids "g@leg"; faces (A⊔B)^k = A^k ⊔ B^k.
AlgebraPtr free_product(const std::vector<AlgebraPtr>& factors);
inline AlgebraPtr free_product(const AlgebraPtr& a, const AlgebraPtr& b) {
  return free_product(std::vector<AlgebraPtr>{a, b});
}
/// B^{⊔n}, n >= 1.
AlgebraPtr free_power(const AlgebraPtr& b, unsigned n);

std::string format_word(const FacedAlgebra& alg, const Word& w);
/// Space separated generator ids; "1" or "" is the empty word.
Word parse_word(const FacedAlgebra& alg, std::string_view text);

/// Letters reversed and starred.
Word star_word(const FacedAlgebra& alg, const Word& w);

/// All nonempty words of length <= degree in graded-lex order.
std::vector<Word> words_up_to(const FacedAlgebra& alg, unsigned degree);
/// All words of exactly the given length in lexicographic order.
std::vector<Word> words_of_length(const FacedAlgebra& alg, unsigned length);

/// Finite linear combination of nonempty words with coefficients in C
/// (Scalar or SymbolicPolynomial).
template <class C>
class NCPolynomial {
 public:
  using Terms = std::map<Word, C>;

  explicit NCPolynomial(AlgebraPtr alg) : alg_(std::move(alg)) {}
  static NCPolynomial word(AlgebraPtr alg, Word w, C coeff = C(Scalar(1))) {
    NCPolynomial p(std::move(alg));
    p.add_term(std::move(w), coeff);
    return p;
  }

  const AlgebraPtr& algebra() const { return alg_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t degree() const {
    std::size_t d = 0;
    for (const auto& [w, c] : terms_) d = std::max(d, w.size());
    return d;
  }
  C coefficient(const Word& w) const {
    auto it = terms_.find(w);
    return it == terms_.end() ? C() : it->second;
  }

  void add_term(Word w, const C& c) {
    if (w.empty()) throw Error("the empty word is not an element of a nonunital algebra");
    for (GenIndex g : w) {
      if (g >= alg_->size()) throw InputError("letter outside the ambient algebra");
    }
    if (is_zero_coeff(c)) return;
    auto [it, inserted] = terms_.try_emplace(std::move(w), c);
    if (!inserted) {
      it->second += c;
      if (is_zero_coeff(it->second)) terms_.erase(it);
    }
  }

  NCPolynomial& operator+=(const NCPolynomial& o) {
    check_same(o);
    for (const auto& [w, c] : o.terms_) add_term(w, c);
    return *this;
  }
  NCPolynomial& operator-=(const NCPolynomial& o) {
    check_same(o);
    for (const auto& [w, c] : o.terms_) add_term(w, -c);
    return *this;
  }
  NCPolynomial scaled(const C& s) const {
    NCPolynomial out(alg_);
    for (const auto& [w, c] : terms_) out.add_term(w, c * s);
    return out;
  }

  friend NCPolynomial operator+(NCPolynomial a, const NCPolynomial& b) { return a += b; }
  friend NCPolynomial operator-(NCPolynomial a, const NCPolynomial& b) { return a -= b; }
  friend NCPolynomial operator*(const NCPolynomial& a, const NCPolynomial& b) {
    a.check_same(b);
    NCPolynomial out(a.alg_);
    for (const auto& [wa, ca] : a.terms_) {
      for (const auto& [wb, cb] : b.terms_) {
        Word w = wa;
        w.insert(w.end(), wb.begin(), wb.end());
        out.add_term(std::move(w), ca * cb);
      }
    }
    return out;
  }
  friend bool operator==(const NCPolynomial& a, const NCPolynomial& b) {
    return same_algebra(a.alg_, b.alg_) && a.terms_ == b.terms_;
  }

 private:
  static bool is_zero_coeff(const C& c) { return c.is_zero(); }
  void check_same(const NCPolynomial& o) const {
    if (!same_algebra(alg_, o.alg_)) throw InputError("polynomials over different algebras");
  }

  AlgebraPtr alg_;
  Terms terms_;
};

using Polynomial = NCPolynomial<Scalar>;

Polynomial multiply(const Polynomial& p, const Polynomial& q);

/// Antilinear antimultiplicative involution: reverse, star letters, conjugate.
Polynomial star(const Polynomial& p);

/// Faced homomorphism given by generator images.  Unset images raise on use.
class FacedHomomorphism {
 public:
  FacedHomomorphism(AlgebraPtr source, AlgebraPtr target);

  /// Checks that the image lies in the face of g in the target.
  void set_image(GenIndex g, Polynomial image);

  static FacedHomomorphism identity(const AlgebraPtr& alg);
  /// The zero map; every image is 0.
  static FacedHomomorphism zero(const AlgebraPtr& source, const AlgebraPtr& target);

  const AlgebraPtr& source() const { return source_; }
  const AlgebraPtr& target() const { return target_; }
  const std::optional<Polynomial>& image(GenIndex g) const { return images_.at(g); }

  Polynomial apply(const Word& w) const;
  Polynomial apply(const Polynomial& p) const;

 private:
  AlgebraPtr source_;
  AlgebraPtr target_;
  std::vector<std::optional<Polynomial>> images_;
};

inline Polynomial apply_hom(const FacedHomomorphism& j, const Polynomial& p) {
  return j.apply(p);
}

/// g ↦ g@leg from a factor into a free product.
FacedHomomorphism embed(const AlgebraPtr& product, unsigned leg);
inline FacedHomomorphism embed_left(const AlgebraPtr& product) { return embed(product, 1); }
inline FacedHomomorphism embed_right(const AlgebraPtr& product) { return embed(product, 2); }

/// The homomorphism A_1 ⊔ ... ⊔ A_n → C induced by maps A_leg → C.
FacedHomomorphism copair(const AlgebraPtr& product, const std::vector<FacedHomomorphism>& maps);

/// j_1 ⊔ ... ⊔ j_n between free products.
FacedHomomorphism free_product_hom(const AlgebraPtr& source_product,
                                   const AlgebraPtr& target_product,
                                   const std::vector<FacedHomomorphism>& maps);

struct Block {
  unsigned leg;
  /// Letters as generator indices of the factor algebra.
  Word letters;
  friend bool operator==(const Block&, const Block&) = default;
};

/// Maximal runs of constant leg of a word over a free product.
std::vector<Block> alternating_blocks(const FacedAlgebra& product, const Word& w);
/// Inverse of alternating_blocks.
Word assemble_blocks(const FacedAlgebra& product, const std::vector<Block>& blocks);

/// Element lambda*1 + a of the unitization 1A.
struct UnitalElement {
  Scalar unit;
  Polynomial body;

  explicit UnitalElement(AlgebraPtr alg) : body(std::move(alg)) {}
  UnitalElement(Scalar u, Polynomial b) : unit(std::move(u)), body(std::move(b)) {}
};

class Unitization {
 public:
  explicit Unitization(AlgebraPtr base) : base_(std::move(base)) {}
  const AlgebraPtr& base() const { return base_; }

  UnitalElement one() const { return UnitalElement(Scalar(1), Polynomial(base_)); }
  UnitalElement embed(const Polynomial& a) const { return UnitalElement(Scalar(0), a); }
  UnitalElement multiply(const UnitalElement& x, const UnitalElement& y) const;
  UnitalElement star(const UnitalElement& x) const;

 private:
  AlgebraPtr base_;
};

inline Unitization unitize(AlgebraPtr alg) { return Unitization(std::move(alg)); }

}  // namespace uniprod
