#pragma once

/**
 * Exact scalars and the commutative polynomial ring in formal moment symbols.
 *
 * Rational wraps a GMP rational that is always kept in lowest terms.  Scalar
 * is a Gaussian rational re + im*i.  SymbolicPolynomial is a polynomial over
 * Scalar whose variables are MomentSymbols phi_{factor,component}(word); it is
 * the value type of symbolically evaluated universal products.
 */

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "uniprod/error.hpp"
#include "uniprod/word.hpp"

namespace uniprod {

class Rational {
 public:
  Rational() = default;
  Rational(long value) : v_(value) {}  // NOLINT(google-explicit-constructor)
  Rational(long num, long den);
  explicit Rational(mpq_class value) : v_(std::move(value)) { v_.canonicalize(); }

  /// Accepts "p", "p/q", "-p/q" with arbitrary-size integers.
  static Rational parse(std::string_view text);

  /// Always "p/q" (denominator printed even when it is 1).
  std::string str() const;
  double to_double() const { return v_.get_d(); }
  const mpq_class& raw() const { return v_; }

  int sign() const { return sgn(v_); }
  bool is_zero() const { return sign() == 0; }
  Rational abs() const { return Rational(mpq_class(::abs(v_))); }

  Rational operator-() const { return Rational(mpq_class(-v_)); }
  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    int c = cmp(a.v_, b.v_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

 private:
  mpq_class v_;
};

/// Gaussian rational re + im*i.
class Scalar {
 public:
  Scalar() = default;
  Scalar(long value) : re_(value) {}            // NOLINT(google-explicit-constructor)
  Scalar(Rational re) : re_(std::move(re)) {}   // NOLINT(google-explicit-constructor)
  Scalar(Rational re, Rational im) : re_(std::move(re)), im_(std::move(im)) {}

  static Scalar i() { return Scalar(Rational(0), Rational(1)); }

  /// Accepts "p/q+r/si", "p/q-r/si", "p/q", "r/si", "i", "-i" and integer forms.
  static Scalar parse(std::string_view text);
  /// Canonical "p/q+r/si" form, e.g. "5/6+0/1i" or "1/2-3/1i".
  std::string str() const;
  /// Short human form for reports: "5/6", "-i", "1/2+3i".
  std::string pretty() const;

  const Rational& re() const { return re_; }
  const Rational& im() const { return im_; }
  bool is_zero() const { return re_.is_zero() && im_.is_zero(); }
  bool is_real() const { return im_.is_zero(); }

  Scalar conj() const { return Scalar(re_, -im_); }
  /// |z|^2 = re^2 + im^2, exact.
  Rational norm2() const { return re_ * re_ + im_ * im_; }

  Scalar operator-() const { return Scalar(-re_, -im_); }
  Scalar& operator+=(const Scalar& o);
  Scalar& operator-=(const Scalar& o);
  Scalar& operator*=(const Scalar& o);
  Scalar& operator/=(const Scalar& o);

  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
  friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }
  friend bool operator==(const Scalar& a, const Scalar& b) = default;

 private:
  Rational re_;
  Rational im_;
};

enum class ScalarOp { add, sub, mul, div, conj };

/// Dispatching form of the scalar operations; conj ignores b.
Scalar scalar_arith(const Scalar& a, const Scalar& b, ScalarOp op);

/// phi_{factor,component}(word): one formal sub-evaluation of a universal
/// product.  factor is 1 or 2, component is 0-based, word is nonempty and
/// indexes generators of the factor's algebra.
struct MomentSymbol {
  std::uint32_t factor = 1;
  std::uint32_t component = 0;
  Word word;

  friend auto operator<=>(const MomentSymbol&, const MomentSymbol&) = default;
};

/// Renders a symbol without algebra context: "phi1_1(g0 g2)".
std::string to_string(const MomentSymbol& s);

/// Sorted multiset of symbols with multiplicities; the empty monomial is 1.
using Monomial = std::vector<std::pair<MomentSymbol, unsigned>>;

Monomial monomial_product(const Monomial& a, const Monomial& b);

class SymbolicPolynomial {
 public:
  using Terms = std::map<Monomial, Scalar>;

  SymbolicPolynomial() = default;
  SymbolicPolynomial(Scalar constant);  // NOLINT(google-explicit-constructor)
  static SymbolicPolynomial symbol(MomentSymbol s);

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  /// Adds c*m, dropping the term if the result cancels.
  void add_term(const Monomial& m, const Scalar& c);

  SymbolicPolynomial operator-() const;
  SymbolicPolynomial& operator+=(const SymbolicPolynomial& o);
  SymbolicPolynomial& operator-=(const SymbolicPolynomial& o);
  SymbolicPolynomial& operator*=(const SymbolicPolynomial& o);
  SymbolicPolynomial& operator*=(const Scalar& c);

  friend SymbolicPolynomial operator+(SymbolicPolynomial a, const SymbolicPolynomial& b) {
    return a += b;
  }
  friend SymbolicPolynomial operator-(SymbolicPolynomial a, const SymbolicPolynomial& b) {
    return a -= b;
  }
  friend SymbolicPolynomial operator*(const SymbolicPolynomial& a, const SymbolicPolynomial& b);
  friend SymbolicPolynomial operator*(SymbolicPolynomial a, const Scalar& c) { return a *= c; }
  friend bool operator==(const SymbolicPolynomial&, const SymbolicPolynomial&) = default;

  /// Applies f to every symbol's word (used to rename letters).
  SymbolicPolynomial map_symbols(const std::function<MomentSymbol(const MomentSymbol&)>& f) const;

  std::string str() const;

 private:
  Terms terms_;
};

/// Environment for substitute: returns the value of a symbol or throws.
using SymbolEnv = std::function<Scalar(const MomentSymbol&)>;

/// Evaluates p at concrete symbol values.  A unital ring homomorphism.
Scalar substitute(const SymbolicPolynomial& p, const SymbolEnv& env);

/// Map-based environment; a missing symbol raises InputError naming it.
Scalar substitute(const SymbolicPolynomial& p, const std::map<MomentSymbol, Scalar>& env);

}  // namespace uniprod
