#include "uniprod/coefficients.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace uniprod {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

bool valid_integer(const std::string& s) {
  std::size_t i = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
  if (i == s.size()) return false;
  return std::all_of(s.begin() + static_cast<long>(i), s.end(),
                     [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

mpz_class parse_integer(const std::string& s, std::string_view whole) {
  if (!valid_integer(s)) throw InputError("malformed rational '" + std::string(whole) + "'");
  return mpz_class(s[0] == '+' ? s.substr(1) : s, 10);
}

}  // namespace

Rational::Rational(long num, long den) {
  if (den == 0) throw Error("rational with zero denominator");
  v_ = mpq_class(num, den);
  v_.canonicalize();
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw Error("division by zero");
  v_ /= o.v_;
  return *this;
}

Rational Rational::parse(std::string_view text) {
  std::string t = trim(text);
  auto slash = t.find('/');
  if (slash == std::string::npos) return Rational(mpq_class(parse_integer(t, text)));
  mpz_class num = parse_integer(trim(t.substr(0, slash)), text);
  mpz_class den = parse_integer(trim(t.substr(slash + 1)), text);
  if (den == 0) throw InputError("zero denominator in '" + std::string(text) + "'");
  return Rational(mpq_class(num, den));
}

std::string Rational::str() const {
  return v_.get_num().get_str() + "/" + v_.get_den().get_str();
}

Scalar& Scalar::operator+=(const Scalar& o) {
  re_ += o.re_;
  im_ += o.im_;
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) {
  re_ -= o.re_;
  im_ -= o.im_;
  return *this;
}

Scalar& Scalar::operator*=(const Scalar& o) {
  if (im_.is_zero() && o.im_.is_zero()) {
    re_ *= o.re_;
    return *this;
  }
  Rational re = re_ * o.re_ - im_ * o.im_;
  Rational im = re_ * o.im_ + im_ * o.re_;
  re_ = std::move(re);
  im_ = std::move(im);
  return *this;
}

Scalar& Scalar::operator/=(const Scalar& o) {
  if (o.is_zero()) throw Error("division by zero");
  Rational n = o.norm2();
  *this *= o.conj();
  re_ /= n;
  im_ /= n;
  return *this;
}

Scalar Scalar::parse(std::string_view text) {
  std::string t = trim(text);
  if (t.empty()) throw InputError("empty scalar");
  if (t.back() != 'i') return Scalar(Rational::parse(t));
  std::string body = t.substr(0, t.size() - 1);
  // Split at the last sign that is not the leading one.
  std::size_t split = std::string::npos;
  for (std::size_t k = body.size(); k-- > 1;) {
    if (body[k] == '+' || body[k] == '-') {
      split = k;
      break;
    }
  }
  Rational re(0);
  std::string imag = body;
  if (split != std::string::npos) {
    re = Rational::parse(body.substr(0, split));
    imag = body.substr(split);
  }
  imag = trim(imag);
  Rational im;
  if (imag.empty() || imag == "+") {
    im = Rational(1);
  } else if (imag == "-") {
    im = Rational(-1);
  } else {
    im = Rational::parse(imag);
  }
  return Scalar(re, im);
}

std::string Scalar::str() const {
  std::string out = re_.str();
  if (im_.sign() < 0) {
    out += "-" + (-im_).str();
  } else {
    out += "+" + im_.str();
  }
  return out + "i";
}

std::string Scalar::pretty() const {
  auto r = [](const Rational& q) {
    return q.raw().get_den() == 1 ? q.raw().get_num().get_str() : q.str();
  };
  if (im_.is_zero()) return r(re_);
  std::string ims;
  if (im_ == Rational(1)) {
    ims = "i";
  } else if (im_ == Rational(-1)) {
    ims = "-i";
  } else {
    ims = r(im_) + "i";
  }
  if (re_.is_zero()) return ims;
  return r(re_) + (im_.sign() > 0 ? "+" : "") + ims;
}

Scalar scalar_arith(const Scalar& a, const Scalar& b, ScalarOp op) {
  switch (op) {
    case ScalarOp::add: return a + b;
    case ScalarOp::sub: return a - b;
    case ScalarOp::mul: return a * b;
    case ScalarOp::div: return a / b;
    case ScalarOp::conj: return a.conj();
  }
  throw Error("unknown scalar operation");
}

std::string to_string(const MomentSymbol& s) {
  std::ostringstream os;
  os << "phi" << s.factor << "_" << (s.component + 1) << "(";
  for (std::size_t k = 0; k < s.word.size(); ++k) os << (k ? " " : "") << "g" << s.word[k];
  os << ")";
  return os.str();
}

Monomial monomial_product(const Monomial& a, const Monomial& b) {
  Monomial out;
  out.reserve(a.size() + b.size());
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (i->first < j->first) {
      out.push_back(*i++);
    } else if (j->first < i->first) {
      out.push_back(*j++);
    } else {
      out.emplace_back(i->first, i->second + j->second);
      ++i;
      ++j;
    }
  }
  out.insert(out.end(), i, a.end());
  out.insert(out.end(), j, b.end());
  return out;
}

SymbolicPolynomial::SymbolicPolynomial(Scalar constant) {
  if (!constant.is_zero()) terms_.emplace(Monomial{}, std::move(constant));
}

SymbolicPolynomial SymbolicPolynomial::symbol(MomentSymbol s) {
  if (s.word.empty()) throw Error("moment symbol with empty word");
  SymbolicPolynomial p;
  p.terms_.emplace(Monomial{{std::move(s), 1u}}, Scalar(1));
  return p;
}

void SymbolicPolynomial::add_term(const Monomial& m, const Scalar& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

SymbolicPolynomial SymbolicPolynomial::operator-() const {
  SymbolicPolynomial out = *this;
  for (auto& [m, c] : out.terms_) c = -c;
  return out;
}

SymbolicPolynomial& SymbolicPolynomial::operator+=(const SymbolicPolynomial& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

SymbolicPolynomial& SymbolicPolynomial::operator-=(const SymbolicPolynomial& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

SymbolicPolynomial operator*(const SymbolicPolynomial& a, const SymbolicPolynomial& b) {
  SymbolicPolynomial out;
  for (const auto& [ma, ca] : a.terms_) {
    for (const auto& [mb, cb] : b.terms_) out.add_term(monomial_product(ma, mb), ca * cb);
  }
  return out;
}

SymbolicPolynomial& SymbolicPolynomial::operator*=(const SymbolicPolynomial& o) {
  *this = *this * o;
  return *this;
}

SymbolicPolynomial& SymbolicPolynomial::operator*=(const Scalar& c) {
  if (c.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, v] : terms_) v *= c;
  return *this;
}

SymbolicPolynomial SymbolicPolynomial::map_symbols(
    const std::function<MomentSymbol(const MomentSymbol&)>& f) const {
  SymbolicPolynomial out;
  for (const auto& [m, c] : terms_) {
    Monomial renamed;
    for (const auto& [s, e] : m) renamed = monomial_product(renamed, Monomial{{f(s), e}});
    out.add_term(renamed, c);
  }
  return out;
}

std::string SymbolicPolynomial::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << "(" << c.pretty() << ")";
    for (const auto& [s, e] : m) {
      os << "*" << to_string(s);
      if (e > 1) os << "^" << e;
    }
  }
  return os.str();
}

Scalar substitute(const SymbolicPolynomial& p, const SymbolEnv& env) {
  Scalar total;
  for (const auto& [m, c] : p.terms()) {
    Scalar term = c;
    for (const auto& [s, e] : m) {
      Scalar v = env(s);
      for (unsigned k = 0; k < e; ++k) term *= v;
      if (term.is_zero()) break;
    }
    total += term;
  }
  return total;
}

Scalar substitute(const SymbolicPolynomial& p, const std::map<MomentSymbol, Scalar>& env) {
  return substitute(p, [&env](const MomentSymbol& s) -> Scalar {
    auto it = env.find(s);
    if (it == env.end()) throw InputError("no value for moment symbol " + to_string(s));
    return it->second;
  });
}

}  // namespace uniprod
