#include "uniprod/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "uniprod/positivity.hpp"
#include "uniprod/random.hpp"

namespace uniprod::cli {

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream os;
  os << std::hex;
  os.width(16);
  os.fill('0');
  os << h;
  return os.str();
}

namespace {

using json = nlohmann::ordered_json;

/// Input that does not match the problem schema; pointer is a JSON pointer.
class SchemaError : public InputError {
 public:
  SchemaError(std::string pointer, const std::string& what)
      : InputError(what), pointer_(std::move(pointer)) {}
  const std::string& pointer() const { return pointer_; }

 private:
  std::string pointer_;
};

std::string child(const std::string& ptr, const std::string& key) {
  std::string out = ptr + "/";
  for (char c : key) {
    if (c == '~') {
      out += "~0";
    } else if (c == '/') {
      out += "~1";
    } else {
      out += c;
    }
  }
  return out;
}

std::string child(const std::string& ptr, std::size_t i) { return ptr + "/" + std::to_string(i); }

const json& require_field(const json& j, const std::string& key, const std::string& ptr) {
  if (!j.is_object() || !j.contains(key)) throw SchemaError(child(ptr, key), "missing field");
  return j.at(key);
}

void only_keys(const json& j, const std::string& ptr, std::initializer_list<const char*> keys) {
  for (const auto& [k, v] : j.items()) {
    if (std::none_of(keys.begin(), keys.end(), [&](const char* a) { return k == a; })) {
      throw SchemaError(child(ptr, k), "unknown field");
    }
  }
}

Scalar parse_scalar(const json& j, const std::string& ptr) {
  try {
    if (j.is_string()) return Scalar::parse(j.get<std::string>());
    if (j.is_number_integer()) return Scalar(j.get<long>());
  } catch (const Error& e) {
    throw SchemaError(ptr, e.what());
  }
  throw SchemaError(ptr, "a scalar is a string such as \"1/2+3/4i\" or an integer");
}

unsigned parse_unsigned(const json& j, const std::string& ptr) {
  if (!j.is_number_integer() || j.get<long long>() < 0) {
    throw SchemaError(ptr, "expected a nonnegative integer");
  }
  return j.get<unsigned>();
}

AlgebraPtr parse_algebra(const json& j, const std::string& ptr, bool allow_comul) {
  if (!j.is_object()) throw SchemaError(ptr, "expected an object");
  if (allow_comul) {
    only_keys(j, ptr, {"faces", "generators", "comul"});
  } else {
    only_keys(j, ptr, {"faces", "generators"});
  }
  unsigned m = j.contains("faces") ? parse_unsigned(j["faces"], child(ptr, "faces")) : 1;
  const auto gptr = child(ptr, "generators");
  const json& gens = require_field(j, "generators", ptr);
  if (!gens.is_array() || gens.empty()) throw SchemaError(gptr, "expected a nonempty array");
  std::vector<Generator> out;
  for (std::size_t i = 0; i < gens.size(); ++i) {
    const auto p = child(gptr, i);
    const json& g = gens[i];
    Generator gen;
    if (g.is_string()) {
      gen.id = g.get<std::string>();
    } else if (g.is_object()) {
      only_keys(g, p, {"id", "face", "star"});
      const json& id = require_field(g, "id", p);
      if (!id.is_string()) throw SchemaError(child(p, "id"), "expected a string");
      gen.id = id.get<std::string>();
      if (g.contains("face")) gen.face = parse_unsigned(g["face"], child(p, "face"));
      if (g.contains("star")) {
        if (!g["star"].is_string()) throw SchemaError(child(p, "star"), "expected a string");
        gen.star = g["star"].get<std::string>();
      }
    } else {
      throw SchemaError(p, "a generator is an id or an object {id, face, star}");
    }
    if (gen.id.empty() || gen.id == "1" ||
        gen.id.find_first_of(" \t\n@") != std::string::npos) {
      throw SchemaError(p, "generator ids are nonempty, not \"1\", without spaces or '@'");
    }
    out.push_back(std::move(gen));
  }
  try {
    return FacedAlgebra::make(m, std::move(out));
  } catch (const Error& e) {
    throw SchemaError(gptr, e.what());
  }
}

Word parse_word_at(const FacedAlgebra& alg, const std::string& text, const std::string& ptr) {
  try {
    return parse_word(alg, text);
  } catch (const Error& e) {
    throw SchemaError(ptr, e.what());
  }
}

DualSemigroup parse_dual_semigroup(const json& j, const std::string& ptr) {
  auto base = parse_algebra(j, ptr, true);
  if (!j.contains("comul")) return DualSemigroup::primitive(base);
  const auto rptr = child(ptr, "comul");
  const json& rule = j["comul"];
  if (rule.is_string()) {
    if (rule.get<std::string>() != "primitive") {
      throw SchemaError(rptr, "expected \"primitive\" or an object of generator images");
    }
    return DualSemigroup::primitive(base);
  }
  if (!rule.is_object()) {
    throw SchemaError(rptr, "expected \"primitive\" or an object of generator images");
  }
  for (const auto& [id, image] : rule.items()) {
    if (!base->find(id)) throw SchemaError(child(rptr, id), "unknown generator");
  }
  auto pair = free_product(base, base);
  std::vector<Polynomial> images;
  for (GenIndex g = 0; g < base->size(); ++g) {
    const auto& id = base->generator(g).id;
    const auto gptr = child(rptr, id);
    if (!rule.contains(id)) throw SchemaError(gptr, "missing image of generator");
    const json& image = rule[id];
    if (!image.is_object()) throw SchemaError(gptr, "expected an object word -> scalar");
    Polynomial p(pair);
    for (const auto& [text, coeff] : image.items()) {
      const auto wptr = child(gptr, text);
      Word w = parse_word_at(*pair, text, wptr);
      if (w.empty()) throw SchemaError(wptr, "images are nonunital: the empty word is not allowed");
      p.add_term(std::move(w), parse_scalar(coeff, wptr));
    }
    images.push_back(std::move(p));
  }
  try {
    return DualSemigroup(base, std::move(images));
  } catch (const Error& e) {
    throw SchemaError(rptr, e.what());
  }
}

Functional parse_functional(const json& j, const std::string& ptr, const AlgebraPtr& alg) {
  if (!j.is_object()) throw SchemaError(ptr, "expected an object");
  only_keys(j, ptr, {"components", "degree", "moments", "on"});
  std::size_t d = j.contains("components") ? parse_unsigned(j["components"], child(ptr, "components")) : 1;
  if (d == 0) throw SchemaError(child(ptr, "components"), "at least one component");
  const auto mptr = child(ptr, "moments");
  const json& moments = require_field(j, "moments", ptr);
  if (!moments.is_object()) throw SchemaError(mptr, "expected an object word -> value");
  std::vector<std::pair<Word, std::vector<Scalar>>> entries;
  unsigned longest = 0;
  for (const auto& [text, value] : moments.items()) {
    const auto wptr = child(mptr, text);
    Word w = parse_word_at(*alg, text, wptr);
    if (w.empty()) throw SchemaError(wptr, "moments are given on nonempty words");
    std::vector<Scalar> values;
    if (value.is_array()) {
      if (value.size() != d) {
        throw SchemaError(wptr, "expected " + std::to_string(d) + " component values");
      }
      for (std::size_t k = 0; k < d; ++k) values.push_back(parse_scalar(value[k], child(wptr, k)));
    } else {
      if (d != 1) throw SchemaError(wptr, "multi-component moments are arrays");
      values.push_back(parse_scalar(value, wptr));
    }
    longest = std::max(longest, static_cast<unsigned>(w.size()));
    entries.emplace_back(std::move(w), std::move(values));
  }
  unsigned degree = j.contains("degree") ? parse_unsigned(j["degree"], child(ptr, "degree")) : longest;
  Functional f(alg, d, degree);
  for (auto& [w, values] : entries) {
    if (w.size() > degree) {
      throw SchemaError(child(mptr, format_word(*alg, w)), "word longer than the declared degree");
    }
    for (std::size_t k = 0; k < d; ++k) f.set(k, w, values[k]);
  }
  return f;
}

struct Problem {
  std::string hash;
  std::optional<DualSemigroup> semigroup;
  AlgebraPtr left;
  AlgebraPtr right;
  std::map<std::string, Functional> functionals;
  std::optional<std::string> product;
  json params = json::object();
};

Problem load_problem(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read problem file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError("", std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw SchemaError("", "the problem must be a JSON object");
  only_keys(j, "", {"description", "dual_semigroup", "factors", "functionals", "product", "params"});

  Problem p;
  p.hash = fnv1a_hex(text);
  if (j.contains("dual_semigroup")) {
    p.semigroup = parse_dual_semigroup(j["dual_semigroup"], "/dual_semigroup");
  }
  if (j.contains("factors")) {
    const json& f = j["factors"];
    if (!f.is_object()) throw SchemaError("/factors", "expected an object {left, right}");
    only_keys(f, "/factors", {"left", "right"});
    p.left = parse_algebra(require_field(f, "left", "/factors"), "/factors/left", false);
    p.right = parse_algebra(require_field(f, "right", "/factors"), "/factors/right", false);
    if (p.left->faces() != p.right->faces()) {
      throw SchemaError("/factors", "factors have different face counts");
    }
  }
  if (j.contains("product")) {
    if (!j["product"].is_string()) throw SchemaError("/product", "expected a product name");
    p.product = j["product"].get<std::string>();
    try {
      make_product(*p.product);
    } catch (const Error& e) {
      throw SchemaError("/product", e.what());
    }
  }
  if (j.contains("params")) {
    if (!j["params"].is_object()) throw SchemaError("/params", "expected an object");
    p.params = j["params"];
    only_keys(p.params, "/params", {"degree", "times", "steps", "seed", "rep_dim", "word"});
  }
  if (j.contains("functionals")) {
    const json& fs = j["functionals"];
    if (!fs.is_object()) throw SchemaError("/functionals", "expected an object name -> functional");
    for (const auto& [name, stanza] : fs.items()) {
      const auto ptr = child("/functionals", name);
      std::string on;
      if (stanza.is_object() && stanza.contains("on")) {
        if (!stanza["on"].is_string()) throw SchemaError(child(ptr, "on"), "expected base|left|right");
        on = stanza["on"].get<std::string>();
      } else if (p.left && (name == "phi1" || name == "phi2")) {
        on = name == "phi1" ? "left" : "right";
      } else {
        on = "base";
      }
      AlgebraPtr alg;
      if (on == "base") {
        if (!p.semigroup) throw SchemaError(ptr, "functional on the base needs a dual_semigroup");
        alg = p.semigroup->base();
      } else if (on == "left" || on == "right") {
        if (!p.left) throw SchemaError(ptr, "functional on a factor needs a factors stanza");
        alg = on == "left" ? p.left : p.right;
      } else {
        throw SchemaError(child(ptr, "on"), "expected base|left|right");
      }
      p.functionals.emplace(name, parse_functional(stanza, ptr, alg));
    }
  }
  return p;
}

// ---------------------------------------------------------------------------
// Rendering

json scalar_json(const Scalar& s) {
  return json{{"exact", s.str()}, {"float", {s.re().to_double(), s.im().to_double()}}};
}

json rational_json(const Rational& r) {
  return json{{"exact", r.str()}, {"float", r.to_double()}};
}

json values_json(const std::vector<Scalar>& v) {
  json out = json::array();
  for (const auto& s : v) out.push_back(scalar_json(s));
  return out;
}

std::vector<Scalar> values_of(const Functional& f, const Word& w) {
  std::vector<Scalar> out;
  for (std::size_t k = 0; k < f.components(); ++k) out.push_back(f.value(k, w));
  return out;
}

json table_json(const Functional& f) {
  json rows = json::array();
  for (const auto& w : words_up_to(*f.algebra(), f.degree())) {
    rows.push_back(json{{"word", format_word(*f.algebra(), w)}, {"values", values_json(values_of(f, w))}});
  }
  return rows;
}

std::string render_symbol(const MomentSymbol& s, const FacedAlgebra& left,
                          const FacedAlgebra& right, std::size_t d) {
  std::string name = "phi" + std::to_string(s.factor);
  if (d > 1) name += "_" + std::to_string(s.component + 1);
  return name + "(" + format_word(s.factor == 1 ? left : right, s.word) + ")";
}

std::string render_symbolic(const SymbolicPolynomial& p, const FacedAlgebra& left,
                            const FacedAlgebra& right, std::size_t d) {
  if (p.is_zero()) return "0";
  std::string out;
  for (const auto& [m, c] : p.terms()) {
    std::string coeff = c.pretty();
    bool negative = c.is_real() && c.re().sign() < 0;
    if (!out.empty()) out += negative ? " - " : " + ";
    else if (negative) out += "-";
    if (negative) coeff = (-c).pretty();
    if (!c.is_real()) coeff = "(" + coeff + ")";
    std::string body;
    for (const auto& [sym, e] : m) {
      if (!body.empty()) body += " ";
      body += render_symbol(sym, left, right, d);
      if (e > 1) body += "^" + std::to_string(e);
    }
    if (body.empty()) {
      out += coeff;
    } else {
      out += (coeff == "1" ? "" : coeff + " ") + body;
    }
  }
  return out;
}

std::string render_symword(const FacedAlgebra& alg, const SymWord& s, std::size_t d,
                           bool parenthesize) {
  if (s.empty()) return "1";
  std::string out;
  for (const auto& [k, w] : s.atoms()) {
    if (!out.empty()) out += " · ";
    out += format_word(alg, w);
    if (d > 1) out += "_" + std::to_string(k + 1);
  }
  return parenthesize && s.size() > 1 ? "(" + out + ")" : out;
}

json symword_json(const FacedAlgebra& alg, const SymWord& s) {
  json out = json::array();
  for (const auto& [k, w] : s.atoms()) {
    out.push_back(json{{"component", k + 1}, {"word", format_word(alg, w)}});
  }
  return out;
}

json tensor_json(const TensorElement& t, const FacedAlgebra& left, const FacedAlgebra& right,
                 std::size_t d) {
  json terms = json::array();
  std::string pretty;
  for (const auto& [pair, c] : t) {
    terms.push_back(json{{"coefficient", scalar_json(c)},
                         {"left", symword_json(left, pair.first)},
                         {"right", symword_json(right, pair.second)}});
    bool negative = c.is_real() && c.re().sign() < 0;
    Scalar mag = negative ? -c : c;
    if (!pretty.empty()) pretty += negative ? " - " : " + ";
    else if (negative) pretty += "-";
    if (mag != Scalar(1)) pretty += (mag.is_real() ? mag.pretty() : "(" + mag.pretty() + ")") + " ";
    pretty += render_symword(left, pair.first, d, true) + " ⊗ " +
              render_symword(right, pair.second, d, true);
  }
  return json{{"terms", terms}, {"pretty", pretty.empty() ? "0" : pretty}};
}

json hermitian_json(const FacedAlgebra& alg, const HermitianViolation& h) {
  return json{{"component", h.component + 1},
              {"word", format_word(alg, h.word)},
              {"value", scalar_json(h.value)},
              {"value_of_star", scalar_json(h.starred_value)}};
}

json positivity_json(const FacedAlgebra& alg, const PositivityVerdict& v) {
  json out{{"pass", v.pass}, {"certified_half_degree", v.half_degree}};
  if (v.hermitian) {
    out["stage"] = "hermitian";
    out["hermitian_violation"] = hermitian_json(alg, *v.hermitian);
    return out;
  }
  json comps = json::array();
  for (std::size_t k = 0; k < v.components.size(); ++k) {
    const auto& g = v.grams[k];
    const auto& c = v.components[k];
    json basis = json::array();
    for (const auto& w : g.basis) basis.push_back(w.empty() ? "1" : format_word(alg, w));
    json entry{{"component", k + 1}, {"psd", c.psd}, {"basis", basis}};
    json pivots = json::array();
    for (const auto& [i, p] : c.pivots) {
      pivots.push_back(json{{"index", i}, {"pivot", rational_json(p)}});
    }
    entry["pivots"] = pivots;
    if (c.witness) {
      entry["witness"] = values_json(*c.witness);
      entry["witness_value"] = rational_json(c.witness_value);
      json matrix = json::array();
      for (const auto& row : g.entries) {
        json r = json::array();
        for (const auto& x : row) r.push_back(x.str());
        matrix.push_back(r);
      }
      entry["gram"] = matrix;
    }
    comps.push_back(entry);
  }
  out["stage"] = "psd";
  out["components"] = comps;
  return out;
}

json law_json(const LawCheck& c) {
  json out{{"pass", c.pass}, {"law", c.law}};
  if (!c.pass) {
    out["witness"] = c.witness;
    out["detail"] = c.detail;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Options

struct Options {
  std::string spec;
  std::string product;
  unsigned degree = 0;
  std::string times;
  std::string steps;
  std::uint64_t seed = 1;
  unsigned rep_dim = 2;
  std::string json_out;
  std::vector<std::string> words;
  unsigned trials = 50;
  unsigned max_len = 5;
  std::string functional;
  bool drift = false;

  bool has_degree = false;
  bool has_seed = false;
  bool has_rep_dim = false;
  bool has_times = false;
  bool has_steps = false;
};

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != ' ') {
      cur += c;
    }
  }
  if (!cur.empty() || !out.empty()) out.push_back(cur);
  return out;
}

std::vector<Rational> parse_times(const Options& o, const Problem* p) {
  std::vector<Rational> out;
  if (o.has_times) {
    for (const auto& s : split_list(o.times)) {
      try {
        out.push_back(Rational::parse(s));
      } catch (const Error& e) {
        throw InputError("--times: " + std::string(e.what()));
      }
    }
  } else if (p && p->params.contains("times")) {
    const json& t = p->params["times"];
    if (!t.is_array()) throw SchemaError("/params/times", "expected an array");
    for (std::size_t i = 0; i < t.size(); ++i) {
      out.push_back(parse_scalar(t[i], child("/params/times", i)).re());
    }
  } else {
    out = {Rational(1, 10), Rational(1), Rational(10)};
  }
  for (const auto& t : out) {
    if (t.sign() <= 0) throw InputError("times must be positive");
  }
  return out;
}

std::vector<unsigned> parse_steps(const Options& o, const Problem* p) {
  std::vector<unsigned> out;
  if (o.has_steps) {
    for (const auto& s : split_list(o.steps)) {
      try {
        std::size_t used = 0;
        long v = std::stol(s, &used);
        if (used != s.size() || v <= 0) throw InputError("");
        out.push_back(static_cast<unsigned>(v));
      } catch (const std::exception&) {
        throw InputError("--steps expects positive integers, got '" + s + "'");
      }
    }
  } else if (p && p->params.contains("steps")) {
    const json& t = p->params["steps"];
    if (!t.is_array()) throw SchemaError("/params/steps", "expected an array");
    for (std::size_t i = 0; i < t.size(); ++i) {
      unsigned v = parse_unsigned(t[i], child("/params/steps", i));
      if (v == 0) throw SchemaError(child("/params/steps", i), "steps are positive");
      out.push_back(v);
    }
  } else {
    out = {1, 2, 4, 8, 16, 32};
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::optional<unsigned> degree_option(const Options& o, const Problem* p) {
  if (o.has_degree) return o.degree;
  if (p && p->params.contains("degree")) return parse_unsigned(p->params["degree"], "/params/degree");
  return std::nullopt;
}

std::uint64_t seed_option(const Options& o, const Problem* p) {
  if (o.has_seed) return o.seed;
  if (p && p->params.contains("seed")) return parse_unsigned(p->params["seed"], "/params/seed");
  return 1;
}

ProductPtr product_option(const Options& o, const Problem* p) {
  std::string name = o.product;
  if (name.empty() && p && p->product) name = *p->product;
  if (name.empty()) throw InputError("no product given (use --product or a \"product\" field)");
  return make_product(name);
}

const Functional& functional_named(const Problem& p, const std::string& name) {
  auto it = p.functionals.find(name);
  if (it == p.functionals.end()) {
    throw SchemaError(child("/functionals", name), "missing functional '" + name + "'");
  }
  return it->second;
}

const DualSemigroup& semigroup_of(const Problem& p) {
  if (!p.semigroup) throw SchemaError("/dual_semigroup", "missing field");
  return *p.semigroup;
}

std::vector<std::string> words_option(const Options& o, const Problem* p) {
  if (!o.words.empty()) return o.words;
  if (p && p->params.contains("word")) {
    const json& w = p->params["word"];
    if (w.is_string()) return {w.get<std::string>()};
    throw SchemaError("/params/word", "expected a word string");
  }
  return {};
}

/// Letters are ids of the product ("a@1") or bare ids that occur in exactly
/// one factor.
Word resolve_mixed_word(const FacedAlgebra& product, const std::string& text) {
  Word out;
  std::istringstream in(text);
  std::string tok;
  while (in >> tok) {
    if (auto g = product.find(tok)) {
      out.push_back(*g);
      continue;
    }
    std::optional<GenIndex> hit;
    for (unsigned leg = 1; leg <= product.legs(); ++leg) {
      if (auto g = product.factor(leg)->find(tok)) {
        if (hit) throw InputError("letter '" + tok + "' is ambiguous; add @1 or @2");
        hit = product.index_in_leg(leg, *g);
      }
    }
    if (!hit) throw InputError("unknown letter '" + tok + "'");
    out.push_back(*hit);
  }
  if (out.empty()) throw InputError("empty word");
  return out;
}

// ---------------------------------------------------------------------------
// Commands.  Each fills the report and returns whether all verdicts passed.

using Report = json;

bool check_semigroup_laws(const DualSemigroup& D, unsigned degree, Report& r) {
  auto counit = check_counit(D);
  auto coassoc = check_coassoc(D, std::max(2u, std::min(degree, 3u)));
  r["dual_semigroup"] = json{{"counit", law_json(counit)}, {"coassociativity", law_json(coassoc)}};
  return counit.pass && coassoc.pass;
}

bool cmd_eval_product(const Options& o, Report& r) {
  Problem p = load_problem(o.spec);
  r["input_hash"] = p.hash;
  auto U = product_option(o, &p);
  const auto& phi1 = functional_named(p, "phi1");
  const auto& phi2 = functional_named(p, "phi2");
  auto product = free_product(phi1.algebra(), phi2.algebra());
  const std::size_t d = phi1.components();
  if (phi2.components() != d) throw InputError("phi1 and phi2 have different component counts");
  require_applicable(*U, product->faces(), d);
  std::vector<Word> words;
  for (const auto& text : words_option(o, &p)) words.push_back(resolve_mixed_word(*product, text));
  if (words.empty()) {
    unsigned deg = degree_option(o, &p).value_or(std::min(phi1.degree(), phi2.degree()));
    words = words_up_to(*product, deg);
  }
  json rows = json::array();
  for (const auto& w : words) {
    auto values = eval_product(*U, phi1, phi2, *product, w);
    auto polys = eval_product_symbolic(*U, *product, w, d);
    json sym = json::array();
    for (const auto& q : polys) sym.push_back(render_symbolic(q, *phi1.algebra(), *phi2.algebra(), d));
    rows.push_back(json{{"word", format_word(*product, w)}, {"values", values_json(values)},
                        {"symbolic", sym}});
  }
  r["results"] = json{{"product", U->name()}, {"table", rows}};
  return true;
}

bool cmd_convolve(const Options& o, Report& r) {
  Problem p = load_problem(o.spec);
  r["input_hash"] = p.hash;
  auto U = product_option(o, &p);
  const auto& D = semigroup_of(p);
  const auto& phi1 = functional_named(p, "phi1");
  const auto& phi2 = functional_named(p, "phi2");
  auto conv = convolve(*U, D, phi1, phi2, degree_option(o, &p));
  bool ok = check_semigroup_laws(D, conv.degree(), r);
  r["results"] = json{{"product", U->name()}, {"degree", conv.degree()}, {"table", table_json(conv)}};
  return ok;
}

bool cmd_exp(const Options& o, Report& r) {
  Problem p = load_problem(o.spec);
  r["input_hash"] = p.hash;
  auto U = product_option(o, &p);
  const auto& D = semigroup_of(p);
  const auto& psi = functional_named(p, o.functional.empty() ? "psi" : o.functional);
  auto result = exp_dual(U, D, psi, degree_option(o, &p));
  bool ok = check_semigroup_laws(D, result.degree, r);
  r["results"] = json{{"product", U->name()}, {"degree", result.degree},
                      {"table", table_json(result.table)}};
  return ok;
}

bool cmd_exp_poly(const Options& o, Report& r) {
  Problem p = load_problem(o.spec);
  r["input_hash"] = p.hash;
  auto U = product_option(o, &p);
  const auto& D = semigroup_of(p);
  const auto& psi = functional_named(p, o.functional.empty() ? "psi" : o.functional);
  const auto& base = *D.base();
  std::vector<Word> words;
  for (const auto& text : words_option(o, &p)) {
    words.push_back(parse_word(base, text));
    if (words.back().empty()) throw InputError("exp-poly needs nonempty words");
  }
  std::map<Word, std::vector<TimePolynomial>> polys;
  if (words.empty()) {
    auto result = exp_dual(U, D, psi, degree_option(o, &p), true);
    polys = *result.time_polynomials;
  } else {
    for (const auto& w : words) polys.emplace(w, exp_poly_in_t(U, D, psi, w));
  }
  bool derivative_ok = true;
  std::string witness;
  json rows = json::array();
  for (const auto& [w, per_k] : polys) {
    json comps = json::array();
    for (std::size_t k = 0; k < per_k.size(); ++k) {
      json coeffs = json::array();
      for (const auto& c : per_k[k]) coeffs.push_back(c.str());
      comps.push_back(json{{"coefficients", coeffs}, {"pretty", format_time_polynomial(per_k[k])}});
      Scalar linear = per_k[k].size() > 1 ? per_k[k][1] : Scalar(0);
      if (derivative_ok && linear != psi.value(k, w)) {
        derivative_ok = false;
        witness = format_word(base, w);
      }
    }
    rows.push_back(json{{"word", format_word(base, w)}, {"components", comps}});
  }
  r["results"] = json{{"product", U->name()}, {"table", rows}};
  json v{{"pass", derivative_ok}};
  if (!derivative_ok) v["witness"] = witness;
  r["verdicts"] = json{{"linear_coefficient_is_psi", v}};
  return derivative_ok;
}

bool cmd_trotter(const Options& o, Report& r) {
  Problem p = load_problem(o.spec);
  r["input_hash"] = p.hash;
  auto U = product_option(o, &p);
  const auto& D = semigroup_of(p);
  const auto& psi = functional_named(p, o.functional.empty() ? "psi" : o.functional);
  const unsigned degree = degree_option(o, &p).value_or(psi.degree());
  auto steps = parse_steps(o, &p);
  auto reference = exp_dual(U, D, psi, degree).table;
  std::vector<TrotterRun> runs;
  for (unsigned n : steps) runs.push_back(trotter(U, D, psi, n, degree, reference));
  json rows = json::array();
  for (const auto& w : words_up_to(*D.base(), degree)) {
    json dev = json::object();
    for (const auto& run : runs) dev[std::to_string(run.n)] = rational_json(run.deviation.at(w));
    rows.push_back(json{{"word", format_word(*D.base(), w)},
                        {"reference", values_json(values_of(reference, w))},
                        {"deviation", dev}});
  }
  json summary = json::array();
  bool nonincreasing = true;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    summary.push_back(json{{"n", runs[i].n}, {"max_deviation", rational_json(runs[i].max_deviation)}});
    if (i > 0 && runs[i].max_deviation > runs[i - 1].max_deviation) nonincreasing = false;
  }
  r["results"] = json{{"product", U->name()}, {"degree", degree}, {"steps", summary}, {"table", rows}};
  r["verdicts"] = json{{"max_deviation_nonincreasing", nonincreasing}};
  return nonincreasing;
}

bool cmd_sigma(const Options& o, Report& r) {
  Problem p = load_problem(o.spec);
  r["input_hash"] = p.hash;
  auto U = product_option(o, &p);
  AlgebraPtr left;
  AlgebraPtr right;
  if (p.left) {
    left = p.left;
    right = p.right;
  } else {
    left = right = semigroup_of(p).base();
  }
  auto product = free_product(left, right);
  std::size_t d = 1;
  for (const auto& [name, f] : p.functionals) d = std::max(d, f.components());
  if (U->name() == "cfree") d = 2;
  require_applicable(*U, product->faces(), d);
  auto texts = words_option(o, &p);
  if (texts.empty()) throw InputError("sigma needs --word (repeat it for a product of words)");
  std::vector<SymAtom> atoms;
  for (const auto& text : texts) {
    // "k:word" selects component k (1-based).
    std::size_t k = 0;
    std::string body = text;
    if (auto colon = text.find(':'); colon != std::string::npos) {
      try {
        k = std::stoul(text.substr(0, colon)) - 1;
      } catch (const std::exception&) {
        throw InputError("bad component prefix in '" + text + "'");
      }
      if (k >= d) throw InputError("component out of range in '" + text + "'");
      body = text.substr(colon + 1);
    }
    atoms.emplace_back(k, resolve_mixed_word(*product, body));
  }
  SymWord s(std::move(atoms));
  auto t = extract_sigma(*U, *product, d, s);
  r["results"] = json{{"product", U->name()},
                      {"symword", symword_json(*product, s)},
                      {"sigma", tensor_json(t, *left, *right, d)}};
  return true;
}

json axiom_json(const AxiomReport& a, const AxiomOptions& opt) {
  json failures = json::array();
  for (const auto& f : a.failures) {
    failures.push_back(json{{"law", f.law}, {"trial", f.trial}, {"witness", f.witness},
                            {"detail", f.detail}});
  }
  return json{{"product", a.product}, {"pass", a.pass()}, {"trials", a.trials},
              {"max_len", a.max_len}, {"seed", opt.seed}, {"d", opt.d},
              {"checks", a.checks}, {"failures", failures}};
}

bool cmd_check_axioms(const Options& o, Report& r) {
  std::unique_ptr<Problem> p;
  if (!o.spec.empty()) {
    p = std::make_unique<Problem>(load_problem(o.spec));
    r["input_hash"] = p->hash;
  }
  std::vector<ProductPtr> products;
  if (!o.product.empty() || (p && p->product)) {
    products.push_back(product_option(o, p.get()));
  } else {
    for (const auto& name : builtin_product_names()) products.push_back(make_product(name));
  }
  bool ok = true;
  json reports = json::array();
  for (const auto& U : products) {
    AxiomOptions opt;
    opt.trials = o.trials;
    opt.max_len = o.max_len;
    opt.seed = seed_option(o, p.get());
    opt.d = U->applicable(1, 1) ? 1 : 2;
    auto a = check_axioms(*U, opt);
    ok = ok && a.pass();
    reports.push_back(axiom_json(a, opt));
  }
  r["results"] = reports;
  return ok;
}

bool cmd_positivity(const Options& o, Report& r, bool state) {
  Problem p = load_problem(o.spec);
  r["input_hash"] = p.hash;
  const std::string name = !o.functional.empty() ? o.functional : (state ? "phi" : "psi");
  const auto& f = functional_named(p, name);
  const unsigned degree = degree_option(o, &p).value_or(f.degree());
  auto v = state ? is_restricted_state(f.truncated(degree), degree / 2)
                 : is_restricted_generating_functional(f.truncated(degree), degree / 2);
  r["results"] = json{{"functional", name},
                      {"check", state ? "restricted_state" : "restricted_generating_functional"},
                      {"verdict", positivity_json(*f.algebra(), v)}};
  return v.pass;
}

bool cmd_schoenberg(const Options& o, Report& r) {
  Problem p = load_problem(o.spec);
  r["input_hash"] = p.hash;
  auto U = product_option(o, &p);
  const auto& D = semigroup_of(p);
  const std::string name = o.functional.empty() ? "psi" : o.functional;
  std::optional<Functional> sampled;
  const Functional* psi = nullptr;
  const bool sample = o.has_rep_dim || p.functionals.count(name) == 0;
  unsigned degree = 0;
  if (sample) {
    degree = degree_option(o, &p).value_or(4);
    SampleOptions so;
    so.rep_dim = o.has_rep_dim ? o.rep_dim
                               : (p.params.contains("rep_dim")
                                      ? parse_unsigned(p.params["rep_dim"], "/params/rep_dim")
                                      : 2);
    so.components = U->applicable(D.base()->faces(), 1) ? 1 : 2;
    so.drift = o.drift;
    sampled = sample_generating_functional(seed_option(o, &p), D.base(), degree, so);
    psi = &*sampled;
    r["sampled"] = json{{"seed", seed_option(o, &p)}, {"rep_dim", so.rep_dim},
                        {"drift", so.drift}, {"table", table_json(*sampled)}};
  } else {
    psi = &functional_named(p, name);
    degree = degree_option(o, &p).value_or(psi->degree());
  }
  auto times = parse_times(o, &p);
  auto report = schoenberg_suite(U, D, *psi, times, degree);
  const auto& alg = *D.base();
  json points = json::array();
  for (const auto& pt : report.points) {
    points.push_back(json{{"t", rational_json(pt.t)}, {"restricted_state", positivity_json(alg, pt.verdict)}});
  }
  json res{{"product", U->name()},
           {"degree", degree},
           {"precondition", positivity_json(alg, report.precondition)},
           {"points", points},
           {"derivative_ok", report.derivative_ok}};
  if (report.derivative_witness) res["derivative_witness"] = format_word(alg, *report.derivative_witness);
  res["note"] = "certified on words up to half-degree " + std::to_string(degree / 2) +
                "; no violation found up to degree " + std::to_string(degree);
  r["results"] = res;
  return report.pass;
}

// ---------------------------------------------------------------------------
// selftest

AlgebraPtr self_adjoint(const std::vector<std::string>& ids) {
  std::vector<Generator> gens;
  for (const auto& id : ids) gens.push_back({id, 1, id});
  return FacedAlgebra::make(1, std::move(gens));
}

Functional semicircle(const AlgebraPtr& alg, unsigned degree) {
  Functional psi(alg, 1, degree);
  psi.set(0, {0, 0}, Scalar(1));
  return psi;
}

bool cmd_selftest(const Options& o, Report& r) {
  json items = json::array();
  bool all = true;
  auto item = [&](const std::string& name, const std::function<std::string()>& body) {
    bool pass = false;
    std::string detail;
    try {
      detail = body();
      pass = detail.empty();
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    all = all && pass;
    json entry{{"check", name}, {"pass", pass}};
    if (!pass) entry["detail"] = detail;
    items.push_back(entry);
  };
  const std::uint64_t seed = seed_option(o, nullptr);

  item("free product on a1 b1 a2 b2", [] {
    auto a = FacedAlgebra::make(1, {{"a1", 1, ""}, {"a2", 1, ""}});
    auto b = FacedAlgebra::make(1, {{"b1", 1, ""}, {"b2", 1, ""}});
    auto ab = free_product(a, b);
    auto got = eval_product_symbolic(*make_product("free"), *ab, parse_word(*ab, "a1@1 b1@2 a2@1 b2@2"), 1)[0];
    auto sym = [](std::uint32_t f, Word w) { return SymbolicPolynomial::symbol({f, 0, std::move(w)}); };
    auto expected = sym(1, {0, 1}) * sym(2, {0}) * sym(2, {1}) + sym(1, {0}) * sym(1, {1}) * sym(2, {0, 1}) -
                    sym(1, {0}) * sym(1, {1}) * sym(2, {0}) * sym(2, {1});
    return got == expected ? std::string() : "got " + got.str();
  });

  item("sigma of the free product on a1 b1 a2 b2", [] {
    auto a = FacedAlgebra::make(1, {{"a1", 1, ""}, {"a2", 1, ""}});
    auto b = FacedAlgebra::make(1, {{"b1", 1, ""}, {"b2", 1, ""}});
    auto ab = free_product(a, b);
    auto t = extract_sigma(*make_product("free"), *ab, 1,
                           SymWord::single(0, parse_word(*ab, "a1@1 b1@2 a2@1 b2@2")));
    TensorElement expected;
    SymWord a12 = SymWord::single(0, {0, 1});
    SymWord a1a2({{0, {0}}, {0, {1}}});
    SymWord b12 = SymWord::single(0, {0, 1});
    SymWord b1b2({{0, {0}}, {0, {1}}});
    add_to(expected, a12, b1b2, Scalar(1));
    add_to(expected, a1a2, b12, Scalar(1));
    add_to(expected, a1a2, b1b2, Scalar(-1));
    return t == expected ? std::string() : "unexpected σ";
  });

  item("axioms of the built-in products", [seed] {
    std::string failed;
    for (const auto& name : builtin_product_names()) {
      auto U = make_product(name);
      AxiomOptions opt;
      opt.trials = 10;
      opt.max_len = 4;
      opt.seed = seed;
      opt.d = name == "cfree" ? 2 : 1;
      auto a = check_axioms(*U, opt);
      if (!a.pass()) failed += name + ": " + a.failures.front().law + " at " + a.failures.front().witness + "; ";
    }
    return failed;
  });

  item("semicircle exponentials", [] {
    auto x = self_adjoint({"x"});
    auto D = DualSemigroup::primitive(x);
    auto psi = semicircle(x, 4);
    const std::map<std::string, std::pair<Scalar, Scalar>> expected{
        {"free", {Scalar(1), Scalar(2)}},
        {"tensor", {Scalar(1), Scalar(3)}},
        {"boolean", {Scalar(1), Scalar(1)}},
        {"monotone", {Scalar(1), Scalar(Rational(3, 2))}},
        {"antimonotone", {Scalar(1), Scalar(Rational(3, 2))}}};
    std::string failed;
    for (const auto& [name, want] : expected) {
      auto e = exp_dual(make_product(name), D, psi, 4).table;
      if (e.value(0, {0, 0}) != want.first || e.value(0, {0, 0, 0, 0}) != want.second) {
        failed += name + " gives x^4 -> " + e.value(0, {0, 0, 0, 0}).pretty() + "; ";
      }
    }
    return failed;
  });

  item("intertwining and induced bialgebra laws", [seed] {
    std::string failed;
    auto alg = self_adjoint({"x", "y"});
    auto D = DualSemigroup::primitive(alg);
    for (const auto& name : builtin_product_names()) {
      std::size_t d = name == "cfree" ? 2 : 1;
      Rng rng(seed);
      auto phi1 = random_functional(rng, alg, d, 3);
      auto phi2 = random_functional(rng, alg, d, 3);
      InducedBialgebra IB(D, make_product(name), d);
      if (!check_intertwine(IB, phi1, phi2, 3).pass) failed += name + ": intertwining; ";
      if (!check_delta_counit(IB, 3).pass) failed += name + ": counit; ";
      if (!check_delta_coassoc(IB, 3).pass) failed += name + ": coassociativity; ";
    }
    return failed;
  });

  item("semigroup law and linear coefficient", [seed] {
    std::string failed;
    auto x = self_adjoint({"x"});
    auto D = DualSemigroup::primitive(x);
    for (const auto& name : builtin_product_names()) {
      std::size_t d = name == "cfree" ? 2 : 1;
      Rng rng(seed);
      auto psi = random_functional(rng, x, d, 4);
      if (!check_semigroup_law(make_product(name), D, psi, 4).pass) failed += name + "; ";
    }
    return failed;
  });

  item("exact PSD decisions", [] {
    Matrix m{{Scalar(1), Scalar(1)}, {Scalar(1), Scalar(0)}};
    auto v = psd_exact(m);
    if (v.psd || !v.witness || *v.witness != std::vector<Scalar>{Scalar(1), Scalar(-1)} ||
        v.witness_value != Rational(-1)) {
      return std::string("[[1,1],[1,0]] not refuted with witness (1,-1)");
    }
    Matrix h{{Scalar(2), Scalar::i()}, {-Scalar::i(), Scalar(2)}};
    auto w = psd_exact(h);
    if (!w.psd || w.pivots.size() != 2 || w.pivots[1].second != Rational(3, 2)) {
      return std::string("[[2,i],[-i,2]] not certified with pivots 2, 3/2");
    }
    return std::string();
  });

  item("Schoenberg harness on sampled generators", [seed] {
    std::string failed;
    std::vector<Generator> gens{{"a", 1, "b"}, {"b", 1, "a"}};
    auto alg = FacedAlgebra::make(1, gens);
    auto D = DualSemigroup::primitive(alg);
    const std::vector<Rational> times{Rational(1, 10), Rational(1), Rational(10)};
    for (const auto& name : builtin_product_names()) {
      SampleOptions so;
      so.rep_dim = 2;
      so.components = name == "cfree" ? 2 : 1;
      auto psi = sample_generating_functional(seed, alg, 4, so);
      if (!schoenberg_suite(make_product(name), D, psi, times, 4).pass) failed += name + "; ";
    }
    return failed;
  });

  item("Trotter deviation for the free semicircle", [] {
    auto x = self_adjoint({"x"});
    auto D = DualSemigroup::primitive(x);
    auto psi = semicircle(x, 4);
    auto U = make_product("free");
    auto ref = exp_dual(U, D, psi, 4).table;
    Rational prev(-1);
    for (unsigned n : {1u, 2u, 4u, 8u}) {
      auto dev = trotter(U, D, psi, n, 4, ref).deviation.at({0, 0, 0, 0});
      if (prev.sign() >= 0 && !(dev < prev)) return "not decreasing at n = " + std::to_string(n);
      prev = dev;
    }
    return std::string();
  });

  r["results"] = items;
  return all;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Universal products on dual semigroups: exact convolution calculus and positivity checks"};
  app.name("uniprod");
  app.require_subcommand(1);
  Options o;

  struct Command {
    const char* name;
    const char* help;
    bool needs_spec;
  };
  const std::vector<Command> commands{
      {"eval-product", "evaluate phi1 ⊙ phi2 on words over the free product", true},
      {"convolve", "phi1 ⋆ phi2 on the dual semigroup", true},
      {"exp", "convolution exponential of psi", true},
      {"exp-poly", "exp(t psi) as polynomials in t", true},
      {"trotter", "Trotter approximants and their deviation from exp(psi)", true},
      {"sigma", "σ of a universal product on a word of the free product", true},
      {"check-axioms", "universality, associativity and restriction on random data", false},
      {"check-state", "is phi a restricted state (at half of --degree)", true},
      {"check-generator", "is psi a restricted generating functional", true},
      {"schoenberg", "exp(t psi) is a restricted state for each t", true},
      {"selftest", "run the built-in invariant battery", false}};

  std::map<std::string, CLI::App*> subs;
  for (const auto& c : commands) {
    auto* sub = app.add_subcommand(c.name, c.help);
    auto* spec = sub->add_option("spec", o.spec, "problem file (JSON)");
    if (c.needs_spec) spec->required()->check(CLI::ExistingFile);
    sub->add_option("--product", o.product, "tensor, free, boolean, monotone, antimonotone, cfree");
    sub->add_option("--degree", o.degree, "truncation degree");
    sub->add_option("--times", o.times, "comma separated positive rationals, e.g. 1/10,1,10");
    sub->add_option("--steps", o.steps, "comma separated Trotter step counts");
    sub->add_option("--seed", o.seed, "random seed");
    sub->add_option("--rep-dim", o.rep_dim, "dimension of sampled representations");
    sub->add_option("--json-out", o.json_out, "also write the report to this file");
    sub->add_option("--word", o.words, "word (repeatable)");
    sub->add_option("--trials", o.trials, "random trials for check-axioms");
    sub->add_option("--max-len", o.max_len, "word length for check-axioms");
    sub->add_option("--functional", o.functional, "name of the functional in the problem file");
    sub->add_flag("--drift", o.drift, "add a hermitian drift to sampled generators");
    subs[c.name] = sub;
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e, out, err);
    return rc == 0 ? kExitPass : kExitInputError;
  }

  std::string command;
  CLI::App* sub = nullptr;
  for (const auto& [name, s] : subs) {
    if (s->parsed()) {
      command = name;
      sub = s;
    }
  }
  o.has_degree = sub->count("--degree") > 0;
  o.has_seed = sub->count("--seed") > 0;
  o.has_rep_dim = sub->count("--rep-dim") > 0;
  o.has_times = sub->count("--times") > 0;
  o.has_steps = sub->count("--steps") > 0;

  Report report;
  report["command"] = command;
  json echo = json::object();
  if (!o.spec.empty()) echo["spec"] = o.spec;
  for (const char* flag : {"--product", "--degree", "--times", "--steps", "--seed", "--rep-dim",
                           "--word", "--trials", "--max-len", "--functional", "--drift"}) {
    if (sub->count(flag) == 0) continue;
    auto* opt = sub->get_option(flag);
    auto values = opt->results();
    echo[std::string(flag).substr(2)] = values.size() == 1 ? json(values.front()) : json(values);
  }
  report["options"] = echo;

  auto t0 = std::chrono::steady_clock::now();
  int code = kExitPass;
  try {
    bool pass = false;
    if (command == "eval-product") pass = cmd_eval_product(o, report);
    else if (command == "convolve") pass = cmd_convolve(o, report);
    else if (command == "exp") pass = cmd_exp(o, report);
    else if (command == "exp-poly") pass = cmd_exp_poly(o, report);
    else if (command == "trotter") pass = cmd_trotter(o, report);
    else if (command == "sigma") pass = cmd_sigma(o, report);
    else if (command == "check-axioms") pass = cmd_check_axioms(o, report);
    else if (command == "check-state") pass = cmd_positivity(o, report, true);
    else if (command == "check-generator") pass = cmd_positivity(o, report, false);
    else if (command == "schoenberg") pass = cmd_schoenberg(o, report);
    else if (command == "selftest") pass = cmd_selftest(o, report);
    report["pass"] = pass;
    code = pass ? kExitPass : kExitVerdictFailed;
  } catch (const SchemaError& e) {
    report["error"] = json{{"kind", "schema"}, {"pointer", e.pointer()}, {"message", e.what()}};
    code = kExitInputError;
  } catch (const TruncationError& e) {
    report["error"] = json{{"kind", "truncation"}, {"word", e.word()}, {"message", e.what()}};
    code = kExitInputError;
  } catch (const InputError& e) {
    report["error"] = json{{"kind", "input"}, {"message", e.what()}};
    code = kExitInputError;
  } catch (const Error& e) {
    report["error"] = json{{"kind", "internal"}, {"message", e.what()}};
    code = kExitInputError;
  }
  report["exit_code"] = code;
  report["timing_ms"] =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();

  const std::string body = report.dump(2) + "\n";
  out << body;
  if (code == kExitInputError && report.contains("error")) {
    err << "uniprod: " << report["error"]["message"].get<std::string>() << "\n";
  }
  if (!o.json_out.empty()) {
    std::ofstream f(o.json_out, std::ios::binary);
    if (!f) {
      err << "uniprod: cannot write " << o.json_out << "\n";
      return kExitInputError;
    }
    f << body;
  }
  return code;
}

}  // namespace uniprod::cli
