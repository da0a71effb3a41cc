#pragma once

// Reference computations that share no code with the library recursions:
// set-partition enumeration, moment-cumulant expansions for the free and
// Boolean products, and pair-partition counts for the central limit moments.

#include <algorithm>
#include <functional>
#include <map>
#include <vector>

#include "uniprod/coefficients.hpp"

namespace oracle {

using uniprod::Rational;
using uniprod::Scalar;

using Block = std::vector<int>;
using Partition = std::vector<Block>;

/// All set partitions of {0, ..., n-1}, blocks sorted by least element.
inline std::vector<Partition> set_partitions(int n) {
  std::vector<Partition> out;
  std::vector<int> label(n, 0);
  std::function<void(int, int)> rec = [&](int i, int used) {
    if (i == n) {
      Partition p(used);
      for (int j = 0; j < n; ++j) p[label[j]].push_back(j);
      out.push_back(p);
      return;
    }
    for (int b = 0; b <= used; ++b) {
      label[i] = b;
      rec(i + 1, std::max(used, b + 1));
    }
  };
  if (n == 0) return {Partition{}};
  rec(0, 0);
  return out;
}

inline bool noncrossing(const Partition& p) {
  for (std::size_t x = 0; x < p.size(); ++x) {
    for (std::size_t y = 0; y < p.size(); ++y) {
      if (x == y) continue;
      for (int a : p[x]) {
        for (int c : p[x]) {
          for (int b : p[y]) {
            for (int d : p[y]) {
              if (a < b && b < c && c < d) return false;
            }
          }
        }
      }
    }
  }
  return true;
}

inline bool interval(const Partition& p) {
  for (const auto& b : p) {
    if (b.back() - b.front() + 1 != static_cast<int>(b.size())) return false;
  }
  return true;
}

inline bool pairing(const Partition& p) {
  return std::all_of(p.begin(), p.end(), [](const Block& b) { return b.size() == 2; });
}

/// Nesting forest of a noncrossing pairing: tree factorial Π |subtree|.
inline long tree_factorial(const Partition& p) {
  long out = 1;
  for (const auto& b : p) {
    long size = 0;
    for (const auto& c : p) {
      if (c.front() >= b.front() && c.back() <= b.back()) ++size;
    }
    out *= size;
  }
  return out;
}

/// m_{2n} of the free, tensor, Boolean and monotone central limit laws.
inline Rational semicircle_moment(int n2) {
  long c = 0;
  for (const auto& p : set_partitions(n2)) c += pairing(p) && noncrossing(p);
  return Rational(c);
}
inline Rational gaussian_moment(int n2) {
  long c = 0;
  for (const auto& p : set_partitions(n2)) c += pairing(p);
  return Rational(c);
}
inline Rational bernoulli_moment(int n2) {
  long c = 0;
  for (const auto& p : set_partitions(n2)) c += pairing(p) && interval(p);
  return Rational(c);
}
inline Rational arcsine_moment(int n2) {
  Rational c;
  for (const auto& p : set_partitions(n2)) {
    if (pairing(p) && noncrossing(p)) c += Rational(1, tree_factorial(p));
  }
  return c;
}

/// A letter of a mixed word: leg (1 or 2) and generator index in that leg.
struct Letter {
  unsigned leg;
  unsigned gen;
};

using Moment = std::function<Scalar(const std::vector<unsigned>&)>;

/// Cumulants defined by φ(w) = Σ_{π admissible} Π κ(w|B), memoized per word.
class Cumulants {
 public:
  Cumulants(Moment phi, std::function<bool(const Partition&)> admissible)
      : phi_(std::move(phi)), admissible_(std::move(admissible)) {}

  Scalar operator()(const std::vector<unsigned>& w) {
    if (auto it = memo_.find(w); it != memo_.end()) return it->second;
    const int n = static_cast<int>(w.size());
    Scalar k = phi_(w);
    for (const auto& p : set_partitions(n)) {
      if (p.size() == 1 || !admissible_(p)) continue;
      Scalar term(1);
      for (const auto& b : p) {
        std::vector<unsigned> sub;
        for (int i : b) sub.push_back(w[i]);
        term *= (*this)(sub);
      }
      k -= term;
    }
    memo_.emplace(w, k);
    return k;
  }

 private:
  Moment phi_;
  std::function<bool(const Partition&)> admissible_;
  std::map<std::vector<unsigned>, Scalar> memo_;
};

/// Σ over admissible partitions with single-leg blocks of Π κ_leg(block):
/// mixed cumulants vanish for the free (noncrossing) and Boolean (interval)
/// products.
inline Scalar mixed_moment(const std::vector<Letter>& w, Cumulants& k1, Cumulants& k2,
                           const std::function<bool(const Partition&)>& admissible) {
  Scalar total;
  for (const auto& p : set_partitions(static_cast<int>(w.size()))) {
    if (!admissible(p)) continue;
    Scalar term(1);
    for (const auto& b : p) {
      unsigned leg = w[b.front()].leg;
      std::vector<unsigned> sub;
      for (int i : b) {
        if (w[i].leg != leg) {
          term = Scalar(0);
          break;
        }
        sub.push_back(w[i].gen);
      }
      if (term.is_zero()) break;
      term *= leg == 1 ? k1(sub) : k2(sub);
    }
    total += term;
  }
  return total;
}

/// Hermitian-form value x* G x with plain loops.
inline Scalar form(const std::vector<std::vector<Scalar>>& g, const std::vector<Scalar>& x) {
  Scalar acc;
  for (std::size_t i = 0; i < g.size(); ++i) {
    for (std::size_t j = 0; j < g.size(); ++j) acc += x[i].conj() * g[i][j] * x[j];
  }
  return acc;
}

}  // namespace oracle
