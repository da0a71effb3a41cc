#pragma once

#include <cstdint>
#include <vector>

namespace uniprod {

using GenIndex = std::uint32_t;

/// A basis word of a free algebra: generator indices, left to right.
using Word = std::vector<GenIndex>;

/// Graded lexicographic order: shorter words first, then lexicographic.
inline bool graded_less(const Word& a, const Word& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

}  // namespace uniprod
