#pragma once

/// The `uniprod` command line: JSON problem files in, JSON reports out.
/// Exit codes: 0 all verdicts pass, 1 a mathematical verdict failed,
/// 2 input or usage error.

#include <ostream>
#include <string>
#include <vector>

namespace uniprod::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitVerdictFailed = 1;
inline constexpr int kExitInputError = 2;

/// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// 64-bit FNV-1a of the bytes, as 16 hex digits.
std::string fnv1a_hex(const std::string& bytes);

}  // namespace uniprod::cli
