#pragma once

#include <stdexcept>
#include <string>

namespace uniprod {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A moment beyond the truncation degree of a functional was requested.
class TruncationError : public Error {
 public:
  TruncationError(const std::string& what, std::string word)
      : Error(what), word_(std::move(word)) {}
  const std::string& word() const noexcept { return word_; }

 private:
  std::string word_;
};

/// Malformed input: bad names, inconsistent algebras, unparsable scalars.
class InputError : public Error {
 public:
  using Error::Error;
};

}  // namespace uniprod
