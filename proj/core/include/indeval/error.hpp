#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace indeval {

/// Base class for data-level failures: malformed input, unknown ids, items
/// missing what an operation needs. Bad parameters (a probability outside
/// [0,1], an empty sample size) are reported as std::invalid_argument instead.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A record in a JSONL stream could not be accepted. line() is 1-based.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& message)
      : Error("line " + std::to_string(line) + ": " + message), line_(line) {}

  [[nodiscard]] std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Corpus content violates an operation's precondition (e.g. an item without
/// ratings passed to a gold-label metric).
class DataError : public Error {
 public:
  using Error::Error;
};

}  // namespace indeval
