#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qfse {

/// Invalid argument to a public operation (empty references, k < 1, ...).
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Operation not valid in the current session state (e.g. repeat with no history).
class StateError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Corpus could not be ingested.
class IngestError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input file. `line()` is 1-based, 0 when not applicable.
class FormatError : public std::runtime_error {
 public:
  FormatError(const std::string& what, std::size_t line = 0)
      : std::runtime_error(line ? what + " (line " + std::to_string(line) + ")" : what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace qfse
