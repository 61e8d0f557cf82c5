#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace bqual {

/// Root of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Mismatched variable sets, foreign universes, malformed transitions.
class StructuralError : public Error {
 public:
  using Error::Error;
};

struct SourceLocation {
  std::size_t line = 1;
  std::size_t column = 1;
};

/// Lexing, parsing and name-resolution failures. Always located.
class SyntaxError : public Error {
 public:
  SyntaxError(std::string message, SourceLocation where, std::vector<std::string> expected = {});

  const SourceLocation& where() const noexcept { return where_; }
  const std::string& detail() const noexcept { return detail_; }
  const std::vector<std::string>& expected() const noexcept { return expected_; }
  const std::string& file() const noexcept { return file_; }

  /// Same error, reported as `file:line:col: ...`.
  SyntaxError in_file(std::string file) const;

 private:
  std::string file_;
  std::string detail_;
  SourceLocation where_;
  std::vector<std::string> expected_;
};

/// A variable (or ANY-bound identifier) whose finite domain cannot be read off its predicate.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Ill-typed or overflowing evaluation of an expression or predicate.
class EvalError : public Error {
 public:
  using Error::Error;
};

class ExplorationError : public Error {
 public:
  using Error::Error;
};

/// A metric whose denominator is empty. Reports render these as "not-computed".
class MetricError : public Error {
 public:
  using Error::Error;
};

/// Raised by the alignment complexity guard.
class AlignmentSizeError : public Error {
 public:
  using Error::Error;
};

class PlanError : public Error {
 public:
  using Error::Error;
};

/// Bad input files or configuration.
class InputError : public Error {
 public:
  using Error::Error;
};

}  // namespace bqual
