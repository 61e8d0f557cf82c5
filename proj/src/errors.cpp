#include "bqual/errors.hpp"

#include <sstream>

namespace bqual {

namespace {

std::string located(const std::string& file, const std::string& message, SourceLocation where,
                    const std::vector<std::string>& expected) {
  std::ostringstream out;
  if (!file.empty()) out << file << ':';
  out << where.line << ':' << where.column << ": " << message;
  if (!expected.empty()) {
    out << " (expected ";
    for (std::size_t i = 0; i < expected.size(); ++i) {
      if (i != 0) out << (i + 1 == expected.size() ? " or " : ", ");
      out << expected[i];
    }
    out << ')';
  }
  return out.str();
}

}  // namespace

SyntaxError::SyntaxError(std::string message, SourceLocation where,
                         std::vector<std::string> expected)
    : Error(located({}, message, where, expected)),
      detail_(std::move(message)),
      where_(where),
      expected_(std::move(expected)) {}

SyntaxError SyntaxError::in_file(std::string file) const {
  SyntaxError copy(detail_, where_, expected_);
  static_cast<Error&>(copy) = Error(located(file, detail_, where_, expected_));
  copy.file_ = std::move(file);
  return copy;
}

}  // namespace bqual
