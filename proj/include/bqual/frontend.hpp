#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "bqual/errors.hpp"
#include "bqual/machine.hpp"

namespace bqual {

enum class TokenKind {
  // keywords
  kw_machine, kw_sets, kw_variables, kw_invariant, kw_initialisation, kw_operations,
  kw_pre, kw_select, kw_when, kw_any, kw_where, kw_then, kw_end, kw_skip, kw_not, kw_or,
  // atoms
  identifier, integer,
  // operators and punctuation
  assign,        // :=
  eq, ne,        // = /=
  lt, le, gt, ge,
  amp,           // &
  colon,         // :
  dotdot,        // ..
  semicolon, comma, plus, minus, star,
  lparen, rparen, lbrace, rbrace,
  parallel,      // ||
  eof,
};

struct SourceToken {
  TokenKind kind = TokenKind::eof;
  std::string text;
  std::int64_t integer = 0;
  SourceLocation where;
};

struct LexResult {
  std::vector<SourceToken> tokens;  // terminated by an eof token
  std::size_t comment_spans = 0;    // (* ... *) and // comments skipped
};

/// Throws SyntaxError on an illegal character, an unterminated comment or an
/// out-of-range integer literal.
LexResult tokenize(std::string_view source);

std::string_view describe(TokenKind kind);

/// Parses and validates a machine: declaration-order clauses, pairwise-distinct names,
/// no undeclared references. Throws SyntaxError.
MachineAST parse_machine(std::string_view source);

/// Parses a standalone predicate over `machine`'s variables and enumerated sets.
PredPtr parse_predicate(std::string_view source, const MachineAST& machine);

/// Canonical source text; parse_machine(to_source(m)) reproduces m.
std::string to_source(const MachineAST& machine);
std::string to_source(const Predicate& p);
std::string to_source(const Expression& e);
std::string to_source(const Substitution& s, int indent = 0);

/// Whitespace-delimited chunks after stripping (* ... *) and // comments. Never throws;
/// an unterminated block comment swallows the rest of the text.
std::size_t word_count(std::string_view source);

}  // namespace bqual
