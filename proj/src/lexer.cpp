#include <cctype>
#include <charconv>
#include <string>
#include <unordered_map>

#include "bqual/frontend.hpp"

namespace bqual {

namespace {

const std::unordered_map<std::string_view, TokenKind>& keywords() {
  static const std::unordered_map<std::string_view, TokenKind> table = {
      {"MACHINE", TokenKind::kw_machine},
      {"SETS", TokenKind::kw_sets},
      {"VARIABLES", TokenKind::kw_variables},
      {"INVARIANT", TokenKind::kw_invariant},
      {"INITIALISATION", TokenKind::kw_initialisation},
      {"OPERATIONS", TokenKind::kw_operations},
      {"PRE", TokenKind::kw_pre},
      {"SELECT", TokenKind::kw_select},
      {"WHEN", TokenKind::kw_when},
      {"ANY", TokenKind::kw_any},
      {"WHERE", TokenKind::kw_where},
      {"THEN", TokenKind::kw_then},
      {"END", TokenKind::kw_end},
      {"skip", TokenKind::kw_skip},
      {"not", TokenKind::kw_not},
      {"or", TokenKind::kw_or},
  };
  return table;
}

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  LexResult run() {
    LexResult out;
    while (true) {
      skip_blank(out);
      SourceToken tok;
      tok.where = here();
      if (pos_ >= src_.size()) {
        tok.kind = TokenKind::eof;
        out.tokens.push_back(std::move(tok));
        return out;
      }
      const char c = src_[pos_];
      if (ident_start(c)) {
        const std::size_t start = pos_;
        while (pos_ < src_.size() && ident_char(src_[pos_])) advance();
        tok.text = std::string(src_.substr(start, pos_ - start));
        auto it = keywords().find(tok.text);
        tok.kind = it == keywords().end() ? TokenKind::identifier : it->second;
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        const std::size_t start = pos_;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) advance();
        tok.text = std::string(src_.substr(start, pos_ - start));
        auto [ptr, ec] = std::from_chars(tok.text.data(), tok.text.data() + tok.text.size(), tok.integer);
        if (ec != std::errc{}) throw SyntaxError("integer literal out of range: " + tok.text, tok.where);
        tok.kind = TokenKind::integer;
      } else {
        tok.kind = punctuation(tok.where);
        tok.text = std::string(describe(tok.kind));
      }
      out.tokens.push_back(std::move(tok));
    }
  }

 private:
  SourceLocation here() const { return {line_, column_}; }

  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  bool at(std::string_view s) const { return src_.substr(pos_, s.size()) == s; }

  void skip_blank(LexResult& out) {
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else if (at("(*")) {
        const SourceLocation start = here();
        advance();
        advance();
        while (pos_ < src_.size() && !at("*)")) advance();
        if (pos_ >= src_.size()) throw SyntaxError("unterminated comment", start);
        advance();
        advance();
        ++out.comment_spans;
      } else if (at("//")) {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
        ++out.comment_spans;
      } else {
        return;
      }
    }
  }

  TokenKind punctuation(SourceLocation where) {
    struct Op {
      std::string_view text;
      TokenKind kind;
    };
    // Longest match first.
    static constexpr Op ops[] = {
        {":=", TokenKind::assign}, {"/=", TokenKind::ne},       {"<=", TokenKind::le},
        {">=", TokenKind::ge},     {"..", TokenKind::dotdot},   {"||", TokenKind::parallel},
        {"=", TokenKind::eq},      {"<", TokenKind::lt},        {">", TokenKind::gt},
        {"&", TokenKind::amp},     {":", TokenKind::colon},     {";", TokenKind::semicolon},
        {",", TokenKind::comma},   {"+", TokenKind::plus},      {"-", TokenKind::minus},
        {"*", TokenKind::star},    {"(", TokenKind::lparen},    {")", TokenKind::rparen},
        {"{", TokenKind::lbrace},  {"}", TokenKind::rbrace},
    };
    for (const auto& op : ops) {
      if (at(op.text)) {
        for (std::size_t i = 0; i < op.text.size(); ++i) advance();
        return op.kind;
      }
    }
    const auto byte = static_cast<unsigned char>(src_[pos_]);
    std::string shown = std::isprint(byte) ? std::string(1, src_[pos_]) : "\\x" + hex(byte);
    throw SyntaxError("illegal character '" + shown + "'", where);
  }

  static std::string hex(unsigned char b) {
    static constexpr char digits[] = "0123456789abcdef";
    return {digits[b >> 4], digits[b & 0xf]};
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
};

}  // namespace

LexResult tokenize(std::string_view source) { return Lexer(source).run(); }

std::string_view describe(TokenKind kind) {
  switch (kind) {
    case TokenKind::kw_machine: return "MACHINE";
    case TokenKind::kw_sets: return "SETS";
    case TokenKind::kw_variables: return "VARIABLES";
    case TokenKind::kw_invariant: return "INVARIANT";
    case TokenKind::kw_initialisation: return "INITIALISATION";
    case TokenKind::kw_operations: return "OPERATIONS";
    case TokenKind::kw_pre: return "PRE";
    case TokenKind::kw_select: return "SELECT";
    case TokenKind::kw_when: return "WHEN";
    case TokenKind::kw_any: return "ANY";
    case TokenKind::kw_where: return "WHERE";
    case TokenKind::kw_then: return "THEN";
    case TokenKind::kw_end: return "END";
    case TokenKind::kw_skip: return "skip";
    case TokenKind::kw_not: return "not";
    case TokenKind::kw_or: return "or";
    case TokenKind::identifier: return "identifier";
    case TokenKind::integer: return "integer";
    case TokenKind::assign: return ":=";
    case TokenKind::eq: return "=";
    case TokenKind::ne: return "/=";
    case TokenKind::lt: return "<";
    case TokenKind::le: return "<=";
    case TokenKind::gt: return ">";
    case TokenKind::ge: return ">=";
    case TokenKind::amp: return "&";
    case TokenKind::colon: return ":";
    case TokenKind::dotdot: return "..";
    case TokenKind::semicolon: return ";";
    case TokenKind::comma: return ",";
    case TokenKind::plus: return "+";
    case TokenKind::minus: return "-";
    case TokenKind::star: return "*";
    case TokenKind::lparen: return "(";
    case TokenKind::rparen: return ")";
    case TokenKind::lbrace: return "{";
    case TokenKind::rbrace: return "}";
    case TokenKind::parallel: return "||";
    case TokenKind::eof: return "end of input";
  }
  return "?";
}

std::size_t word_count(std::string_view source) {
  std::string stripped;
  stripped.reserve(source.size());
  std::size_t i = 0;
  while (i < source.size()) {
    if (source.substr(i, 2) == "(*") {
      const auto close = source.find("*)", i + 2);
      i = close == std::string_view::npos ? source.size() : close + 2;
      stripped.push_back(' ');
    } else if (source.substr(i, 2) == "//") {
      const auto nl = source.find('\n', i);
      i = nl == std::string_view::npos ? source.size() : nl;
      stripped.push_back(' ');
    } else {
      stripped.push_back(source[i++]);
    }
  }
  std::size_t words = 0;
  bool in_word = false;
  for (char c : stripped) {
    const bool space = std::isspace(static_cast<unsigned char>(c)) != 0;
    if (!space && !in_word) ++words;
    in_word = !space;
  }
  return words;
}

}  // namespace bqual
