#include <algorithm>
#include <limits>
#include <optional>
#include <set>

#include "bqual/frontend.hpp"

namespace bqual {

namespace {

bool is_reserved(std::string_view name) {
  return name == "BOOL" || name == "TRUE" || name == "FALSE" || name == "btrue" || name == "bfalse";
}

class Parser {
 public:
  explicit Parser(std::vector<SourceToken> tokens) : tokens_(std::move(tokens)) {}

  MachineAST machine() {
    expect(TokenKind::kw_machine);
    ast_.name = expect(TokenKind::identifier).text;

    if (accept(TokenKind::kw_sets)) {
      do {
        set_declaration();
      } while (accept(TokenKind::semicolon));
    }

    expect_one({TokenKind::kw_variables}, ast_.sets.empty() ? std::vector<TokenKind>{TokenKind::kw_sets}
                                                             : std::vector<TokenKind>{});
    do {
      const auto& tok = expect(TokenKind::identifier);
      declare_identifier(tok, "variable");
      ast_.variables.push_back(tok.text);
    } while (accept(TokenKind::comma));

    expect(TokenKind::kw_invariant);
    ast_.invariant = predicate();

    expect(TokenKind::kw_initialisation);
    ast_.initialisation = substitution();

    expect(TokenKind::kw_operations);
    if (peek().kind == TokenKind::identifier) {
      do {
        operation();
      } while (accept(TokenKind::semicolon));
    }
    expect(TokenKind::kw_end);
    expect(TokenKind::eof);
    return std::move(ast_);
  }

  PredPtr standalone_predicate(const MachineAST& machine) {
    ast_.name = machine.name;
    ast_.sets = machine.sets;
    ast_.variables = machine.variables;
    for (const auto& s : machine.sets) {
      names_.insert(s.name);
      for (const auto& e : s.elements) names_.insert(e);
    }
    for (const auto& v : machine.variables) names_.insert(v);
    PredPtr p = predicate();
    expect(TokenKind::eof);
    return p;
  }

 private:
  // -- token plumbing -------------------------------------------------------

  const SourceToken& peek(std::size_t ahead = 0) const {
    return tokens_[std::min(pos_ + ahead, tokens_.size() - 1)];
  }

  bool accept(TokenKind kind) {
    if (peek().kind != kind) return false;
    ++pos_;
    return true;
  }

  const SourceToken& expect(TokenKind kind) { return expect_one({kind}); }

  const SourceToken& expect_one(std::initializer_list<TokenKind> kinds, const std::vector<TokenKind>& also = {}) {
    for (TokenKind k : kinds) {
      if (peek().kind == k) return tokens_[pos_++];
    }
    std::vector<std::string> expected;
    for (TokenKind k : kinds) expected.emplace_back(describe(k));
    for (TokenKind k : also) expected.emplace_back(describe(k));
    fail_here(expected);
  }

  [[noreturn]] void fail_here(std::vector<std::string> expected) const {
    const auto& tok = peek();
    std::string found = tok.kind == TokenKind::eof ? "end of input" : "'" + tok.text + "'";
    throw SyntaxError("unexpected " + found, tok.where, std::move(expected));
  }

  // -- declarations ---------------------------------------------------------

  void declare_identifier(const SourceToken& tok, std::string_view what) {
    if (is_reserved(tok.text)) {
      throw SyntaxError("'" + tok.text + "' is reserved and cannot name a " + std::string(what), tok.where);
    }
    if (!names_.insert(tok.text).second) {
      throw SyntaxError("duplicate name '" + tok.text + "'", tok.where);
    }
  }

  void set_declaration() {
    EnumeratedSet set;
    const auto& name = expect(TokenKind::identifier);
    declare_identifier(name, "set");
    set.name = name.text;
    expect(TokenKind::eq);
    expect(TokenKind::lbrace);
    do {
      const auto& element = expect(TokenKind::identifier);
      declare_identifier(element, "set element");
      set.elements.push_back(element.text);
    } while (accept(TokenKind::comma));
    expect(TokenKind::rbrace);
    ast_.sets.push_back(std::move(set));
  }

  void operation() {
    const auto& name = expect(TokenKind::identifier);
    if (ast_.find_operation(name.text) != nullptr) {
      throw SyntaxError("duplicate operation '" + name.text + "'", name.where);
    }
    expect(TokenKind::eq);
    ast_.operations.push_back({name.text, substitution()});
  }

  // -- substitutions --------------------------------------------------------

  // ';' both sequences substitutions and separates operations; `ident =` after it
  // always starts a new operation because assignment is spelled ':='.
  bool operation_follows() const {
    return peek(1).kind == TokenKind::identifier && peek(2).kind == TokenKind::eq;
  }

  SubstPtr substitution() {
    const SourceLocation where = peek().where;
    std::vector<SubstPtr> parts{parallel_substitution()};
    while (peek().kind == TokenKind::semicolon && !operation_follows()) {
      ++pos_;
      parts.push_back(parallel_substitution());
    }
    if (parts.size() == 1) return parts.front();
    auto s = std::make_shared<Substitution>();
    s->kind = Substitution::Kind::sequence;
    s->parts = std::move(parts);
    s->where = where;
    return s;
  }

  SubstPtr parallel_substitution() {
    const SourceLocation where = peek().where;
    std::vector<SubstPtr> parts{basic_substitution()};
    while (accept(TokenKind::parallel)) parts.push_back(basic_substitution());
    if (parts.size() == 1) return parts.front();
    std::set<std::size_t> written;
    for (const auto& part : parts) {
      for (std::size_t slot : assigned_slots(*part)) {
        if (!written.insert(slot).second) {
          throw SyntaxError("parallel branches both assign '" + ast_.variables[slot] + "'", where);
        }
      }
    }
    auto s = std::make_shared<Substitution>();
    s->kind = Substitution::Kind::parallel;
    s->parts = std::move(parts);
    s->where = where;
    return s;
  }

  SubstPtr basic_substitution() {
    auto s = std::make_shared<Substitution>();
    s->where = peek().where;
    switch (peek().kind) {
      case TokenKind::kw_skip:
        ++pos_;
        s->kind = Substitution::Kind::skip;
        return s;
      case TokenKind::identifier: {
        const auto& target = tokens_[pos_++];
        if (bound_lookup(target.text)) {
          throw SyntaxError("cannot assign to bound identifier '" + target.text + "'", target.where);
        }
        auto slot = variable_slot(target.text);
        if (!slot) throw SyntaxError("assignment to undeclared variable '" + target.text + "'", target.where);
        expect(TokenKind::assign);
        s->kind = Substitution::Kind::assign;
        s->target = target.text;
        s->slot = *slot;
        s->value = expression();
        return s;
      }
      case TokenKind::kw_pre:
        ++pos_;
        s->kind = Substitution::Kind::precondition;
        s->guard = predicate();
        expect(TokenKind::kw_then);
        s->body = substitution();
        expect(TokenKind::kw_end);
        return s;
      case TokenKind::kw_select:
        ++pos_;
        s->kind = Substitution::Kind::select;
        do {
          Substitution::Branch branch;
          branch.guard = predicate();
          expect(TokenKind::kw_then);
          branch.body = substitution();
          s->branches.push_back(std::move(branch));
        } while (accept(TokenKind::kw_when));
        expect_one({TokenKind::kw_end}, {TokenKind::kw_when});
        return s;
      case TokenKind::kw_any: {
        ++pos_;
        s->kind = Substitution::Kind::any;
        std::vector<std::string> ids;
        do {
          const auto& id = expect(TokenKind::identifier);
          if (is_reserved(id.text) || names_.count(id.text) != 0 || bound_lookup(id.text) ||
              std::find(ids.begin(), ids.end(), id.text) != ids.end()) {
            throw SyntaxError("bound identifier '" + id.text + "' shadows an existing name", id.where);
          }
          ids.push_back(id.text);
        } while (accept(TokenKind::comma));
        s->bound_base = ast_.variables.size() + bound_depth_;
        s->bound = ids;
        scopes_.push_back(ids);
        bound_depth_ += ids.size();
        ast_.bound_slots = std::max(ast_.bound_slots, bound_depth_);
        expect(TokenKind::kw_where);
        s->guard = predicate();
        expect(TokenKind::kw_then);
        s->body = substitution();
        expect(TokenKind::kw_end);
        bound_depth_ -= ids.size();
        scopes_.pop_back();
        return s;
      }
      default:
        fail_here({"skip", "identifier", "PRE", "SELECT", "ANY"});
    }
  }

  // -- predicates -----------------------------------------------------------

  PredPtr predicate() {
    PredPtr left = conjunction();
    while (peek().kind == TokenKind::kw_or) {
      const SourceLocation where = peek().where;
      ++pos_;
      left = binary(Predicate::Kind::disjunction, left, conjunction(), where);
    }
    return left;
  }

  PredPtr conjunction() {
    PredPtr left = unary_predicate();
    while (peek().kind == TokenKind::amp) {
      const SourceLocation where = peek().where;
      ++pos_;
      left = binary(Predicate::Kind::conjunction, left, unary_predicate(), where);
    }
    return left;
  }

  static PredPtr binary(Predicate::Kind kind, PredPtr l, PredPtr r, SourceLocation where) {
    auto p = std::make_shared<Predicate>();
    p->kind = kind;
    p->left = std::move(l);
    p->right = std::move(r);
    p->where = where;
    return p;
  }

  static bool continues_expression(TokenKind k) {
    switch (k) {
      case TokenKind::plus: case TokenKind::minus: case TokenKind::star:
      case TokenKind::eq: case TokenKind::ne: case TokenKind::lt: case TokenKind::le:
      case TokenKind::gt: case TokenKind::ge: case TokenKind::colon: case TokenKind::dotdot:
        return true;
      default:
        return false;
    }
  }

  PredPtr unary_predicate() {
    const SourceLocation where = peek().where;
    if (accept(TokenKind::kw_not)) {
      auto p = std::make_shared<Predicate>();
      p->kind = Predicate::Kind::negation;
      p->left = unary_predicate();
      p->where = where;
      return p;
    }
    if (peek().kind == TokenKind::lparen) {
      // A parenthesised predicate, unless the parentheses turn out to group an expression.
      const std::size_t saved = pos_;
      try {
        ++pos_;
        PredPtr inner = predicate();
        expect(TokenKind::rparen);
        if (!continues_expression(peek().kind)) return inner;
      } catch (const SyntaxError&) {
      }
      pos_ = saved;
    }
    return atomic_predicate();
  }

  PredPtr atomic_predicate() {
    auto p = std::make_shared<Predicate>();
    p->where = peek().where;
    if (peek().kind == TokenKind::identifier && (peek().text == "btrue" || peek().text == "bfalse")) {
      p->kind = peek().text == "btrue" ? Predicate::Kind::truth : Predicate::Kind::falsity;
      ++pos_;
      return p;
    }
    p->lhs = expression();
    const auto op = peek().kind;
    switch (op) {
      case TokenKind::eq: p->op = CompareOp::eq; break;
      case TokenKind::ne: p->op = CompareOp::ne; break;
      case TokenKind::lt: p->op = CompareOp::lt; break;
      case TokenKind::le: p->op = CompareOp::le; break;
      case TokenKind::gt: p->op = CompareOp::gt; break;
      case TokenKind::ge: p->op = CompareOp::ge; break;
      case TokenKind::colon: {
        ++pos_;
        if (peek().kind == TokenKind::identifier && peek(1).kind != TokenKind::dotdot &&
            (peek().text == "BOOL" || ast_.find_set(peek().text) != nullptr)) {
          p->kind = Predicate::Kind::in_set;
          p->set_name = tokens_[pos_++].text;
          return p;
        }
        p->kind = Predicate::Kind::in_range;
        p->low = expression();
        expect(TokenKind::dotdot);
        p->high = expression();
        return p;
      }
      default:
        fail_here({"=", "/=", "<", "<=", ">", ">=", ":"});
    }
    ++pos_;
    p->kind = Predicate::Kind::compare;
    p->rhs = expression();
    return p;
  }

  // -- expressions ----------------------------------------------------------

  ExprPtr expression() {
    ExprPtr left = term();
    while (peek().kind == TokenKind::plus || peek().kind == TokenKind::minus) {
      const auto& op = tokens_[pos_++];
      left = arith(op.kind == TokenKind::plus ? Expression::Kind::add : Expression::Kind::subtract, left, term(),
                   op.where);
    }
    return left;
  }

  ExprPtr term() {
    ExprPtr left = factor();
    while (peek().kind == TokenKind::star) {
      const auto& op = tokens_[pos_++];
      left = arith(Expression::Kind::multiply, left, factor(), op.where);
    }
    return left;
  }

  static ExprPtr arith(Expression::Kind kind, ExprPtr l, ExprPtr r, SourceLocation where) {
    auto e = std::make_shared<Expression>();
    e->kind = kind;
    e->lhs = std::move(l);
    e->rhs = std::move(r);
    e->where = where;
    return e;
  }

  ExprPtr factor() {
    auto e = std::make_shared<Expression>();
    const auto& tok = peek();
    e->where = tok.where;
    switch (tok.kind) {
      case TokenKind::minus: {
        ++pos_;
        ExprPtr operand = factor();
        if (operand->kind == Expression::Kind::literal && operand->literal.is_integer() &&
            operand->literal.as_integer() != std::numeric_limits<std::int64_t>::min()) {
          e->kind = Expression::Kind::literal;
          e->literal = Value::integer(-operand->literal.as_integer());
          return e;
        }
        e->kind = Expression::Kind::negate;
        e->lhs = std::move(operand);
        return e;
      }
      case TokenKind::integer:
        ++pos_;
        e->kind = Expression::Kind::literal;
        e->literal = Value::integer(tok.integer);
        return e;
      case TokenKind::lparen: {
        ++pos_;
        ExprPtr inner = expression();
        expect(TokenKind::rparen);
        return inner;
      }
      case TokenKind::identifier:
        ++pos_;
        resolve(*e, tok);
        return e;
      default:
        fail_here({"integer", "identifier", "(", "-"});
    }
  }

  void resolve(Expression& e, const SourceToken& tok) {
    if (auto slot = bound_lookup(tok.text)) {
      e.kind = Expression::Kind::bound;
      e.name = tok.text;
      e.slot = *slot;
      return;
    }
    if (auto slot = variable_slot(tok.text)) {
      e.kind = Expression::Kind::variable;
      e.name = tok.text;
      e.slot = *slot;
      return;
    }
    e.kind = Expression::Kind::literal;
    if (tok.text == "TRUE" || tok.text == "FALSE") {
      e.literal = Value::boolean(tok.text == "TRUE");
      return;
    }
    for (const auto& set : ast_.sets) {
      if (std::find(set.elements.begin(), set.elements.end(), tok.text) != set.elements.end()) {
        e.literal = Value::enumerated(set.name, tok.text);
        return;
      }
    }
    throw SyntaxError("undeclared identifier '" + tok.text + "'", tok.where);
  }

  std::optional<std::size_t> variable_slot(std::string_view name) const {
    auto it = std::find(ast_.variables.begin(), ast_.variables.end(), name);
    if (it == ast_.variables.end()) return std::nullopt;
    return static_cast<std::size_t>(it - ast_.variables.begin());
  }

  std::optional<std::size_t> bound_lookup(std::string_view name) const {
    std::size_t depth = bound_depth_;
    for (auto scope = scopes_.rbegin(); scope != scopes_.rend(); ++scope) {
      depth -= scope->size();
      for (std::size_t i = 0; i < scope->size(); ++i) {
        if ((*scope)[i] == name) return ast_.variables.size() + depth + i;
      }
    }
    return std::nullopt;
  }

  std::vector<SourceToken> tokens_;
  std::size_t pos_ = 0;
  MachineAST ast_;
  std::set<std::string, std::less<>> names_;
  std::vector<std::vector<std::string>> scopes_;
  std::size_t bound_depth_ = 0;
};

}  // namespace

MachineAST parse_machine(std::string_view source) {
  return Parser(tokenize(source).tokens).machine();
}

PredPtr parse_predicate(std::string_view source, const MachineAST& machine) {
  return Parser(tokenize(source).tokens).standalone_predicate(machine);
}

}  // namespace bqual
