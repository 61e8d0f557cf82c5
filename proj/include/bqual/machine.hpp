#pragma once

// AST of the bounded B-machine subset. Nodes are immutable and shared; identifiers are
// resolved while parsing, so every variable and bound-identifier reference already
// carries the environment slot it reads.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "bqual/errors.hpp"
#include "bqual/value.hpp"

namespace bqual {

struct Expression;
struct Predicate;
struct Substitution;

using ExprPtr = std::shared_ptr<const Expression>;
using PredPtr = std::shared_ptr<const Predicate>;
using SubstPtr = std::shared_ptr<const Substitution>;

struct Expression {
  enum class Kind { literal, variable, bound, add, subtract, multiply, negate };

  Kind kind = Kind::literal;
  Value literal;      // literal
  std::string name;   // variable, bound
  std::size_t slot = 0;  // variable: declaration index; bound: machine arity + binder depth
  ExprPtr lhs;        // binary ops and negate
  ExprPtr rhs;
  SourceLocation where;
};

enum class CompareOp { eq, ne, lt, le, gt, ge };

struct Predicate {
  enum class Kind { truth, falsity, compare, in_range, in_set, conjunction, disjunction, negation };

  Kind kind = Kind::truth;
  CompareOp op = CompareOp::eq;  // compare
  ExprPtr lhs;                   // compare, in_range, in_set
  ExprPtr rhs;                   // compare
  ExprPtr low;                   // in_range
  ExprPtr high;                  // in_range
  std::string set_name;          // in_set: an enumerated set or BOOL
  PredPtr left;                  // conjunction, disjunction, negation
  PredPtr right;                 // conjunction, disjunction
  SourceLocation where;
};

struct Substitution {
  enum class Kind { skip, assign, sequence, parallel, precondition, select, any };

  struct Branch {
    PredPtr guard;
    SubstPtr body;
  };

  Kind kind = Kind::skip;
  std::string target;         // assign
  std::size_t slot = 0;       // assign: declaration index of target
  ExprPtr value;              // assign
  std::vector<SubstPtr> parts;  // sequence, parallel
  PredPtr guard;              // precondition, any (WHERE)
  SubstPtr body;              // precondition, any
  std::vector<Branch> branches;  // select
  std::vector<std::string> bound;  // any
  std::size_t bound_base = 0;      // any: slot of bound[0]
  SourceLocation where;
};

struct EnumeratedSet {
  std::string name;
  std::vector<std::string> elements;
};

struct Operation {
  std::string name;
  SubstPtr body;
};

struct MachineAST {
  std::string name;
  std::vector<EnumeratedSet> sets;
  std::vector<std::string> variables;
  PredPtr invariant;
  SubstPtr initialisation;
  std::vector<Operation> operations;
  /// Largest nesting of ANY-bound identifiers; environments hold variables + this many slots.
  std::size_t bound_slots = 0;

  const EnumeratedSet* find_set(std::string_view name) const;
  const Operation* find_operation(std::string_view name) const;
};

/// Top-level conjuncts of `p` (flattening nested `&`).
std::vector<PredPtr> conjuncts(const PredPtr& p);

/// Machine slots written by `s`, deduplicated, in first-assignment order.
std::vector<std::size_t> assigned_slots(const Substitution& s);

}  // namespace bqual
