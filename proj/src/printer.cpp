#include <sstream>

#include "bqual/frontend.hpp"

namespace bqual {

namespace {

int precedence(const Expression& e) {
  switch (e.kind) {
    case Expression::Kind::add:
    case Expression::Kind::subtract:
      return 1;
    case Expression::Kind::multiply:
      return 2;
    case Expression::Kind::negate:
      return 3;
    case Expression::Kind::literal:
      return e.literal.is_integer() && e.literal.as_integer() < 0 ? 3 : 4;
    default:
      return 4;
  }
}

std::string operand(const Expression& e, int min_precedence) {
  std::string text = to_source(e);
  return precedence(e) < min_precedence ? "(" + text + ")" : text;
}

std::string_view symbol(CompareOp op) {
  switch (op) {
    case CompareOp::eq: return "=";
    case CompareOp::ne: return "/=";
    case CompareOp::lt: return "<";
    case CompareOp::le: return "<=";
    case CompareOp::gt: return ">";
    case CompareOp::ge: return ">=";
  }
  return "?";
}

std::string pad(int indent) { return std::string(static_cast<std::size_t>(indent) * 2, ' '); }

}  // namespace

std::string to_source(const Expression& e) {
  switch (e.kind) {
    case Expression::Kind::literal:
      return e.literal.to_string();
    case Expression::Kind::variable:
    case Expression::Kind::bound:
      return e.name;
    case Expression::Kind::add:
      return operand(*e.lhs, 1) + " + " + operand(*e.rhs, 2);
    case Expression::Kind::subtract:
      return operand(*e.lhs, 1) + " - " + operand(*e.rhs, 2);
    case Expression::Kind::multiply:
      return operand(*e.lhs, 2) + " * " + operand(*e.rhs, 3);
    case Expression::Kind::negate:
      return "-" + operand(*e.lhs, 4);
  }
  return {};
}

std::string to_source(const Predicate& p) {
  switch (p.kind) {
    case Predicate::Kind::truth:
      return "btrue";
    case Predicate::Kind::falsity:
      return "bfalse";
    case Predicate::Kind::compare:
      return to_source(*p.lhs) + " " + std::string(symbol(p.op)) + " " + to_source(*p.rhs);
    case Predicate::Kind::in_range:
      return to_source(*p.lhs) + " : " + to_source(*p.low) + ".." + to_source(*p.high);
    case Predicate::Kind::in_set:
      return to_source(*p.lhs) + " : " + p.set_name;
    case Predicate::Kind::conjunction: {
      auto side = [](const Predicate& q) {
        return q.kind == Predicate::Kind::disjunction ? "(" + to_source(q) + ")" : to_source(q);
      };
      // Conjunction is left-associative; a conjunction on the right needs grouping.
      std::string right = p.right->kind == Predicate::Kind::conjunction ? "(" + to_source(*p.right) + ")"
                                                                        : side(*p.right);
      return side(*p.left) + " & " + right;
    }
    case Predicate::Kind::disjunction: {
      std::string right = p.right->kind == Predicate::Kind::disjunction ? "(" + to_source(*p.right) + ")"
                                                                        : to_source(*p.right);
      return to_source(*p.left) + " or " + right;
    }
    case Predicate::Kind::negation:
      return "not(" + to_source(*p.left) + ")";
  }
  return {};
}

std::string to_source(const Substitution& s, int indent) {
  std::ostringstream out;
  switch (s.kind) {
    case Substitution::Kind::skip:
      out << pad(indent) << "skip";
      break;
    case Substitution::Kind::assign:
      out << pad(indent) << s.target << " := " << to_source(*s.value);
      break;
    case Substitution::Kind::sequence:
    case Substitution::Kind::parallel:
      for (std::size_t i = 0; i < s.parts.size(); ++i) {
        if (i != 0) out << (s.kind == Substitution::Kind::sequence ? ";\n" : " ||\n");
        out << to_source(*s.parts[i], indent);
      }
      break;
    case Substitution::Kind::precondition:
      out << pad(indent) << "PRE " << to_source(*s.guard) << "\n"
          << pad(indent) << "THEN\n"
          << to_source(*s.body, indent + 1) << "\n"
          << pad(indent) << "END";
      break;
    case Substitution::Kind::select:
      for (std::size_t i = 0; i < s.branches.size(); ++i) {
        out << pad(indent) << (i == 0 ? "SELECT " : "WHEN ") << to_source(*s.branches[i].guard) << "\n"
            << pad(indent) << "THEN\n"
            << to_source(*s.branches[i].body, indent + 1) << "\n";
      }
      out << pad(indent) << "END";
      break;
    case Substitution::Kind::any:
      out << pad(indent) << "ANY ";
      for (std::size_t i = 0; i < s.bound.size(); ++i) out << (i == 0 ? "" : ", ") << s.bound[i];
      out << "\n"
          << pad(indent) << "WHERE " << to_source(*s.guard) << "\n"
          << pad(indent) << "THEN\n"
          << to_source(*s.body, indent + 1) << "\n"
          << pad(indent) << "END";
      break;
  }
  return out.str();
}

std::string to_source(const MachineAST& m) {
  std::ostringstream out;
  out << "MACHINE " << m.name << "\n";
  if (!m.sets.empty()) {
    out << "SETS\n";
    for (std::size_t i = 0; i < m.sets.size(); ++i) {
      out << "  " << m.sets[i].name << " = {";
      for (std::size_t j = 0; j < m.sets[i].elements.size(); ++j) {
        out << (j == 0 ? "" : ", ") << m.sets[i].elements[j];
      }
      out << "}" << (i + 1 == m.sets.size() ? "\n" : ";\n");
    }
  }
  out << "VARIABLES ";
  for (std::size_t i = 0; i < m.variables.size(); ++i) out << (i == 0 ? "" : ", ") << m.variables[i];
  out << "\nINVARIANT " << to_source(*m.invariant) << "\n";
  out << "INITIALISATION\n" << to_source(*m.initialisation, 1) << "\n";
  out << "OPERATIONS\n";
  for (std::size_t i = 0; i < m.operations.size(); ++i) {
    out << "  " << m.operations[i].name << " =\n" << to_source(*m.operations[i].body, 2);
    out << (i + 1 == m.operations.size() ? "\n" : ";\n");
  }
  out << "END\n";
  return out.str();
}

}  // namespace bqual
