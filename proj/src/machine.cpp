#include "bqual/machine.hpp"

#include <algorithm>

namespace bqual {

const EnumeratedSet* MachineAST::find_set(std::string_view set_name) const {
  for (const auto& s : sets) {
    if (s.name == set_name) return &s;
  }
  return nullptr;
}

const Operation* MachineAST::find_operation(std::string_view op_name) const {
  for (const auto& op : operations) {
    if (op.name == op_name) return &op;
  }
  return nullptr;
}

std::vector<PredPtr> conjuncts(const PredPtr& p) {
  std::vector<PredPtr> out;
  std::vector<PredPtr> stack{p};
  while (!stack.empty()) {
    PredPtr top = stack.back();
    stack.pop_back();
    if (!top) continue;
    if (top->kind == Predicate::Kind::conjunction) {
      stack.push_back(top->right);
      stack.push_back(top->left);
    } else {
      out.push_back(top);
    }
  }
  return out;
}

namespace {

void collect_assigned(const Substitution& s, std::vector<std::size_t>& out) {
  switch (s.kind) {
    case Substitution::Kind::skip:
      return;
    case Substitution::Kind::assign:
      if (std::find(out.begin(), out.end(), s.slot) == out.end()) out.push_back(s.slot);
      return;
    case Substitution::Kind::sequence:
    case Substitution::Kind::parallel:
      for (const auto& part : s.parts) collect_assigned(*part, out);
      return;
    case Substitution::Kind::precondition:
    case Substitution::Kind::any:
      collect_assigned(*s.body, out);
      return;
    case Substitution::Kind::select:
      for (const auto& branch : s.branches) collect_assigned(*branch.body, out);
      return;
  }
}

}  // namespace

std::vector<std::size_t> assigned_slots(const Substitution& s) {
  std::vector<std::size_t> out;
  collect_assigned(s, out);
  return out;
}

}  // namespace bqual
