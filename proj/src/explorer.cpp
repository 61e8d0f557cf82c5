#include "bqual/explorer.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <condition_variable>
#include <ctime>
#include <deque>
#include <fstream>
#include <limits>
#include <mutex>
#include <thread>

#include <sys/resource.h>
#include <unistd.h>

namespace bqual {

// ---------------------------------------------------------------------------
// Domains

Domain Domain::interval(std::int64_t low, std::int64_t high) {
  if (low > high) {
    throw DomainError("empty interval " + std::to_string(low) + ".." + std::to_string(high));
  }
  return Domain(Interval{low, high});
}

Domain Domain::enumerated(std::string set, std::vector<std::string> elements) {
  if (elements.empty()) throw DomainError("enumerated set '" + set + "' is empty");
  return Domain(Enumerated{std::move(set), std::move(elements)});
}

std::uint64_t Domain::size() const noexcept {
  if (const auto* i = std::get_if<Interval>(&shape_)) {
    return static_cast<std::uint64_t>(i->high) - static_cast<std::uint64_t>(i->low) + 1;
  }
  if (std::holds_alternative<Boolean>(shape_)) return 2;
  return std::get<Enumerated>(shape_).elements.size();
}

Value Domain::at(std::uint64_t index) const {
  if (index >= size()) throw DomainError("domain index out of range");
  if (const auto* i = std::get_if<Interval>(&shape_)) {
    return Value::integer(static_cast<std::int64_t>(static_cast<std::uint64_t>(i->low) + index));
  }
  if (std::holds_alternative<Boolean>(shape_)) return Value::boolean(index == 1);
  const auto& e = std::get<Enumerated>(shape_);
  return Value::enumerated(e.set, e.elements[index]);
}

bool Domain::contains(const Value& v) const {
  if (const auto* i = std::get_if<Interval>(&shape_)) {
    return v.is_integer() && v.as_integer() >= i->low && v.as_integer() <= i->high;
  }
  if (std::holds_alternative<Boolean>(shape_)) return v.is_boolean();
  return v.is_enumerated() && v.enum_set() == std::get<Enumerated>(shape_).set;
}

std::string Domain::to_string() const {
  if (const auto* i = std::get_if<Interval>(&shape_)) {
    return std::to_string(i->low) + ".." + std::to_string(i->high);
  }
  if (std::holds_alternative<Boolean>(shape_)) return "BOOL";
  return std::get<Enumerated>(shape_).set;
}

const Domain& DomainMap::at(std::string_view variable) const {
  for (std::size_t i = 0; i < variables.size(); ++i) {
    if (variables[i] == variable) return domains[i];
  }
  throw DomainError("no domain for '" + std::string(variable) + "'");
}

std::uint64_t DomainMap::product_size() const noexcept {
  std::uint64_t total = 1;
  for (const auto& d : domains) {
    if (d.size() != 0 && total > std::numeric_limits<std::uint64_t>::max() / d.size()) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    total *= d.size();
  }
  return total;
}

namespace {

std::int64_t literal_bound(const ExprPtr& e, const std::string& who) {
  if (e->kind != Expression::Kind::literal || !e->literal.is_integer()) {
    throw DomainError("domain bounds of '" + who + "' must be integer literals");
  }
  return e->literal.as_integer();
}

/// Domain of the identifier in `slot`, from the first membership conjunct of `p` on it.
std::optional<Domain> domain_from(const PredPtr& p, std::size_t slot, const std::string& name, const MachineAST& ast) {
  for (const auto& c : conjuncts(p)) {
    if (c->kind != Predicate::Kind::in_range && c->kind != Predicate::Kind::in_set) continue;
    const auto& lhs = *c->lhs;
    if ((lhs.kind != Expression::Kind::variable && lhs.kind != Expression::Kind::bound) || lhs.slot != slot) continue;
    if (c->kind == Predicate::Kind::in_range) {
      return Domain::interval(literal_bound(c->low, name), literal_bound(c->high, name));
    }
    if (c->set_name == "BOOL") return Domain::boolean();
    const auto* set = ast.find_set(c->set_name);
    if (set == nullptr) throw DomainError("unknown set '" + c->set_name + "'");
    return Domain::enumerated(set->name, set->elements);
  }
  return std::nullopt;
}

void collect_binders(const Substitution& s, const MachineAST& ast,
                     std::unordered_map<const Substitution*, std::vector<Domain>>& out) {
  switch (s.kind) {
    case Substitution::Kind::skip:
    case Substitution::Kind::assign:
      return;
    case Substitution::Kind::sequence:
    case Substitution::Kind::parallel:
      for (const auto& part : s.parts) collect_binders(*part, ast, out);
      return;
    case Substitution::Kind::precondition:
      collect_binders(*s.body, ast, out);
      return;
    case Substitution::Kind::select:
      for (const auto& b : s.branches) collect_binders(*b.body, ast, out);
      return;
    case Substitution::Kind::any: {
      std::vector<Domain> domains;
      for (std::size_t i = 0; i < s.bound.size(); ++i) {
        auto d = domain_from(s.guard, s.bound_base + i, s.bound[i], ast);
        if (!d) throw DomainError("bound identifier '" + s.bound[i] + "' has no membership constraint in WHERE");
        domains.push_back(std::move(*d));
      }
      out.emplace(&s, std::move(domains));
      collect_binders(*s.body, ast, out);
      return;
    }
  }
}

}  // namespace

DomainMap infer_domains(const MachineAST& ast) {
  DomainMap map;
  map.variables = ast.variables;
  for (std::size_t i = 0; i < ast.variables.size(); ++i) {
    auto d = domain_from(ast.invariant, i, ast.variables[i], ast);
    if (!d) throw DomainError("variable '" + ast.variables[i] + "' has no membership conjunct in the invariant");
    map.domains.push_back(std::move(*d));
  }
  return map;
}

// ---------------------------------------------------------------------------
// Evaluation

struct Env {
  std::vector<Value> slots;
  std::vector<char> defined;  // only consulted while initialising
  bool initialising = false;
};

class Evaluator {
 public:
  explicit Evaluator(const Model& model) : model_(model) {}

  using Sink = std::function<void(Env&)>;

  Value eval(const Expression& e, const Env& env) const {
    switch (e.kind) {
      case Expression::Kind::literal:
        return e.literal;
      case Expression::Kind::variable:
        if (env.initialising && env.defined[e.slot] == 0) {
          throw EvalError("'" + e.name + "' is read before INITIALISATION assigns it");
        }
        return env.slots[e.slot];
      case Expression::Kind::bound:
        return env.slots[e.slot];
      case Expression::Kind::negate: {
        std::int64_t out = 0;
        if (__builtin_sub_overflow(std::int64_t{0}, integer(*e.lhs, env), &out)) overflow(e);
        return Value::integer(out);
      }
      default:
        break;
    }
    const std::int64_t a = integer(*e.lhs, env);
    const std::int64_t b = integer(*e.rhs, env);
    std::int64_t out = 0;
    bool bad = false;
    switch (e.kind) {
      case Expression::Kind::add: bad = __builtin_add_overflow(a, b, &out); break;
      case Expression::Kind::subtract: bad = __builtin_sub_overflow(a, b, &out); break;
      case Expression::Kind::multiply: bad = __builtin_mul_overflow(a, b, &out); break;
      default: break;
    }
    if (bad) overflow(e);
    return Value::integer(out);
  }

  bool holds(const Predicate& p, const Env& env) const {
    switch (p.kind) {
      case Predicate::Kind::truth:
        return true;
      case Predicate::Kind::falsity:
        return false;
      case Predicate::Kind::conjunction:
        return holds(*p.left, env) && holds(*p.right, env);
      case Predicate::Kind::disjunction:
        return holds(*p.left, env) || holds(*p.right, env);
      case Predicate::Kind::negation:
        return !holds(*p.left, env);
      case Predicate::Kind::compare: {
        const Value a = eval(*p.lhs, env);
        const Value b = eval(*p.rhs, env);
        if (p.op == CompareOp::eq || p.op == CompareOp::ne) {
          if (a.kind() != b.kind()) {
            throw EvalError("cannot compare " + std::string(to_string(a.kind())) + " with " +
                            std::string(to_string(b.kind())));
          }
          return (a == b) == (p.op == CompareOp::eq);
        }
        const std::int64_t x = a.as_integer();
        const std::int64_t y = b.as_integer();
        switch (p.op) {
          case CompareOp::lt: return x < y;
          case CompareOp::le: return x <= y;
          case CompareOp::gt: return x > y;
          case CompareOp::ge: return x >= y;
          default: return false;
        }
      }
      case Predicate::Kind::in_range: {
        const std::int64_t x = integer(*p.lhs, env);
        return x >= integer(*p.low, env) && x <= integer(*p.high, env);
      }
      case Predicate::Kind::in_set: {
        const Value v = eval(*p.lhs, env);
        if (p.set_name == "BOOL") {
          if (!v.is_boolean()) throw EvalError("membership in BOOL needs a boolean, got " + v.to_string());
          return true;
        }
        if (!v.is_enumerated()) throw EvalError("membership in " + p.set_name + " needs an element, got " + v.to_string());
        return v.enum_set() == p.set_name;
      }
    }
    return false;
  }

  void run(const Substitution& s, Env& env, const Sink& sink) const {
    switch (s.kind) {
      case Substitution::Kind::skip:
        sink(env);
        return;
      case Substitution::Kind::assign: {
        const Value next = eval(*s.value, env);
        const Value saved = env.slots[s.slot];
        const char was_defined = env.initialising ? env.defined[s.slot] : 1;
        env.slots[s.slot] = next;
        if (env.initialising) env.defined[s.slot] = 1;
        sink(env);
        env.slots[s.slot] = saved;
        if (env.initialising) env.defined[s.slot] = was_defined;
        return;
      }
      case Substitution::Kind::sequence:
        run_sequence(s.parts, 0, env, sink);
        return;
      case Substitution::Kind::parallel:
        run_parallel(s, env, sink);
        return;
      case Substitution::Kind::precondition:
        if (holds(*s.guard, env)) run(*s.body, env, sink);
        return;
      case Substitution::Kind::select:
        for (const auto& branch : s.branches) {
          if (holds(*branch.guard, env)) run(*branch.body, env, sink);
        }
        return;
      case Substitution::Kind::any:
        run_any(s, env, sink);
        return;
    }
  }

 private:
  std::int64_t integer(const Expression& e, const Env& env) const {
    const Value v = eval(e, env);
    if (!v.is_integer()) throw EvalError("arithmetic on non-integer value " + v.to_string());
    return v.as_integer();
  }

  [[noreturn]] static void overflow(const Expression& e) {
    throw EvalError("integer overflow at " + std::to_string(e.where.line) + ":" + std::to_string(e.where.column));
  }

  void run_sequence(const std::vector<SubstPtr>& parts, std::size_t i, Env& env, const Sink& sink) const {
    if (i == parts.size()) {
      sink(env);
      return;
    }
    run(*parts[i], env, [&](Env& next) { run_sequence(parts, i + 1, next, sink); });
  }

  // Each branch runs against the same pre-state; their (disjoint) writes are combined.
  void run_parallel(const Substitution& s, Env& env, const Sink& sink) const {
    std::vector<std::vector<std::size_t>> writes;
    std::vector<std::vector<std::vector<Value>>> outcomes;
    for (const auto& part : s.parts) {
      writes.push_back(assigned_slots(*part));
      std::vector<std::vector<Value>> results;
      const auto& slots = writes.back();
      run(*part, env, [&](Env& after) {
        std::vector<Value> written;
        written.reserve(slots.size());
        for (std::size_t slot : slots) written.push_back(after.slots[slot]);
        results.push_back(std::move(written));
      });
      if (results.empty()) return;
      outcomes.push_back(std::move(results));
    }
    combine(writes, outcomes, 0, env, sink);
  }

  void combine(const std::vector<std::vector<std::size_t>>& writes,
               const std::vector<std::vector<std::vector<Value>>>& outcomes, std::size_t i, Env& env,
               const Sink& sink) const {
    if (i == outcomes.size()) {
      sink(env);
      return;
    }
    const auto& slots = writes[i];
    std::vector<Value> saved;
    std::vector<char> saved_defined;
    for (std::size_t slot : slots) {
      saved.push_back(env.slots[slot]);
      if (env.initialising) saved_defined.push_back(env.defined[slot]);
    }
    for (const auto& values : outcomes[i]) {
      for (std::size_t k = 0; k < slots.size(); ++k) {
        env.slots[slots[k]] = values[k];
        if (env.initialising) env.defined[slots[k]] = 1;
      }
      combine(writes, outcomes, i + 1, env, sink);
    }
    for (std::size_t k = 0; k < slots.size(); ++k) {
      env.slots[slots[k]] = saved[k];
      if (env.initialising) env.defined[slots[k]] = saved_defined[k];
    }
  }

  void run_any(const Substitution& s, Env& env, const Sink& sink) const {
    const auto& domains = model_.binder_domains_.at(&s);
    const std::size_t n = domains.size();
    std::vector<std::uint64_t> index(n, 0);
    for (std::size_t k = 0; k < n; ++k) env.slots[s.bound_base + k] = domains[k].at(0);
    while (true) {
      if (holds(*s.guard, env)) run(*s.body, env, sink);
      std::size_t k = n;
      while (k > 0) {
        --k;
        if (++index[k] < domains[k].size()) {
          env.slots[s.bound_base + k] = domains[k].at(index[k]);
          break;
        }
        index[k] = 0;
        env.slots[s.bound_base + k] = domains[k].at(0);
        if (k == 0) return;
      }
      if (n == 0) return;
    }
  }

  const Model& model_;
};

Model::Model(MachineAST ast) : ast_(std::move(ast)), domains_(infer_domains(ast_)) {
  collect_binders(*ast_.initialisation, ast_, binder_domains_);
  for (const auto& op : ast_.operations) collect_binders(*op.body, ast_, binder_domains_);
}

namespace {

Env make_env(const Model& model, std::span<const Value> state) {
  Env env;
  env.slots.assign(model.variables().size() + model.ast().bound_slots, Value{});
  std::copy(state.begin(), state.end(), env.slots.begin());
  return env;
}

void sort_unique(std::vector<Row>& rows) {
  std::sort(rows.begin(), rows.end());
  rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
}

}  // namespace

std::vector<Row> Model::initial_rows() const {
  const std::size_t n = variables().size();
  Env env;
  env.slots.assign(n + ast_.bound_slots, Value{});
  env.defined.assign(n + ast_.bound_slots, 0);
  env.initialising = true;
  std::vector<Row> out;
  Evaluator(*this).run(*ast_.initialisation, env, [&](Env& after) {
    for (std::size_t i = 0; i < n; ++i) {
      if (after.defined[i] == 0) {
        throw ExplorationError("INITIALISATION leaves '" + variables()[i] + "' unassigned");
      }
    }
    Row row(after.slots.begin(), after.slots.begin() + static_cast<std::ptrdiff_t>(n));
    if (std::find(out.begin(), out.end(), row) == out.end()) out.push_back(std::move(row));
  });
  return out;
}

std::vector<Row> Model::successors(const Substitution& sub, std::span<const Value> state) const {
  if (state.size() != variables().size()) throw StructuralError("state width does not match the machine");
  Env env = make_env(*this, state);
  std::vector<Row> out;
  const std::size_t n = state.size();
  Evaluator(*this).run(sub, env, [&](Env& after) {
    out.emplace_back(after.slots.begin(), after.slots.begin() + static_cast<std::ptrdiff_t>(n));
  });
  sort_unique(out);
  return out;
}

bool Model::holds(const Predicate& p, std::span<const Value> state) const {
  if (state.size() != variables().size()) throw StructuralError("state width does not match the machine");
  return Evaluator(*this).holds(p, make_env(*this, state));
}

std::vector<State> enumerate_substitution(const Model& model, const Substitution& sub, const State& state) {
  std::vector<State> out;
  for (const auto& row : model.successors(sub, state.row(model.variables()))) {
    out.push_back(State::from_row(model.variables(), row));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Exploration

namespace {

/// universe index -> machine index
std::vector<std::size_t> permutation(const VariableOrder& machine, const Universe& universe) {
  if (machine.size() != universe.arity()) {
    throw StructuralError("machine declares " + std::to_string(machine.size()) + " variables, universe has " +
                          std::to_string(universe.arity()));
  }
  std::vector<std::size_t> perm(universe.arity());
  for (std::size_t i = 0; i < universe.arity(); ++i) {
    const auto& name = universe.variables()[i];
    auto it = std::find(machine.begin(), machine.end(), name);
    if (it == machine.end()) throw StructuralError("machine does not declare variable '" + name + "'");
    perm[i] = static_cast<std::size_t>(it - machine.begin());
  }
  return perm;
}

bool is_identity(const std::vector<std::size_t>& perm) {
  for (std::size_t i = 0; i < perm.size(); ++i) {
    if (perm[i] != i) return false;
  }
  return true;
}

}  // namespace

ExplorationResult explore(const Model& model, const ExplorationLimits& limits, std::shared_ptr<Universe> universe) {
  MemorySampler sampler;
  const double cpu_start = process_cpu_seconds();

  if (!universe) universe = std::make_shared<Universe>(model.variables());
  const auto perm = permutation(model.variables(), *universe);
  const bool identity = is_identity(perm);
  Row scratch(universe->arity());
  auto to_universe = [&](const Row& machine_row) -> const Row& {
    if (identity) return machine_row;
    for (std::size_t i = 0; i < perm.size(); ++i) scratch[i] = machine_row[perm[i]];
    return scratch;
  };
  Row machine_scratch(universe->arity());
  auto to_machine = [&](StateId id) -> std::span<const Value> {
    auto row = universe->row(id);
    if (identity) return row;
    for (std::size_t i = 0; i < perm.size(); ++i) machine_scratch[perm[i]] = row[i];
    return machine_scratch;
  };

  ExplorationResult result;
  result.universe = universe;

  std::vector<LabelId> labels;
  for (const auto& op : model.ast().operations) labels.push_back(universe->intern_label(op.name));

  // 0 = unseen, 1 = seen and invariant holds, 2 = seen and invariant violated
  std::vector<std::uint8_t> status;
  auto status_of = [&](StateId id) -> std::uint8_t& {
    if (id >= status.size()) status.resize(std::max<std::size_t>(id + 1, status.size() * 2), 0);
    return status[id];
  };

  std::deque<StateId> frontier;
  std::vector<StateId> discovered;
  auto discover = [&](StateId id, const Row& machine_row) {
    const bool ok = model.satisfies_invariant(machine_row);
    status_of(id) = ok ? 1 : 2;
    discovered.push_back(id);
    if (ok) {
      frontier.push_back(id);
    } else {
      result.invariant_violating_states.push_back(id);
    }
  };

  const auto initial = model.initial_rows();
  if (initial.empty()) throw ExplorationError("INITIALISATION derives no initial state");
  for (const auto& row : initial) {
    const StateId id = universe->intern(to_universe(row));
    if (status_of(id) != 0) continue;
    if (discovered.size() >= limits.max_states) {
      result.truncated = true;
      break;
    }
    result.initial_states.push_back(id);
    discover(id, row);
  }

  std::vector<TransitionKey> transitions;
  bool stop = result.truncated;
  while (!frontier.empty() && !stop) {
    const StateId s = frontier.front();
    frontier.pop_front();
    const auto pre_view = to_machine(s);
    const Row pre(pre_view.begin(), pre_view.end());
    for (std::size_t op = 0; op < labels.size() && !stop; ++op) {
      for (const auto& post : model.successors(*model.ast().operations[op].body, pre)) {
        if (transitions.size() >= limits.max_transitions) {
          stop = true;
          break;
        }
        const StateId t = universe->intern(to_universe(post));
        if (status_of(t) == 0) {
          if (discovered.size() >= limits.max_states) {
            stop = true;
            break;
          }
          discover(t, post);
        }
        transitions.push_back({s, labels[op], t});
      }
    }
  }
  result.truncated = result.truncated || stop;

  // Classification: the post-state breaks the invariant or has nowhere to go.
  std::vector<std::uint32_t> outgoing(universe->state_count(), 0);
  for (const auto& k : transitions) ++outgoing[k.pre];
  std::vector<TransitionKey> bad;
  std::vector<TransitionKey> good;
  for (const auto& k : transitions) {
    (status[k.post] == 2 || outgoing[k.post] == 0 ? bad : good).push_back(k);
  }
  for (StateId id : discovered) {
    if (status[id] == 1 && outgoing[id] == 0) result.deadlock_states.push_back(id);
  }

  result.transitions = TransitionSet(universe, std::move(transitions));
  result.violating = TransitionSet(universe, std::move(bad));
  result.ok = TransitionSet(universe, std::move(good));
  std::sort(discovered.begin(), discovered.end());
  result.states = std::move(discovered);
  std::sort(result.initial_states.begin(), result.initial_states.end());
  std::sort(result.deadlock_states.begin(), result.deadlock_states.end());
  std::sort(result.invariant_violating_states.begin(), result.invariant_violating_states.end());

  result.metering.cpu_seconds = process_cpu_seconds() - cpu_start;
  result.metering.peak_memory_bytes = sampler.peak_bytes();
  return result;
}

bool check_goal(const Model& model, const ExplorationResult& result, const Predicate& goal) {
  const auto perm = permutation(model.variables(), *result.universe);
  Row row(perm.size());
  for (StateId id : result.states) {
    auto u = result.universe->row(id);
    for (std::size_t i = 0; i < perm.size(); ++i) row[perm[i]] = u[i];
    if (model.holds(goal, row)) return true;
  }
  return false;
}

std::function<bool(StateId)> invariant_oracle(const Model& model, const Universe& universe) {
  auto perm = permutation(model.variables(), universe);
  return [&model, &universe, perm = std::move(perm)](StateId id) {
    Row row(perm.size());
    auto u = universe.row(id);
    for (std::size_t i = 0; i < perm.size(); ++i) row[perm[i]] = u[i];
    return model.satisfies_invariant(row);
  };
}

// ---------------------------------------------------------------------------
// Metering

std::uint64_t resident_bytes() {
  std::ifstream statm("/proc/self/statm");
  std::uint64_t size = 0;
  std::uint64_t resident = 0;
  if (!(statm >> size >> resident)) return 0;
  return resident * static_cast<std::uint64_t>(sysconf(_SC_PAGESIZE));
}

double process_cpu_seconds() {
  return static_cast<double>(std::clock()) / CLOCKS_PER_SEC;
}

struct MemorySampler::Impl {
  std::mutex mutex;
  std::condition_variable wake;
  bool stopping = false;
  std::atomic<std::uint64_t> peak{0};
  std::thread worker;

  void sample() {
    const std::uint64_t now = resident_bytes();
    std::uint64_t seen = peak.load();
    while (now > seen && !peak.compare_exchange_weak(seen, now)) {
    }
  }
};

MemorySampler::MemorySampler(unsigned interval_ms) : impl_(std::make_unique<Impl>()) {
  impl_->sample();
  impl_->worker = std::thread([impl = impl_.get(), interval_ms] {
    std::unique_lock lock(impl->mutex);
    while (!impl->wake.wait_for(lock, std::chrono::milliseconds(interval_ms), [impl] { return impl->stopping; })) {
      impl->sample();
    }
  });
}

MemorySampler::~MemorySampler() {
  {
    std::lock_guard lock(impl_->mutex);
    impl_->stopping = true;
  }
  impl_->wake.notify_all();
  impl_->worker.join();
}

std::uint64_t MemorySampler::peak_bytes() const {
  impl_->sample();
  std::uint64_t peak = impl_->peak.load();
  if (peak == 0) {
    rusage usage{};
    if (getrusage(RUSAGE_SELF, &usage) == 0) peak = static_cast<std::uint64_t>(usage.ru_maxrss) * 1024;
  }
  return peak;
}

}  // namespace bqual
