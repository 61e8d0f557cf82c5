#include "bqual/value.hpp"

#include <deque>
#include <functional>
#include <map>
#include <mutex>
#include <utility>

#include "bqual/errors.hpp"

namespace bqual {

namespace {

// Process-wide table of enumerated elements. Entries are never removed, so string_views
// handed out stay valid for the life of the process.
class EnumRegistry {
 public:
  static EnumRegistry& instance() {
    static EnumRegistry registry;
    return registry;
  }

  std::int64_t intern(std::string_view set, std::string_view element) {
    std::lock_guard lock(mutex_);
    auto key = std::make_pair(std::string(set), std::string(element));
    if (auto it = index_.find(key); it != index_.end()) return it->second;
    const auto id = static_cast<std::int64_t>(entries_.size());
    entries_.push_back(key);
    index_.emplace(std::move(key), id);
    return id;
  }

  const std::pair<std::string, std::string>& entry(std::int64_t id) {
    std::lock_guard lock(mutex_);
    return entries_.at(static_cast<std::size_t>(id));
  }

 private:
  std::mutex mutex_;
  std::deque<std::pair<std::string, std::string>> entries_;
  std::map<std::pair<std::string, std::string>, std::int64_t> index_;
};

}  // namespace

Value Value::enumerated(std::string_view set, std::string_view element) {
  return Value(ValueKind::enumerated, EnumRegistry::instance().intern(set, element));
}

std::int64_t Value::as_integer() const {
  if (kind_ != ValueKind::integer) throw EvalError("expected an integer, got " + to_string());
  return payload_;
}

bool Value::as_boolean() const {
  if (kind_ != ValueKind::boolean) throw EvalError("expected a boolean, got " + to_string());
  return payload_ != 0;
}

std::string_view Value::enum_set() const {
  if (kind_ != ValueKind::enumerated) throw EvalError("expected an enumerated element, got " + to_string());
  return EnumRegistry::instance().entry(payload_).first;
}

std::string_view Value::enum_element() const {
  if (kind_ != ValueKind::enumerated) throw EvalError("expected an enumerated element, got " + to_string());
  return EnumRegistry::instance().entry(payload_).second;
}

std::string Value::to_string() const {
  switch (kind_) {
    case ValueKind::integer:
      return std::to_string(payload_);
    case ValueKind::boolean:
      return payload_ != 0 ? "TRUE" : "FALSE";
    case ValueKind::enumerated:
      return std::string(enum_element());
  }
  return {};
}

std::strong_ordering Value::operator<=>(const Value& other) const {
  if (kind_ != other.kind_) return kind_ <=> other.kind_;
  if (kind_ != ValueKind::enumerated || payload_ == other.payload_) return payload_ <=> other.payload_;
  const auto& lhs = EnumRegistry::instance().entry(payload_);
  const auto& rhs = EnumRegistry::instance().entry(other.payload_);
  return lhs <=> rhs;
}

std::size_t Value::hash() const noexcept {
  const auto h = std::hash<std::int64_t>{}(payload_);
  return h ^ (static_cast<std::size_t>(kind_) * 0x9e3779b97f4a7c15ULL);
}

std::string_view to_string(ValueKind kind) {
  switch (kind) {
    case ValueKind::integer:
      return "integer";
    case ValueKind::boolean:
      return "boolean";
    case ValueKind::enumerated:
      return "enumerated";
  }
  return "?";
}

}  // namespace bqual
