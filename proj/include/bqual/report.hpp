#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"

#include "bqual/metrics.hpp"

namespace bqual {

enum class Metric : std::size_t {
  tfcomp,
  pfcomp,
  tfcorr,
  pfcorr,
  tfappr,
  pfappr,
  invariant_satisfiability,
  availability,
  accountability,
  fault_tolerance,
  recoverability,
  functional_analysability,
  fault_analysability,
  modularity,
  reusability,
  goal_appropriateness,
  learnability,
};

inline constexpr std::size_t metric_count = 17;

std::string_view metric_name(Metric m);
std::optional<Metric> metric_from_name(std::string_view name);

struct ExplorationSummary {
  std::size_t initial_states = 0;
  std::size_t states = 0;
  std::size_t transitions = 0;
  std::size_t violating_transitions = 0;
  std::size_t deadlock_states = 0;
  std::size_t invariant_violating_states = 0;
  bool truncated = false;
};

struct MutationSummary {
  std::string mode = "none";  // "plan", "seeded" or "none"
  std::size_t trials = 0;
  std::size_t n_extra = 0;
  std::size_t n_missing = 0;
  std::map<std::string, std::size_t> exclusions;
  std::string error;  // why mutation metrics were skipped, if they were
};

struct Provenance {
  std::string machine_path;
  std::string required_source;  // "transitions", "reference" or "none"
  std::string required_path;
  std::string goals_path;
  std::string plan_path;
  std::uint64_t seed = 0;
  std::string seed_source;  // "flag", "env", "plan" or "default"
  std::size_t max_states = 0;
  std::size_t max_transitions = 0;
  std::int64_t word_limit = 0;
  std::size_t n_words = 0;
  std::size_t similarity_threshold = 0;
  std::map<std::string, std::string> delta_paths;
};

struct QualityReport {
  std::string machine;
  std::array<MetricValue, metric_count> metrics;
  std::uint64_t capacity = 0;
  double cpu_seconds = 0.0;
  std::uint64_t peak_memory_bytes = 0;
  ExplorationSummary exploration;
  MutationSummary mutation;
  std::map<std::string, MetricValue> modularity_per_operation;
  std::map<std::string, std::string> modularity_source;
  std::vector<std::pair<std::string, bool>> goals;
  Provenance provenance;

  MetricValue& operator[](Metric m) { return metrics[static_cast<std::size_t>(m)]; }
  const MetricValue& operator[](Metric m) const { return metrics[static_cast<std::size_t>(m)]; }
  bool all_computed() const;
};

inline constexpr std::string_view report_schema_id = "bqual.report/1";

nlohmann::json report_to_json(const QualityReport& report);

enum class ReportFormat { json, table };

/// JSON (two-space indented, trailing newline) or an aligned table in five rows of four.
std::string render_report(const QualityReport& report, ReportFormat format);

}  // namespace bqual
