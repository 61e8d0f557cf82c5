#pragma once

// The end-to-end pipeline behind `bqual evaluate`.

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>

#include "bqual/explorer.hpp"
#include "bqual/metrics.hpp"
#include "bqual/report.hpp"

namespace bqual {

inline constexpr std::uint64_t default_seed = 1;

struct EvaluationConfig {
  std::string machine_path;
  std::optional<std::string> required_path;   // transitions JSONL
  std::optional<std::string> reference_path;  // reference machine
  std::optional<std::string> goals_path;
  std::optional<std::string> plan_path;
  /// operation -> machine whose derived transitions stand in for that operation's change.
  std::map<std::string, std::string> delta_paths;
  std::int64_t word_limit = 10'000;
  ExplorationLimits limits;
  std::size_t trials = 20;
  std::optional<std::size_t> n_extra;
  std::optional<std::size_t> n_missing;
  std::optional<std::uint64_t> seed;
  std::string seed_source = "default";
  std::size_t similarity_threshold = 5000;
};

/// Parses a machine file; SyntaxError messages gain the path.
Model load_model(const std::string& path);

/// Reads T_required either from a JSONL file or by exploring a reference machine. The
/// result is interned into `universe`.
RequirementSpec load_required(const EvaluationConfig& config, const Model& target,
                              const std::shared_ptr<Universe>& universe);

/// Runs parse, exploration, every metric and the mutation trials. Parse and input
/// errors propagate; metrics that cannot be computed are reported as such.
QualityReport evaluate(const EvaluationConfig& config);

}  // namespace bqual
