// bqual: quality evaluation of bounded B abstract machines.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "bqual/evaluate.hpp"
#include "bqual/frontend.hpp"
#include "bqual/json_io.hpp"

namespace {

enum Exit : int {
  ok = 0,
  usage = 2,
  parse_error = 3,  // also unreadable or malformed input files
  truncated = 4,
  not_computable = 5,
  failure = 6,
};

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw bqual::InputError("cannot write " + path);
  out << text;
  if (!out) throw bqual::InputError("error writing " + path);
}

std::optional<std::uint64_t> env_seed() {
  const char* raw = std::getenv("BQUAL_SEED");
  if (raw == nullptr || *raw == '\0') return std::nullopt;
  try {
    std::size_t used = 0;
    const auto value = std::stoull(raw, &used, 0);
    if (raw[used] != '\0' || raw[0] == '-') throw std::invalid_argument("trailing");
    return value;
  } catch (const std::exception&) {
    throw CLI::ValidationError("BQUAL_SEED", std::string("not an unsigned integer: ") + raw);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bqual: quality evaluation of bounded B abstract machines"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "bqual 0.1.0");

  bqual::EvaluationConfig config;
  std::string out_path;
  std::string format = "json";
  bool strict = false;
  std::map<std::string, std::string> deltas;
  std::vector<std::string> delta_specs;

  auto* eval = app.add_subcommand("evaluate", "Explore a machine and compute its quality report");
  eval->add_option("--machine", config.machine_path, "Machine to evaluate (.mch)")->required()->check(CLI::ExistingFile);
  auto* req = eval->add_option("--required", config.required_path, "Required transitions (JSON lines)")
                  ->check(CLI::ExistingFile);
  auto* ref = eval->add_option("--reference", config.reference_path, "Reference machine whose derived transitions are required")
                  ->check(CLI::ExistingFile);
  req->excludes(ref);
  eval->add_option("--goals", config.goals_path, "Goal predicates, one 'NAME: predicate' per line")
      ->check(CLI::ExistingFile);
  eval->add_option("--word-limit", config.word_limit, "Word limit for learnability")->capture_default_str()
      ->check(CLI::PositiveNumber);
  eval->add_option("--max-states", config.limits.max_states, "Exploration state limit")->capture_default_str();
  eval->add_option("--max-transitions", config.limits.max_transitions, "Exploration transition limit")
      ->capture_default_str();
  auto* trials = eval->add_option("--trials", config.trials, "Seeded mutation trials")->capture_default_str()
                     ->check(CLI::PositiveNumber);
  auto* n_extra = eval->add_option("--n-extra", config.n_extra, "Extra transitions per trial (default 1% of derived)");
  auto* n_missing = eval->add_option("--n-missing", config.n_missing, "Missing transitions per trial (default 1% of derived)");
  auto* seed = eval->add_option("--seed", config.seed, "Mutation seed (falls back to BQUAL_SEED)");
  auto* plan = eval->add_option("--plan", config.plan_path, "Explicit mutation plan (JSON)")->check(CLI::ExistingFile);
  for (auto* o : {trials, n_extra, n_missing, seed}) plan->excludes(o);
  eval->add_option("--delta", delta_specs, "OP=FILE.mch: machine standing in for the change of operation OP");
  eval->add_option("--similarity-threshold", config.similarity_threshold,
                   "Alignment size guard (unmatched elements per side)")
      ->capture_default_str();
  eval->add_option("--out", out_path, "Report path (default stdout)");
  eval->add_option("--format", format, "Report format")->check(CLI::IsMember({"json", "table"}))->capture_default_str();
  eval->add_flag("--strict", strict, "Fail on truncated exploration or not-computed metrics");

  std::string explore_machine;
  bool with_transitions = false;
  bool jsonl = false;
  bqual::ExplorationLimits explore_limits;
  auto* exp = app.add_subcommand("explore", "Explore a machine and print its transition system");
  exp->add_option("--machine", explore_machine, "Machine to explore (.mch)")->required()->check(CLI::ExistingFile);
  exp->add_option("--max-states", explore_limits.max_states, "State limit")->capture_default_str();
  exp->add_option("--max-transitions", explore_limits.max_transitions, "Transition limit")->capture_default_str();
  exp->add_flag("--transitions", with_transitions, "Include every transition in the summary");
  exp->add_flag("--jsonl", jsonl, "Print only the transitions, one JSON object per line");
  exp->add_option("--out", out_path, "Output path (default stdout)");
  exp->add_flag("--strict", strict, "Fail when the exploration is truncated");

  try {
    app.parse(argc, argv);
    if (*eval) {
      if (!config.required_path && !config.reference_path) {
        throw CLI::RequiredError("one of --required or --reference");
      }
      if (config.seed) {
        config.seed_source = "flag";
      } else if (auto s = env_seed()) {
        config.seed = s;
        config.seed_source = "env";
      }
      for (const auto& spec : delta_specs) {
        auto eq = spec.find('=');
        if (eq == std::string::npos || eq == 0 || eq + 1 == spec.size()) {
          throw CLI::ValidationError("--delta", "expected OP=FILE.mch, got '" + spec + "'");
        }
        config.delta_paths[spec.substr(0, eq)] = spec.substr(eq + 1);
      }
    }
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? Exit::ok : Exit::usage;
  }

  try {
    if (*exp) {
      const auto model = bqual::load_model(explore_machine);
      const auto result = bqual::explore(model, explore_limits);
      if (jsonl) {
        write_output(out_path, bqual::dump_transitions_jsonl(result.transitions));
      } else {
        auto j = bqual::exploration_to_json(result, with_transitions);
        j["machine"] = model.ast().name;
        write_output(out_path, j.dump(2) + "\n");
      }
      if (result.truncated) {
        std::cerr << "bqual: warning: exploration truncated\n";
        if (strict) return Exit::truncated;
      }
      return Exit::ok;
    }

    const auto report = bqual::evaluate(config);
    write_output(out_path, bqual::render_report(
                               report, format == "table" ? bqual::ReportFormat::table : bqual::ReportFormat::json));
    if (report.exploration.truncated) {
      std::cerr << "bqual: warning: exploration truncated at the state or transition limit\n";
      if (strict) return Exit::truncated;
    }
    if (strict && !report.all_computed()) {
      for (std::size_t i = 0; i < bqual::metric_count; ++i) {
        if (!report.metrics[i].computed()) {
          std::cerr << "bqual: " << bqual::metric_name(static_cast<bqual::Metric>(i))
                    << " not computed: " << report.metrics[i].reason << "\n";
        }
      }
      return Exit::not_computable;
    }
    return Exit::ok;
  } catch (const bqual::SyntaxError& e) {
    std::cerr << "bqual: syntax error: " << e.what() << "\n";
    return Exit::parse_error;
  } catch (const bqual::DomainError& e) {
    std::cerr << "bqual: domain error: " << e.what() << "\n";
    return Exit::parse_error;
  } catch (const bqual::InputError& e) {
    std::cerr << "bqual: input error: " << e.what() << "\n";
    return Exit::parse_error;
  } catch (const bqual::StructuralError& e) {
    std::cerr << "bqual: input error: " << e.what() << "\n";
    return Exit::parse_error;
  } catch (const bqual::Error& e) {
    std::cerr << "bqual: error: " << e.what() << "\n";
    return Exit::failure;
  } catch (const std::exception& e) {
    std::cerr << "bqual: error: " << e.what() << "\n";
    return Exit::failure;
  }
}
