#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "acotot/engine.hpp"
#include "acotot_cli/config.hpp"

namespace acotot::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitProviderFailure = 2;
inline constexpr int kExitConfigError = 3;

struct RunOptions {
  std::filesystem::path config;
  std::optional<std::uint64_t> seed;  ///< overrides the engine and synth seeds
  bool answer = false;                ///< ask the generator for a final answer
  std::optional<std::filesystem::path> out_dir;
};

struct BenchOptions {
  std::filesystem::path manifest;
  std::size_t repeats = 1;
  std::optional<std::filesystem::path> out_dir;
  std::size_t jobs = 1;
};

struct InspectOptions {
  std::filesystem::path result;
  /// DOT output file; "-" writes the graph to `out` instead of the report.
  std::optional<std::string> dot;
};

int cmd_run(const RunOptions& options, std::ostream& out, std::ostream& err);
int cmd_bench(const BenchOptions& options, std::ostream& out, std::ostream& err);
int cmd_inspect(const InspectOptions& options, std::ostream& out, std::ostream& err);

/// Outcome of one synthetic instance run against its oracle.
struct BenchRun {
  std::string label;
  std::uint64_t seed = 0;
  bool recovered = false;        ///< engine path == oracle argmax
  bool planted_optimal = false;  ///< oracle argmax == planted path
  bool converged = false;
  std::size_t iterations = 0;
  double concentration_ratio = 0.0;  ///< after the last iteration
  double agreement_rate = 0.0;       ///< in the last iteration
  CallCounts calls;
  std::uint64_t predicted_calls = 0;  ///< heuristics + tree units, predicted
  bool ledger_matches = false;
};

BenchRun run_bench_instance(const BenchEntry& entry, std::uint64_t seed);

struct BenchRow {
  BenchEntry entry;
  std::vector<BenchRun> runs;
  double recovery_rate = 0.0;
  double planted_optimal_rate = 0.0;
  double converged_rate = 0.0;
  double median_iterations = 0.0;
  double mean_concentration_ratio = 0.0;
  double mean_agreement_rate = 0.0;
  double mean_tree_thoughts = 0.0;
  double mean_heuristic_calls = 0.0;
  double mean_path_score_calls = 0.0;
  double mean_embed_calls = 0.0;
  double mean_llm_calls = 0.0;
  double ledger_match_rate = 0.0;
};

/// Runs every entry `repeats` times (seeds seed, seed + 1, ...) on up to
/// `jobs` threads. Row order follows the manifest.
std::vector<BenchRow> run_bench(const std::vector<BenchEntry>& entries, std::size_t repeats,
                                std::size_t jobs);

/// Writes `content` to a sibling temporary file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

/// DOT rendering of a result document's graph; edge pen widths are
/// proportional to pheromone.
std::string render_dot(const nlohmann::json& result);

}  // namespace acotot::cli
