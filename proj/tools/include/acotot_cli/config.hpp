#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "acotot/engine.hpp"
#include "acotot/graph.hpp"
#include "acotot/http_providers.hpp"
#include "acotot/synth.hpp"

namespace acotot::cli {

/// One entry of the `providers` section.
struct ProviderBlock {
  std::string kind;  ///< mock | planted | http | hash
  HttpEndpointConfig http;
  std::optional<std::string> role;
  std::optional<std::string> system_prompt;
  std::uint64_t seed = 0;
  bool inject_shared_duplicate = false;  // mock generator
  std::size_t dimension = 256;           // embedders
  // planted experts
  std::vector<std::string> planted;
  double hit_score = 0.9;
  double miss_score = 0.1;
  double noise = 0.0;
};

struct TaskBlock {
  enum class Kind { problem, synth, dataset };
  Kind kind = Kind::problem;
  std::string problem;
  SynthSpec synth;
  std::filesystem::path dataset;
};

struct RunConfig {
  EngineConfig engine;
  ToTGenConfig tot;
  std::optional<ProviderBlock> generator;
  std::vector<ProviderBlock> experts;
  ProviderBlock embedder;  ///< defaults to a hash embedder
  TaskBlock task;
  std::filesystem::path metrics_path = "metrics.jsonl";
  std::filesystem::path result_path = "result.json";
};

/// Parses and validates a run configuration. Relative paths are resolved
/// against `base_dir`. Throws ConfigError.
RunConfig parse_run_config(const nlohmann::json& doc, const std::filesystem::path& base_dir);
RunConfig load_run_config(const std::filesystem::path& path);

/// Applies the keys of an `engine` object onto `cfg`. Unknown keys are
/// rejected.
void apply_engine_settings(const nlohmann::json& doc, EngineConfig& cfg);

struct BenchEntry {
  std::string label;
  SynthSpec spec;
  EngineConfig engine;
};

/// A bench manifest is a JSON array of synth specs, each optionally carrying
/// engine overrides (ants, alpha, beta, ...) and a label.
std::vector<BenchEntry> parse_bench_manifest(const nlohmann::json& doc);

/// Reads a whole JSON file; throws ConfigError when missing or malformed.
nlohmann::json read_json_file(const std::filesystem::path& path);

}  // namespace acotot::cli
