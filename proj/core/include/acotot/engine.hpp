#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <span>
#include <vector>

#include "acotot/colony.hpp"
#include "acotot/errors.hpp"
#include "acotot/providers.hpp"
#include "acotot/scoring.hpp"

namespace acotot {

struct EngineConfig {
  ColonyConfig colony;
  QualityWeights weights;
  std::size_t max_iterations = 10;     ///< T
  std::size_t convergence_window = 3;  ///< W
  /// Worker threads for ant construction and scoring; 1 runs everything
  /// on the calling thread. Results do not depend on this value.
  std::size_t parallelism = 1;

  void validate() const;
};

struct IterationMetrics {
  std::size_t iteration = 0;  ///< 1-based
  std::vector<Path> ant_paths;
  std::vector<double> ant_q;
  double mean_path_length = 0.0;     ///< thought nodes per ant path
  double agreement_rate = 0.0;       ///< ants on the modal path / m
  double diversity = 0.0;            ///< distinct ant paths / m
  double concentration_ratio = 0.0;  ///< mean tau on best path / mean tau elsewhere
  Path best_path;                    ///< extracted after this iteration's update
  double best_q = 0.0;
  CallCounts calls;                  ///< cumulative

  bool operator==(const IterationMetrics&) const = default;
};

struct RunResult {
  Path best_path;
  std::vector<std::string> best_chain;
  std::size_t iterations_run = 0;
  bool converged = false;
  std::vector<IterationMetrics> history;
  PheromoneMatrix pheromones;
  CallCounts calls;
};

/// A provider failed mid-run. Carries the iterations completed before it.
class RunAborted : public ProviderFailure {
 public:
  RunAborted(const std::string& what, std::vector<IterationMetrics> partial)
      : ProviderFailure(what), history_(std::move(partial)) {}
  const std::vector<IterationMetrics>& history() const noexcept { return history_; }

 private:
  std::vector<IterationMetrics> history_;
};

/// Greedy walk from the start node along the highest-pheromone edge, ties
/// going to the smallest node id.
Path extract_best_path(const ReasoningGraph& graph, const PheromoneMatrix& pheromones);

/// True when the last `window` entries are the same path.
bool check_convergence(std::span<const Path> best_paths, std::size_t window);

/// Fraction of paths equal to the most frequent one.
double agreement_rate(std::span<const Path> paths);

/// Mean tau on `best`'s edges divided by mean tau on every other edge; 1
/// when no other edge exists.
double concentration_ratio(const PheromoneMatrix& pheromones, const Path& best);

/// Heuristic evaluations an ant makes along `path`: the successor counts of
/// every node on it with more than one successor.
std::size_t evaluation_count(const ReasoningGraph& graph, const Path& path);

/// A * N * t + tree overhead, rounded to the nearest integer. N may be a
/// realized mean.
std::uint64_t predicted_call_count(std::uint64_t ants, double evaluations_per_path,
                                   std::uint64_t iterations, std::uint64_t tree_overhead);

/// sum_{i=1..depth} branching^i.
std::uint64_t tree_generation_overhead(int depth, int branching);

/// One colony on one graph. Experts are bound to ants by index, so there
/// must be exactly cfg.colony.ants of them. Every provider call goes through
/// the ledger.
class Engine {
 public:
  using MetricsSink = std::function<void(const IterationMetrics&)>;

  Engine(const ReasoningGraph& graph, std::vector<ExpertPtr> experts, EmbedderPtr embedder,
         EngineConfig cfg, std::shared_ptr<CallLedger> ledger = nullptr);

  void set_metrics_sink(MetricsSink sink) { sink_ = std::move(sink); }

  /// Construct, score, evaporate, deposit, extract. A provider failure
  /// propagates and leaves the pheromones untouched.
  const IterationMetrics& step();

  /// Iterates until convergence or T. Throws RunAborted on provider failure.
  RunResult run();

  /// Replaces the pheromone state, e.g. to resume from a snapshot. Throws
  /// ConfigError when the matrix belongs to another graph.
  void restore(PheromoneMatrix pheromones);

  bool converged() const;
  const PheromoneMatrix& pheromones() const noexcept { return pheromones_; }
  const std::vector<IterationMetrics>& history() const noexcept { return history_; }
  const EngineConfig& config() const noexcept { return cfg_; }
  const std::shared_ptr<CallLedger>& ledger() const noexcept { return ledger_; }

 private:
  template <class Fn>
  void for_each_index(std::size_t count, Fn&& fn);
  double quality_of(const Path& path);

  const ReasoningGraph& graph_;
  EngineConfig cfg_;
  std::shared_ptr<CallLedger> ledger_;
  std::vector<ExpertPtr> experts_;
  EmbedderPtr embedder_;
  PheromoneMatrix pheromones_;
  std::vector<IterationMetrics> history_;
  std::map<Path, double> extracted_q_;  // best paths no ant walked
  MetricsSink sink_;
};

/// Convenience wrapper around Engine::run.
RunResult run(const ReasoningGraph& graph, std::vector<ExpertPtr> experts, EmbedderPtr embedder,
              const EngineConfig& cfg, std::shared_ptr<CallLedger> ledger = nullptr);

}  // namespace acotot
