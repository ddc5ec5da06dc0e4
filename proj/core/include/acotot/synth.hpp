#pragma once

#include <cstdint>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "acotot/graph.hpp"
#include "acotot/mock_providers.hpp"
#include "acotot/scoring.hpp"

namespace acotot {

/// Most root-to-leaf paths a synthetic instance or the oracle will handle.
inline constexpr std::size_t kPathCap = 100000;

/// A planted-optimum benchmark instance: a full tree of depth D and
/// branching n with one planted root-to-leaf chain.
struct SynthSpec {
  std::uint64_t seed = 0;
  int depth = 4;            ///< D
  int branching = 3;        ///< n
  double separation = 0.5;  ///< score gap between planted and decoy steps
  double noise = 0.05;      ///< expert perturbation amplitude
  std::size_t experts = 5;

  /// Throws ConfigError for out-of-range fields and CapExceeded when n^D
  /// exceeds kPathCap.
  void validate() const;
  bool well_separated() const noexcept { return separation > 2.0 * noise; }

  /// Expert base scores. The decoy score sits at twice the noise (at least
  /// 0.05) so noise never pushes it to the floor; the planted score is
  /// `separation` above it, shifted down when that would pass 1.
  double miss_score() const noexcept;
  double hit_score() const noexcept;
};

/// Central-model stand-in that grows the planted tree: every call returns n
/// thoughts; below the planted chain one of them (at a seeded position)
/// continues the chain and the rest are random decoys.
class SynthGenerator final : public ThoughtGenerator {
 public:
  explicit SynthGenerator(SynthSpec spec) : spec_(spec) {}

  std::vector<std::string> generate(std::string_view problem,
                                    std::span<const std::string> steps_so_far,
                                    std::size_t max_branches) override;
  /// The last step of the chain; synthetic tasks have no separate answer.
  std::string final_answer(std::string_view problem,
                           std::span<const std::string> chain) override;

  std::string problem() const;
  /// Text of the planted thought at `depth` >= 1.
  std::string planted_text(int depth) const;
  /// Position of the planted child among the options at `depth`.
  std::size_t planted_slot(int depth) const;

 private:
  SynthSpec spec_;
};

struct SynthInstance {
  SynthSpec spec;
  ReasoningGraph graph;
  Path planted;
  std::set<std::string> planted_texts;
  std::vector<std::shared_ptr<PlantedExpert>> experts;  ///< one per ant, distinct seeds
  ToTStats tree_stats;

  std::vector<ExpertPtr> expert_ptrs() const;
  /// The same experts with zero noise, as used by the oracle.
  std::vector<ExpertPtr> noiseless_experts() const;
};

/// Builds the instance through generate_tot. Generator calls are recorded in
/// `ledger` when one is given.
SynthInstance generate_synth(const SynthSpec& spec, std::shared_ptr<CallLedger> ledger = nullptr);

/// Every start-to-end path in lexicographic node order. Throws CapExceeded
/// when there are more than `cap`.
std::vector<Path> enumerate_paths(const ReasoningGraph& graph, std::size_t cap = kPathCap);

struct OracleResult {
  Path path;
  double q = 0.0;
  std::size_t paths_evaluated = 0;
};

/// Exhaustive argmax of Q; the first path in enumeration order wins ties.
OracleResult oracle_best(const ReasoningGraph& graph, const QualityWeights& weights,
                         Embedder& embedder, std::span<const ExpertPtr> experts,
                         std::size_t cap = kPathCap);

}  // namespace acotot
