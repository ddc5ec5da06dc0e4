#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "acotot/graph.hpp"
#include "acotot/rng.hpp"

namespace acotot {

class ExpertProvider;
class CallLedger;

struct ColonyConfig {
  std::size_t ants = 5;        ///< m
  double alpha = 1.0;          ///< pheromone exponent
  double beta = 2.0;           ///< heuristic exponent
  double rho = 0.1;            ///< evaporation rate, in (0, 1)
  double tau0 = 1.0;
  double tau_min = 1e-4;       ///< positivity floor
  double h_floor = 1e-6;       ///< minimum heuristic value
  std::uint64_t seed = 0;
  bool elitism = false;        ///< best ant of an iteration deposits twice
  bool deposit_clamp = true;   ///< deposit max(Q, 0) instead of Q

  /// Throws ConfigError when a field is out of range.
  void validate() const;
};

/// Per-edge pheromone levels for one graph. Holds its own copy of the edge
/// numbering, so it is a plain value that can move between threads.
class PheromoneMatrix {
 public:
  PheromoneMatrix(const ReasoningGraph& graph, double tau0, double tau_min);

  double at(NodeId from, NodeId to) const { return values_[index(from, to)]; }
  /// Sets an edge level, clamped to the floor.
  void set(NodeId from, NodeId to, double value);
  void add(NodeId from, NodeId to, double delta) { set(from, to, at(from, to) + delta); }

  std::size_t edge_count() const noexcept { return values_.size(); }
  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }
  /// (from, to) of edge k, in the graph's edge_index order.
  std::pair<NodeId, NodeId> edge(std::size_t k) const { return {sources_.at(k), targets_.at(k)}; }
  std::size_t index(NodeId from, NodeId to) const;

  double tau0() const noexcept { return tau0_; }
  double tau_min() const noexcept { return tau_min_; }

  /// True when this matrix was built for a graph with exactly these edges.
  bool bound_to(const ReasoningGraph& graph) const;

  bool operator==(const PheromoneMatrix&) const = default;

 private:
  std::vector<std::size_t> offsets_;
  std::vector<NodeId> sources_;
  std::vector<NodeId> targets_;
  std::vector<double> values_;
  double tau0_;
  double tau_min_;
};

/// Transition distribution over the successors of one node.
struct TransitionDistribution {
  std::vector<NodeId> targets;
  std::vector<double> probabilities;
};

/// p_ij = tau_ij^alpha * h_j^beta / sum_l tau_il^alpha * h_l^beta, evaluated
/// in log space. `heuristics` is aligned with graph.successors(from); every
/// value is raised to cfg.h_floor first. Throws SinkNode at the end node and
/// NumericOverflow for non-finite inputs.
TransitionDistribution transition_probabilities(const ReasoningGraph& graph,
                                                const PheromoneMatrix& pheromones, NodeId from,
                                                std::span<const double> heuristics,
                                                const ColonyConfig& cfg);

/// Inverse-CDF draw from `dist`.
NodeId sample_next_state(const TransitionDistribution& dist, Rng& rng);

/// Heuristic values already obtained from one expert during one iteration,
/// keyed by candidate node.
using HeuristicMemo = std::unordered_map<NodeId, double>;

/// One ant walk from start to end. At every node with a real choice the
/// expert scores each successor (memoized in `memo`), then the next node is
/// sampled from the transition distribution. Nodes with one successor are
/// followed without consulting the expert.
Path construct_path(const ReasoningGraph& graph, const PheromoneMatrix& pheromones,
                    ExpertProvider& expert, const ColonyConfig& cfg, Rng& rng,
                    HeuristicMemo* memo = nullptr);

/// tau <- max(tau_min, (1 - rho) * tau) on every edge.
void evaporate(PheromoneMatrix& pheromones, double rho);

/// Adds Q(P_k) to every edge of P_k (clamped at zero when cfg.deposit_clamp).
/// With cfg.elitism the best path deposits a second time. Throws
/// LengthMismatch unless |paths| = |qualities| = cfg.ants.
void deposit(PheromoneMatrix& pheromones, std::span<const Path> paths,
             std::span<const double> qualities, const ColonyConfig& cfg);

}  // namespace acotot
