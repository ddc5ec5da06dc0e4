#include "acotot/colony.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "acotot/errors.hpp"
#include "acotot/providers.hpp"

namespace acotot {

void ColonyConfig::validate() const {
  if (ants < 1) throw ConfigError("ants must be >= 1");
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw ConfigError("alpha must be >= 0");
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw ConfigError("beta must be >= 0");
  if (!(rho > 0.0 && rho < 1.0)) throw ConfigError("rho must lie in (0, 1)");
  if (!(tau_min > 0.0) || !std::isfinite(tau_min)) throw ConfigError("tau_min must be > 0");
  if (!(tau0 >= tau_min) || !std::isfinite(tau0)) throw ConfigError("tau0 must be >= tau_min");
  if (!(h_floor > 0.0) || h_floor > 1.0) throw ConfigError("h_floor must lie in (0, 1]");
}

PheromoneMatrix::PheromoneMatrix(const ReasoningGraph& graph, double tau0, double tau_min)
    : tau0_(tau0), tau_min_(tau_min) {
  if (!(tau_min > 0.0)) throw ConfigError("tau_min must be > 0");
  if (!(tau0 >= tau_min)) throw ConfigError("tau0 must be >= tau_min");
  offsets_.reserve(graph.node_count() + 1);
  for (NodeId i = 0; i < graph.node_count(); ++i) offsets_.push_back(graph.edge_offset(i));
  offsets_.push_back(graph.edge_count());
  for (const auto& [from, to] : graph.edges()) {
    sources_.push_back(from);
    targets_.push_back(to);
  }
  values_.assign(graph.edge_count(), tau0);
}

std::size_t PheromoneMatrix::index(NodeId from, NodeId to) const {
  if (from + 1 < offsets_.size()) {
    const auto first = targets_.begin() + static_cast<std::ptrdiff_t>(offsets_[from]);
    const auto last = targets_.begin() + static_cast<std::ptrdiff_t>(offsets_[from + 1]);
    const auto it = std::lower_bound(first, last, to);
    if (it != last && *it == to) return static_cast<std::size_t>(it - targets_.begin());
  }
  throw UnknownNode("no pheromone entry for edge " + std::to_string(from) + "->" +
                    std::to_string(to));
}

void PheromoneMatrix::set(NodeId from, NodeId to, double value) {
  values_[index(from, to)] = std::max(tau_min_, value);
}

bool PheromoneMatrix::bound_to(const ReasoningGraph& graph) const {
  if (graph.edge_count() != values_.size() || graph.node_count() + 1 != offsets_.size()) {
    return false;
  }
  std::size_t k = 0;
  for (const auto& [from, to] : graph.edges()) {
    if (sources_[k] != from || targets_[k] != to) return false;
    ++k;
  }
  return true;
}

TransitionDistribution transition_probabilities(const ReasoningGraph& graph,
                                                const PheromoneMatrix& pheromones, NodeId from,
                                                std::span<const double> heuristics,
                                                const ColonyConfig& cfg) {
  if (from == graph.finish()) throw SinkNode("the end node has no successors");
  const auto succ = graph.successors(from);
  if (succ.empty()) throw SinkNode("node " + std::to_string(from) + " has no successors");
  if (heuristics.size() != succ.size()) {
    throw LengthMismatch("expected " + std::to_string(succ.size()) + " heuristic values, got " +
                         std::to_string(heuristics.size()));
  }

  TransitionDistribution dist;
  dist.targets.assign(succ.begin(), succ.end());
  dist.probabilities.resize(succ.size());
  double max_log = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < succ.size(); ++k) {
    const double tau = pheromones.at(from, succ[k]);
    const double h = std::max(heuristics[k], cfg.h_floor);
    if (!std::isfinite(tau) || !std::isfinite(h) || !(tau > 0.0)) {
      throw NumericOverflow("non-finite pheromone or heuristic on edge " +
                            std::to_string(from) + "->" + std::to_string(succ[k]));
    }
    const double log_w = cfg.alpha * std::log(tau) + cfg.beta * std::log(h);
    dist.probabilities[k] = log_w;
    max_log = std::max(max_log, log_w);
  }
  if (!std::isfinite(max_log)) throw NumericOverflow("transition weights are not finite");

  double total = 0.0;
  for (double& p : dist.probabilities) {
    p = std::exp(p - max_log);
    total += p;
  }
  for (double& p : dist.probabilities) p /= total;
  return dist;
}

NodeId sample_next_state(const TransitionDistribution& dist, Rng& rng) {
  const double u = uniform01(rng);
  double acc = 0.0;
  for (std::size_t k = 0; k < dist.targets.size(); ++k) {
    acc += dist.probabilities[k];
    if (u < acc) return dist.targets[k];
  }
  // Rounding left the cumulative sum just below one.
  for (std::size_t k = dist.targets.size(); k-- > 0;) {
    if (dist.probabilities[k] > 0.0) return dist.targets[k];
  }
  return dist.targets.back();
}

Path construct_path(const ReasoningGraph& graph, const PheromoneMatrix& pheromones,
                    ExpertProvider& expert, const ColonyConfig& cfg, Rng& rng,
                    HeuristicMemo* memo) {
  Path path{{graph.start()}};
  ReasoningState state{graph.problem(), {}};
  std::vector<double> h;
  NodeId current = graph.start();
  while (current != graph.finish()) {
    const auto succ = graph.successors(current);
    NodeId next = succ.front();
    if (succ.size() > 1) {
      h.clear();
      for (NodeId j : succ) {
        if (memo) {
          if (auto it = memo->find(j); it != memo->end()) {
            h.push_back(it->second);
            continue;
          }
        }
        const double value = expert.heuristic(state, graph.node(j).text);
        if (!std::isfinite(value) || value < 0.0 || value > 1.0) {
          throw OutOfRangeScore("expert heuristic " + std::to_string(value) +
                                " outside [0, 1] for node " + std::to_string(j));
        }
        const double floored = std::max(value, cfg.h_floor);
        if (memo) memo->emplace(j, floored);
        h.push_back(floored);
      }
      next = sample_next_state(transition_probabilities(graph, pheromones, current, h, cfg), rng);
    }
    path.nodes.push_back(next);
    if (next != graph.finish() && next != graph.root()) state.chain.push_back(graph.node(next).text);
    current = next;
  }
  return path;
}

void evaporate(PheromoneMatrix& pheromones, double rho) {
  if (!(rho > 0.0 && rho < 1.0)) throw ConfigError("rho must lie in (0, 1)");
  const double keep = 1.0 - rho;
  const double floor = pheromones.tau_min();
  for (double& tau : pheromones.values()) tau = std::max(floor, keep * tau);
}

void deposit(PheromoneMatrix& pheromones, std::span<const Path> paths,
             std::span<const double> qualities, const ColonyConfig& cfg) {
  if (paths.size() != qualities.size() || paths.size() != cfg.ants) {
    throw LengthMismatch("deposit needs one quality per path and one path per ant (" +
                         std::to_string(paths.size()) + " paths, " +
                         std::to_string(qualities.size()) + " qualities, " +
                         std::to_string(cfg.ants) + " ants)");
  }
  auto lay = [&](const Path& path, double q) {
    const double amount = cfg.deposit_clamp ? std::max(q, 0.0) : q;
    if (amount == 0.0) return;
    for (std::size_t i = 0; i + 1 < path.nodes.size(); ++i) {
      pheromones.add(path.nodes[i], path.nodes[i + 1], amount);
    }
  };
  for (std::size_t k = 0; k < paths.size(); ++k) lay(paths[k], qualities[k]);
  if (cfg.elitism && !paths.empty()) {
    const auto best = std::max_element(qualities.begin(), qualities.end()) - qualities.begin();
    lay(paths[static_cast<std::size_t>(best)], qualities[static_cast<std::size_t>(best)]);
  }
}

}  // namespace acotot
