#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "acotot/colony.hpp"
#include "acotot/engine.hpp"
#include "acotot/graph.hpp"

namespace acotot {

/// {problem, nodes: [{id, text, depth}], edges: [[i, j]], s0, sf}
nlohmann::json graph_to_json(const ReasoningGraph& graph);
/// Inverse of graph_to_json; throws InvalidGraph on malformed documents.
ReasoningGraph graph_from_json(const nlohmann::json& doc);

/// {"i->j": tau}
nlohmann::json pheromones_to_json(const PheromoneMatrix& pheromones);
/// Rebuilds a matrix for `graph`; every edge must be present.
PheromoneMatrix pheromones_from_json(const ReasoningGraph& graph, const nlohmann::json& doc,
                                     double tau0, double tau_min);

nlohmann::json path_to_json(const Path& path);
Path path_from_json(const nlohmann::json& doc);

nlohmann::json calls_to_json(const CallCounts& calls);

/// One flat object per iteration, as written to the metrics stream.
nlohmann::json metrics_to_json(const IterationMetrics& metrics);

nlohmann::json result_to_json(const RunResult& result, const ReasoningGraph& graph,
                              const EngineConfig& cfg);

}  // namespace acotot
