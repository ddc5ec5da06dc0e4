#include "acotot/serialize.hpp"

#include "acotot/errors.hpp"

namespace acotot {

using nlohmann::json;

namespace {

std::string edge_key(NodeId from, NodeId to) {
  return std::to_string(from) + "->" + std::to_string(to);
}

}  // namespace

json graph_to_json(const ReasoningGraph& graph) {
  json nodes = json::array();
  for (const auto& t : graph.nodes()) {
    nodes.push_back({{"id", t.id}, {"text", t.text}, {"depth", t.depth}});
  }
  json edges = json::array();
  for (const auto& [from, to] : graph.edges()) edges.push_back({from, to});
  return {{"problem", graph.problem()},
          {"nodes", std::move(nodes)},
          {"edges", std::move(edges)},
          {"s0", graph.start()},
          {"sf", graph.finish()}};
}

ReasoningGraph graph_from_json(const json& doc) {
  try {
    std::vector<Thought> nodes;
    for (const auto& n : doc.at("nodes")) {
      nodes.push_back({n.at("id").get<NodeId>(), n.at("text").get<std::string>(),
                       n.at("depth").get<int>()});
    }
    std::vector<std::pair<NodeId, NodeId>> edges;
    for (const auto& e : doc.at("edges")) {
      if (!e.is_array() || e.size() != 2) throw InvalidGraph("edge must be a [from, to] pair");
      edges.emplace_back(e[0].get<NodeId>(), e[1].get<NodeId>());
    }
    return ReasoningGraph::from_parts(doc.at("problem").get<std::string>(), std::move(nodes),
                                      std::move(edges), doc.at("s0").get<NodeId>(),
                                      doc.at("sf").get<NodeId>());
  } catch (const json::exception& e) {
    throw InvalidGraph(std::string("malformed graph document: ") + e.what());
  }
}

json pheromones_to_json(const PheromoneMatrix& pheromones) {
  json out = json::object();
  for (std::size_t k = 0; k < pheromones.edge_count(); ++k) {
    const auto [from, to] = pheromones.edge(k);
    out[edge_key(from, to)] = pheromones.values()[k];
  }
  return out;
}

PheromoneMatrix pheromones_from_json(const ReasoningGraph& graph, const json& doc, double tau0,
                                     double tau_min) {
  PheromoneMatrix ph(graph, tau0, tau_min);
  if (!doc.is_object() || doc.size() != graph.edge_count()) {
    throw InvalidGraph("pheromone snapshot does not match the graph's edges");
  }
  for (const auto& [from, to] : graph.edges()) {
    const auto it = doc.find(edge_key(from, to));
    if (it == doc.end() || !it->is_number()) {
      throw InvalidGraph("pheromone snapshot lacks edge " + edge_key(from, to));
    }
    ph.set(from, to, it->get<double>());
  }
  return ph;
}

json path_to_json(const Path& path) { return path.nodes; }

Path path_from_json(const json& doc) {
  try {
    return Path{doc.get<std::vector<NodeId>>()};
  } catch (const json::exception& e) {
    throw InvalidGraph(std::string("malformed path: ") + e.what());
  }
}

json calls_to_json(const CallCounts& calls) {
  return {{"generator_calls", calls.generator_calls},
          {"tree_thoughts", calls.tree_thoughts},
          {"heuristic", calls.heuristic},
          {"path_score", calls.path_score},
          {"embed", calls.embed},
          {"llm_total", calls.llm_total()}};
}

json metrics_to_json(const IterationMetrics& m) {
  json paths = json::array();
  for (const auto& p : m.ant_paths) paths.push_back(path_to_json(p));
  return {{"iteration", m.iteration},
          {"ant_paths", std::move(paths)},
          {"ant_q", m.ant_q},
          {"mean_path_length", m.mean_path_length},
          {"agreement_rate", m.agreement_rate},
          {"diversity", m.diversity},
          {"concentration_ratio", m.concentration_ratio},
          {"best_path", path_to_json(m.best_path)},
          {"best_q", m.best_q},
          {"calls_generator", m.calls.generator_calls},
          {"calls_tree_thoughts", m.calls.tree_thoughts},
          {"calls_heuristic", m.calls.heuristic},
          {"calls_path_score", m.calls.path_score},
          {"calls_embed", m.calls.embed},
          {"calls_llm_total", m.calls.llm_total()}};
}

json result_to_json(const RunResult& result, const ReasoningGraph& graph,
                    const EngineConfig& cfg) {
  json history = json::array();
  for (const auto& m : result.history) history.push_back(metrics_to_json(m));
  return {{"best_path", path_to_json(result.best_path)},
          {"best_chain", result.best_chain},
          {"iterations_run", result.iterations_run},
          {"converged", result.converged},
          {"convergence_window", cfg.convergence_window},
          {"max_iterations", cfg.max_iterations},
          {"tau0", cfg.colony.tau0},
          {"tau_min", cfg.colony.tau_min},
          {"history", std::move(history)},
          {"pheromones", pheromones_to_json(result.pheromones)},
          {"calls", calls_to_json(result.calls)},
          {"graph", graph_to_json(graph)}};
}

}  // namespace acotot
