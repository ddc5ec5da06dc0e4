#include "acotot/graph.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "acotot/errors.hpp"
#include "acotot/providers.hpp"

namespace acotot {
namespace {

constexpr NodeId kNoParent = std::numeric_limits<NodeId>::max();

std::string node_str(NodeId id) { return "node " + std::to_string(id); }

}  // namespace

std::string to_string(const Path& path) {
  std::ostringstream os;
  for (std::size_t i = 0; i < path.nodes.size(); ++i) {
    if (i) os << "->";
    os << path.nodes[i];
  }
  return os.str();
}

std::string normalize_whitespace(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(c);
  }
  return out;
}

ReasoningGraph ReasoningGraph::from_parts(std::string problem, std::vector<Thought> nodes,
                                          std::vector<std::pair<NodeId, NodeId>> edges,
                                          NodeId start, NodeId finish) {
  const std::size_t n = nodes.size();
  if (n < 3) throw InvalidGraph("graph needs start, root and end nodes");
  for (std::size_t i = 0; i < n; ++i) {
    if (nodes[i].id != i) throw InvalidGraph("node ids must be dense and ordered");
  }
  if (start >= n || finish >= n || start == finish) {
    throw InvalidGraph("start/end ids are invalid");
  }

  std::sort(edges.begin(), edges.end());
  if (std::adjacent_find(edges.begin(), edges.end()) != edges.end()) {
    throw InvalidGraph("duplicate edge");
  }

  ReasoningGraph g;
  g.problem_ = std::move(problem);
  g.start_ = start;
  g.finish_ = finish;
  g.offsets_.assign(n + 1, 0);
  g.in_degree_.assign(n, 0);
  g.parent_.assign(n, kNoParent);
  g.targets_.reserve(edges.size());
  for (const auto& [from, to] : edges) {
    if (from >= n || to >= n) throw InvalidGraph("edge endpoint out of range");
    if (from == to) throw InvalidGraph("self loop on " + node_str(from));
    ++g.offsets_[from + 1];
    ++g.in_degree_[to];
    g.targets_.push_back(to);
  }
  for (std::size_t i = 0; i < n; ++i) g.offsets_[i + 1] += g.offsets_[i];
  g.nodes_ = std::move(nodes);

  if (g.in_degree_[start] != 0) throw InvalidGraph("start node has predecessors");
  if (g.successors_of(start).size() != 1) throw InvalidGraph("start node needs exactly one successor");
  if (!g.successors_of(finish).empty()) throw InvalidGraph("end node has successors");
  if (g.in_degree_[finish] == 0) throw InvalidGraph("end node has no predecessors");
  if (!g.nodes_[start].text.empty() || !g.nodes_[finish].text.empty()) {
    throw InvalidGraph("start/end nodes carry no text");
  }

  const NodeId root = g.successors_of(start).front();
  if (root == finish) throw InvalidGraph("graph has no root thought");
  if (g.nodes_[start].depth != -1) throw InvalidGraph("start node must have depth -1");
  if (g.nodes_[root].depth != 0) throw InvalidGraph("root must have depth 0");

  for (NodeId i = 0; i < n; ++i) {
    for (NodeId j : g.successors_of(i)) {
      if (j == finish) continue;
      if (g.parent_[j] != kNoParent) throw InvalidGraph(node_str(j) + " has several parents");
      g.parent_[j] = i;
      if (i != start && g.nodes_[j].depth != g.nodes_[i].depth + 1) {
        throw InvalidGraph("edge " + std::to_string(i) + "->" + std::to_string(j) +
                           " skips a layer");
      }
    }
  }

  int max_depth = 0;
  std::map<int, std::set<std::string>> layer_texts;
  for (NodeId i = 0; i < n; ++i) {
    if (i == start || i == finish) continue;
    const Thought& t = g.nodes_[i];
    if (g.parent_[i] == kNoParent) throw InvalidGraph(node_str(i) + " is unreachable");
    if (t.text.empty()) throw InvalidGraph(node_str(i) + " has empty text");
    if (t.depth < 0) throw InvalidGraph(node_str(i) + " has negative depth");
    if (!layer_texts[t.depth].insert(normalize_whitespace(t.text)).second) {
      throw InvalidGraph("duplicate thought text at depth " + std::to_string(t.depth));
    }
    max_depth = std::max(max_depth, t.depth);

    const auto succ = g.successors_of(i);
    const bool to_finish = std::find(succ.begin(), succ.end(), finish) != succ.end();
    if (succ.empty()) throw InvalidGraph(node_str(i) + " is a dead end");
    if (to_finish && succ.size() != 1) {
      throw InvalidGraph(node_str(i) + " links to the end node but is not a leaf");
    }
  }
  if (g.nodes_[finish].depth != max_depth + 1) {
    throw InvalidGraph("end node depth must be one past the deepest thought");
  }
  g.max_depth_ = max_depth;
  return g;
}

const Thought& ReasoningGraph::node(NodeId id) const {
  if (!contains(id)) throw UnknownNode("unknown " + node_str(id));
  return nodes_[id];
}

std::span<const NodeId> ReasoningGraph::successors(NodeId id) const {
  if (!contains(id)) throw UnknownNode("unknown " + node_str(id));
  return successors_of(id);
}

std::size_t ReasoningGraph::in_degree(NodeId id) const {
  if (!contains(id)) throw UnknownNode("unknown " + node_str(id));
  return in_degree_[id];
}

std::optional<NodeId> ReasoningGraph::parent(NodeId id) const {
  if (!contains(id)) throw UnknownNode("unknown " + node_str(id));
  if (parent_[id] == kNoParent) return std::nullopt;
  return parent_[id];
}

std::optional<std::size_t> ReasoningGraph::find_edge(NodeId from, NodeId to) const noexcept {
  if (!contains(from)) return std::nullopt;
  const auto succ = successors_of(from);
  const auto it = std::lower_bound(succ.begin(), succ.end(), to);
  if (it == succ.end() || *it != to) return std::nullopt;
  return offsets_[from] + static_cast<std::size_t>(it - succ.begin());
}

std::size_t ReasoningGraph::edge_index(NodeId from, NodeId to) const {
  if (auto idx = find_edge(from, to)) return *idx;
  throw UnknownNode("no edge " + std::to_string(from) + "->" + std::to_string(to));
}

std::vector<std::pair<NodeId, NodeId>> ReasoningGraph::edges() const {
  std::vector<std::pair<NodeId, NodeId>> out;
  out.reserve(targets_.size());
  for (NodeId i = 0; i < nodes_.size(); ++i) {
    for (NodeId j : successors_of(i)) out.emplace_back(i, j);
  }
  return out;
}

ReasoningState ReasoningGraph::state_of(NodeId id) const {
  if (!contains(id)) throw UnknownNode("unknown " + node_str(id));
  ReasoningState state{problem_, {}};
  if (id == start_) return state;
  if (id == finish_) {
    if (in_degree_[id] != 1) {
      throw UnreachableNode("end node has " + std::to_string(in_degree_[id]) +
                            " predecessors; its state is path-dependent");
    }
    // The single predecessor is the only leaf.
    for (NodeId i = 0; i < nodes_.size(); ++i) {
      const auto succ = successors_of(i);
      if (!succ.empty() && succ.front() == finish_) return state_of(i);
    }
  }
  const NodeId root_id = root();
  std::vector<std::string> reversed;
  for (NodeId cur = id; cur != root_id; cur = parent_[cur]) {
    if (parent_[cur] == kNoParent) throw UnreachableNode(node_str(id) + " is unreachable");
    reversed.push_back(nodes_[cur].text);
  }
  state.chain.assign(reversed.rbegin(), reversed.rend());
  return state;
}

std::vector<std::string> ReasoningGraph::chain_of(const Path& path) const {
  std::vector<std::string> chain;
  const NodeId root_id = root();
  for (NodeId id : path.nodes) {
    if (is_thought(id) && id != root_id) chain.push_back(nodes_[id].text);
  }
  return chain;
}

bool ReasoningGraph::is_complete_path(const Path& path) const noexcept {
  if (path.nodes.size() < 3 || path.nodes.front() != start_ || path.nodes.back() != finish_) {
    return false;
  }
  for (std::size_t i = 0; i + 1 < path.nodes.size(); ++i) {
    if (!find_edge(path.nodes[i], path.nodes[i + 1])) return false;
  }
  return true;
}

ReasoningGraph augment(const ThoughtTree& tree, std::string_view problem) {
  if (tree.nodes.empty()) throw EmptyTree("cannot augment an empty tree");
  const std::size_t n = tree.nodes.size();
  if (tree.nodes[0].parent) throw InvalidGraph("tree root must not have a parent");

  std::vector<std::vector<std::size_t>> children(n);
  for (std::size_t i = 1; i < n; ++i) {
    const auto& p = tree.nodes[i].parent;
    if (!p || *p >= i) throw InvalidGraph("tree node " + std::to_string(i) +
                                          " must name an earlier parent");
    children[*p].push_back(i);
  }

  std::string problem_text = normalize_whitespace(problem);
  std::string root_text = normalize_whitespace(tree.nodes[0].text);
  if (root_text.empty()) root_text = problem_text;
  if (root_text.empty()) throw InvalidGraph("problem text is empty");
  if (problem_text.empty()) problem_text = root_text;

  // Breadth-first id assignment: start = 0, tree nodes 1..n, end = n + 1.
  std::vector<std::size_t> order{0};
  std::vector<int> depth(n, 0);
  for (std::size_t head = 0; head < order.size(); ++head) {
    for (std::size_t c : children[order[head]]) {
      depth[c] = depth[order[head]] + 1;
      order.push_back(c);
    }
  }
  std::vector<NodeId> id_of(n);
  for (std::size_t k = 0; k < order.size(); ++k) id_of[order[k]] = static_cast<NodeId>(k + 1);

  const NodeId start = 0;
  const NodeId finish = static_cast<NodeId>(n + 1);
  int max_depth = 0;
  std::vector<Thought> nodes(n + 2);
  nodes[start] = {start, "", -1};
  std::vector<std::pair<NodeId, NodeId>> edges;
  edges.emplace_back(start, id_of[0]);
  for (std::size_t k = 0; k < order.size(); ++k) {
    const std::size_t t = order[k];
    std::string text = t == 0 ? root_text : normalize_whitespace(tree.nodes[t].text);
    if (text.empty()) throw InvalidGraph("tree node " + std::to_string(t) + " has empty text");
    nodes[id_of[t]] = {id_of[t], std::move(text), depth[t]};
    max_depth = std::max(max_depth, depth[t]);
    if (children[t].empty()) {
      edges.emplace_back(id_of[t], finish);
    } else {
      for (std::size_t c : children[t]) edges.emplace_back(id_of[t], id_of[c]);
    }
  }
  nodes[finish] = {finish, "", max_depth + 1};
  return ReasoningGraph::from_parts(std::move(problem_text), std::move(nodes), std::move(edges),
                                    start, finish);
}

void ToTGenConfig::validate() const {
  if (max_depth < 1) throw ConfigError("tot max_depth must be >= 1");
  if (branches < 1) throw ConfigError("tot branches must be >= 1");
  // Worst-case node count sum_{i=0..D} B^i, saturating.
  std::size_t layer = 1;
  std::size_t total = 1;
  for (int d = 1; d <= max_depth; ++d) {
    if (layer > node_cap) break;
    layer *= static_cast<std::size_t>(branches);
    total += layer;
  }
  if (layer > node_cap || total > node_cap) {
    throw NodeCapExceeded("tree of depth " + std::to_string(max_depth) + " and branching " +
                          std::to_string(branches) + " may exceed the node cap of " +
                          std::to_string(node_cap));
  }
}

ReasoningGraph generate_tot(std::string_view problem, ThoughtGenerator& generator,
                            const ToTGenConfig& cfg, ToTStats* stats) {
  cfg.validate();
  const std::string problem_text = normalize_whitespace(problem);
  if (problem_text.empty()) throw InvalidGraph("problem text is empty");

  ToTStats local;
  ThoughtTree tree;
  tree.add(problem_text);
  std::vector<std::vector<std::string>> chains{{}};  // ancestor chain per tree node
  std::vector<std::size_t> frontier{0};
  const auto branches = static_cast<std::size_t>(cfg.branches);

  for (int d = 0; d < cfg.max_depth && !frontier.empty(); ++d) {
    std::set<std::string> seen_at_next_depth;
    std::vector<std::size_t> next;
    for (std::size_t node : frontier) {
      std::vector<std::string> proposed;
      try {
        proposed = generator.generate(problem_text, chains[node], branches);
      } catch (const std::exception& e) {
        throw GeneratorFailure("thought generation failed at depth " + std::to_string(d) +
                               " (tree node " + std::to_string(node) + "): " + e.what());
      }
      ++local.generator_calls;
      if (proposed.size() > branches) proposed.resize(branches);
      local.thoughts_returned += proposed.size();
      for (auto& raw : proposed) {
        std::string text = normalize_whitespace(raw);
        if (text.empty() || !seen_at_next_depth.insert(text).second) {
          ++local.duplicates_dropped;
          continue;
        }
        const std::size_t child = tree.add(text, node);
        auto chain = chains[node];
        chain.push_back(std::move(text));
        chains.push_back(std::move(chain));
        next.push_back(child);
      }
    }
    frontier = std::move(next);
  }
  if (stats) *stats = local;
  return augment(tree, problem_text);
}

}  // namespace acotot
