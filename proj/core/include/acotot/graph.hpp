#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace acotot {

using NodeId = std::uint32_t;

class ThoughtGenerator;

/// One node of the reasoning graph. The synthetic start node has depth -1,
/// the problem root depth 0 and the end node one past the deepest thought.
struct Thought {
  NodeId id = 0;
  std::string text;
  int depth = 0;

  bool operator==(const Thought&) const = default;
};

/// Problem input plus the thoughts accumulated from the root to a node.
/// The root itself carries the problem text and contributes no chain entry.
struct ReasoningState {
  std::string problem;
  std::vector<std::string> chain;

  bool operator==(const ReasoningState&) const = default;
};

/// An ordered node sequence; complete paths run from the start node to the
/// end node.
struct Path {
  std::vector<NodeId> nodes;

  /// Number of thought nodes, i.e. excluding the start and end nodes.
  std::size_t thought_count() const noexcept {
    return nodes.size() >= 2 ? nodes.size() - 2 : 0;
  }
  std::size_t size() const noexcept { return nodes.size(); }
  bool empty() const noexcept { return nodes.empty(); }

  auto operator<=>(const Path&) const = default;
};

std::string to_string(const Path& path);

/// Collapses whitespace runs to one space and trims both ends. Thought
/// deduplication compares texts after this normalization.
std::string normalize_whitespace(std::string_view text);

/// A rooted tree of thoughts before augmentation. nodes[0] is the root and
/// every other node names a parent that appears earlier in the vector.
struct ThoughtTree {
  struct Node {
    std::string text;
    std::optional<std::size_t> parent;
  };
  std::vector<Node> nodes;

  std::size_t add(std::string text, std::optional<std::size_t> parent = std::nullopt) {
    nodes.push_back({std::move(text), parent});
    return nodes.size() - 1;
  }
};

/// Layered DAG of thoughts with a unique source (start) and sink (end).
/// Immutable once built; safe for concurrent readers.
class ReasoningGraph {
 public:
  /// Builds a graph from explicit parts and validates every structural
  /// invariant; throws InvalidGraph on violation.
  static ReasoningGraph from_parts(std::string problem, std::vector<Thought> nodes,
                                   std::vector<std::pair<NodeId, NodeId>> edges,
                                   NodeId start, NodeId finish);

  const std::string& problem() const noexcept { return problem_; }
  NodeId start() const noexcept { return start_; }
  NodeId finish() const noexcept { return finish_; }
  NodeId root() const noexcept { return successors_of(start_).front(); }

  std::size_t node_count() const noexcept { return nodes_.size(); }
  std::size_t thought_count() const noexcept { return nodes_.size() - 2; }
  std::size_t edge_count() const noexcept { return targets_.size(); }
  int max_depth() const noexcept { return max_depth_; }

  bool contains(NodeId id) const noexcept { return id < nodes_.size(); }
  bool is_thought(NodeId id) const noexcept {
    return contains(id) && id != start_ && id != finish_;
  }
  std::span<const Thought> nodes() const noexcept { return nodes_; }
  const Thought& node(NodeId id) const;

  /// Successor set in ascending id order. Throws UnknownNode.
  std::span<const NodeId> successors(NodeId id) const;
  /// In-degree; only the end node may exceed one.
  std::size_t in_degree(NodeId id) const;
  /// Tree parent of a thought (the start node for the root); empty for the
  /// start and end nodes.
  std::optional<NodeId> parent(NodeId id) const;

  /// Dense index of edge (from, to) in [0, edge_count()), ordered by
  /// (from, to). Throws UnknownNode when the edge does not exist.
  std::size_t edge_index(NodeId from, NodeId to) const;
  std::optional<std::size_t> find_edge(NodeId from, NodeId to) const noexcept;
  /// Every edge, ordered like edge_index.
  std::vector<std::pair<NodeId, NodeId>> edges() const;
  /// Offsets into the edge numbering: edges leaving `id` occupy
  /// [edge_offset(id), edge_offset(id + 1)).
  std::size_t edge_offset(NodeId id) const { return offsets_.at(id); }

  /// Problem plus the thought texts on the unique tree path root -> id. The
  /// end node is accepted only when it has a single predecessor.
  ReasoningState state_of(NodeId id) const;

  /// Thought texts along a path, excluding the start, root and end nodes.
  std::vector<std::string> chain_of(const Path& path) const;

  /// True when `path` is a walk along graph edges from start to finish.
  bool is_complete_path(const Path& path) const noexcept;

  bool operator==(const ReasoningGraph&) const = default;

 private:
  ReasoningGraph() = default;
  std::span<const NodeId> successors_of(NodeId id) const noexcept {
    return {targets_.data() + offsets_[id], targets_.data() + offsets_[id + 1]};
  }

  std::string problem_;
  std::vector<Thought> nodes_;
  std::vector<std::size_t> offsets_;  // CSR, size node_count + 1
  std::vector<NodeId> targets_;
  std::vector<std::size_t> in_degree_;
  std::vector<NodeId> parent_;  // kNoParent for start/end
  NodeId start_ = 0;
  NodeId finish_ = 0;
  int max_depth_ = 0;
};

/// Attaches a start node above the root and an end node below every leaf.
/// The root's text becomes the (normalized) problem when it is empty. Node
/// ids: start = 0, then tree nodes in breadth-first order, end = last.
/// Throws EmptyTree for a tree without nodes and InvalidGraph when the tree
/// is malformed.
ReasoningGraph augment(const ThoughtTree& tree, std::string_view problem);

/// Augmenting an already augmented graph is rejected at compile time.
ReasoningGraph augment(const ReasoningGraph&, std::string_view) = delete;

struct ToTGenConfig {
  int max_depth = 3;            ///< D >= 1
  int branches = 3;             ///< B >= 1
  std::size_t node_cap = 10000; ///< hard cap on sum_{i=0..D} B^i

  void validate() const;
};

struct ToTStats {
  std::size_t generator_calls = 0;
  std::size_t thoughts_returned = 0;  ///< after the B cap
  std::size_t duplicates_dropped = 0;
};

/// Breadth-first tree-of-thought expansion: every node above depth D is
/// expanded once with its ancestor chain, at most B normalized thoughts are
/// kept, and a thought already present at the target depth is dropped.
/// Returns the augmented graph.
ReasoningGraph generate_tot(std::string_view problem, ThoughtGenerator& generator,
                            const ToTGenConfig& cfg, ToTStats* stats = nullptr);

}  // namespace acotot
