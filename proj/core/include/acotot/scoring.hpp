#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "acotot/graph.hpp"
#include "acotot/providers.hpp"

namespace acotot {

/// Weights of the coherence, length and expert-consensus terms.
struct QualityWeights {
  double coherence = 0.4;
  double length = 0.3;
  double moe = 0.3;

  /// Non-negative weights with a positive sum; throws ConfigError.
  void validate() const;
  bool operator==(const QualityWeights&) const = default;
};

struct PathQuality {
  double coherence = 0.0;       ///< C in [0, 1]
  double length_penalty = 0.0;  ///< L <= 0
  double moe = 0.0;             ///< M in [0, 1]
  double total = 0.0;           ///< w1 C + w2 L + w3 M

  bool operator==(const PathQuality&) const = default;
};

/// Text embedded for the state after `chain`: the problem followed by the
/// chain, newline separated.
std::string state_text(std::string_view problem, std::span<const std::string> chain);

/// Cosine of two equal-length vectors. Throws ZeroVector when either has
/// zero norm and EmbedderFailure on a dimension mismatch.
double cosine_similarity(std::span<const double> a, std::span<const double> b);

/// Mean cosine similarity between the embeddings of consecutive states along
/// the path's thought nodes, each term clamped into [0, 1]. Paths with fewer
/// than two thoughts score 1.
double coherence(const Path& path, const ReasoningGraph& graph, Embedder& embedder);

/// -ln |P| with |P| the number of thought nodes.
double length_penalty(const Path& path);

/// Mean of the experts' ratings of the path's chain. Throws OutOfRangeScore
/// when a rating falls outside [0, 1].
double moe_score(const Path& path, const ReasoningGraph& graph, std::span<const ExpertPtr> experts);

PathQuality quality(const Path& path, const ReasoningGraph& graph, const QualityWeights& weights,
                    Embedder& embedder, std::span<const ExpertPtr> experts);

}  // namespace acotot
