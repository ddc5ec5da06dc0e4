#include "acotot/scoring.hpp"

#include <algorithm>
#include <cmath>

#include "acotot/errors.hpp"

namespace acotot {

void QualityWeights::validate() const {
  for (double w : {coherence, length, moe}) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw ConfigError("quality weights must be >= 0");
  }
  if (!(coherence + length + moe > 0.0)) throw ConfigError("quality weights must not all be 0");
}

std::string state_text(std::string_view problem, std::span<const std::string> chain) {
  std::string text(problem);
  for (const auto& step : chain) {
    text += '\n';
    text += step;
  }
  return text;
}

double cosine_similarity(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw EmbedderFailure("embedding dimensions differ: " + std::to_string(a.size()) + " vs " +
                          std::to_string(b.size()));
  }
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) throw ZeroVector("cannot take the cosine of a zero-norm embedding");
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

double coherence(const Path& path, const ReasoningGraph& graph, Embedder& embedder) {
  if (path.thought_count() < 2) return 1.0;

  const NodeId root = graph.root();
  std::vector<std::string> chain;
  std::vector<double> previous;
  double sum = 0.0;
  std::size_t pairs = 0;
  for (NodeId id : path.nodes) {
    if (!graph.is_thought(id)) continue;
    if (id != root) chain.push_back(graph.node(id).text);
    std::vector<double> current;
    try {
      current = embedder.embed(state_text(graph.problem(), chain));
    } catch (const ProviderFailure&) {
      throw;
    } catch (const std::exception& e) {
      throw EmbedderFailure(std::string("embedding failed: ") + e.what());
    }
    if (current.size() != embedder.dimension()) {
      throw EmbedderFailure("embedder returned a vector of the wrong dimension");
    }
    if (!previous.empty()) {
      sum += std::clamp(cosine_similarity(previous, current), 0.0, 1.0);
      ++pairs;
    }
    previous = std::move(current);
  }
  return pairs ? sum / static_cast<double>(pairs) : 1.0;
}

double length_penalty(const Path& path) {
  const std::size_t n = std::max<std::size_t>(path.thought_count(), 1);
  return -std::log(static_cast<double>(n));
}

double moe_score(const Path& path, const ReasoningGraph& graph, std::span<const ExpertPtr> experts) {
  if (experts.empty()) throw ConfigError("mixture-of-experts score needs at least one expert");
  const auto chain = graph.chain_of(path);
  double sum = 0.0;
  for (const auto& expert : experts) {
    const double s = expert->score_path(graph.problem(), chain);
    if (!std::isfinite(s) || s < 0.0 || s > 1.0) {
      throw OutOfRangeScore("expert path score " + std::to_string(s) + " outside [0, 1]");
    }
    sum += s;
  }
  return sum / static_cast<double>(experts.size());
}

PathQuality quality(const Path& path, const ReasoningGraph& graph, const QualityWeights& weights,
                    Embedder& embedder, std::span<const ExpertPtr> experts) {
  PathQuality q;
  q.coherence = coherence(path, graph, embedder);
  q.length_penalty = length_penalty(path);
  q.moe = moe_score(path, graph, experts);
  q.total = weights.coherence * q.coherence + weights.length * q.length_penalty +
            weights.moe * q.moe;
  return q;
}

}  // namespace acotot
