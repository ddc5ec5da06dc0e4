#include "acotot/synth.hpp"

#include <cmath>
#include <cstdio>

#include "acotot/errors.hpp"
#include "acotot/hashing.hpp"

namespace acotot {
namespace {

constexpr int kStemTokens = 4;
constexpr int kDecoyTokens = 5;

std::string token(char prefix, std::uint64_t h) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%c%012llx", prefix,
                static_cast<unsigned long long>(h >> 16));
  return buf;
}

}  // namespace

void SynthSpec::validate() const {
  if (depth < 1) throw ConfigError("synth depth must be >= 1");
  if (branching < 1) throw ConfigError("synth branching must be >= 1");
  if (!(separation > 0.0 && separation <= 1.0)) throw ConfigError("separation must lie in (0, 1]");
  if (!(noise >= 0.0) || !std::isfinite(noise)) throw ConfigError("noise must be >= 0");
  if (experts < 1) throw ConfigError("synth needs at least one expert");
  double paths = 1.0;
  for (int i = 0; i < depth; ++i) paths *= branching;
  if (paths > static_cast<double>(kPathCap)) {
    throw CapExceeded("n^D = " + std::to_string(static_cast<long long>(paths)) +
                      " exceeds the path cap of " + std::to_string(kPathCap));
  }
}

double SynthSpec::miss_score() const noexcept {
  const double lo = std::max(2.0 * noise, 0.05);
  return lo + separation > 1.0 ? std::max(1.0 - separation, 1e-3) : lo;
}

double SynthSpec::hit_score() const noexcept {
  return std::min(miss_score() + separation, 1.0);
}

std::string SynthGenerator::problem() const {
  std::string text = "synthetic task";
  for (int i = 0; i < kStemTokens; ++i) {
    text += ' ';
    text += token('s', hash_combine(splitmix64(spec_.seed), static_cast<std::uint64_t>(i)));
  }
  return text + " derive the target value";
}

std::string SynthGenerator::planted_text(int depth) const {
  std::string text;
  for (int i = 0; i < kStemTokens; ++i) {
    text += token('s', hash_combine(splitmix64(spec_.seed), static_cast<std::uint64_t>(i)));
    text += ' ';
  }
  return text + "step" + std::to_string(depth) + " apply";
}

std::size_t SynthGenerator::planted_slot(int depth) const {
  const auto h = hash_combine(hash_combine(splitmix64(spec_.seed), fnv1a64("slot")),
                              static_cast<std::uint64_t>(depth));
  return static_cast<std::size_t>(h % static_cast<std::uint64_t>(spec_.branching));
}

std::vector<std::string> SynthGenerator::generate(std::string_view problem,
                                                  std::span<const std::string> steps_so_far,
                                                  std::size_t max_branches) {
  const int depth = static_cast<int>(steps_so_far.size()) + 1;
  bool on_chain = true;
  for (std::size_t i = 0; i < steps_so_far.size() && on_chain; ++i) {
    on_chain = steps_so_far[i] == planted_text(static_cast<int>(i) + 1);
  }
  std::uint64_t key = hash_combine(splitmix64(spec_.seed), fnv1a64(problem));
  for (const auto& s : steps_so_far) key = hash_combine(key, fnv1a64(s));

  const std::size_t n = std::min<std::size_t>(max_branches, static_cast<std::size_t>(spec_.branching));
  std::vector<std::string> out;
  for (std::size_t c = 0; c < n; ++c) {
    if (on_chain && c == planted_slot(depth)) {
      out.push_back(planted_text(depth));
      continue;
    }
    std::string text;
    for (int w = 0; w < kDecoyTokens; ++w) {
      if (w) text += ' ';
      text += token('w', hash_combine(hash_combine(key, c), static_cast<std::uint64_t>(w)));
    }
    out.push_back(std::move(text));
  }
  return out;
}

std::string SynthGenerator::final_answer(std::string_view, std::span<const std::string> chain) {
  return chain.empty() ? std::string() : chain.back();
}

std::vector<ExpertPtr> SynthInstance::expert_ptrs() const {
  return {experts.begin(), experts.end()};
}

std::vector<ExpertPtr> SynthInstance::noiseless_experts() const {
  std::vector<ExpertPtr> out;
  for (const auto& e : experts) out.push_back(std::make_shared<PlantedExpert>(e->without_noise()));
  return out;
}

SynthInstance generate_synth(const SynthSpec& spec, std::shared_ptr<CallLedger> ledger) {
  spec.validate();
  auto synth = std::make_shared<SynthGenerator>(spec);
  GeneratorPtr generator = synth;
  if (ledger) generator = std::make_shared<CountingGenerator>(generator, ledger);

  ToTGenConfig tot{spec.depth, spec.branching, std::max<std::size_t>(kPathCap * 2, 10000)};
  ToTStats stats;
  ReasoningGraph graph = generate_tot(synth->problem(), *generator, tot, &stats);

  std::set<std::string> planted_texts;
  for (int d = 1; d <= spec.depth; ++d) planted_texts.insert(synth->planted_text(d));

  Path planted{{graph.start(), graph.root()}};
  NodeId current = graph.root();
  while (true) {
    NodeId next = graph.finish();
    for (NodeId j : graph.successors(current)) {
      if (j != graph.finish() && planted_texts.count(graph.node(j).text)) next = j;
    }
    planted.nodes.push_back(next);
    if (next == graph.finish()) break;
    current = next;
  }
  if (planted.thought_count() != static_cast<std::size_t>(spec.depth) + 1) {
    throw InvalidGraph("planted chain did not reach the deepest layer");
  }

  SynthInstance inst{spec, std::move(graph), std::move(planted), planted_texts, {}, stats};
  for (std::size_t k = 0; k < spec.experts; ++k) {
    PlantedExpert::Config cfg;
    cfg.planted = planted_texts;
    cfg.hit_score = spec.hit_score();
    cfg.miss_score = spec.miss_score();
    cfg.noise = spec.noise;
    cfg.seed = hash_combine(splitmix64(spec.seed), k + 1);
    cfg.role = default_role(k);
    inst.experts.push_back(std::make_shared<PlantedExpert>(std::move(cfg)));
  }
  return inst;
}

std::vector<Path> enumerate_paths(const ReasoningGraph& graph, std::size_t cap) {
  // Path counts per node, computed bottom-up (ids increase along every edge
  // except into the end node, which is last).
  std::vector<double> count(graph.node_count(), 0.0);
  count[graph.finish()] = 1.0;
  for (NodeId id = static_cast<NodeId>(graph.node_count()); id-- > 0;) {
    if (id == graph.finish()) continue;
    for (NodeId j : graph.successors(id)) count[id] += count[j];
  }
  if (count[graph.start()] > static_cast<double>(cap)) {
    throw CapExceeded("graph has " + std::to_string(static_cast<long long>(count[graph.start()])) +
                      " paths, over the cap of " + std::to_string(cap));
  }

  std::vector<Path> out;
  out.reserve(static_cast<std::size_t>(count[graph.start()]));
  Path current{{graph.start()}};
  auto walk = [&](auto&& self, NodeId at) -> void {
    if (at == graph.finish()) {
      out.push_back(current);
      return;
    }
    for (NodeId j : graph.successors(at)) {
      current.nodes.push_back(j);
      self(self, j);
      current.nodes.pop_back();
    }
  };
  walk(walk, graph.start());
  return out;
}

OracleResult oracle_best(const ReasoningGraph& graph, const QualityWeights& weights,
                         Embedder& embedder, std::span<const ExpertPtr> experts, std::size_t cap) {
  OracleResult best;
  bool first = true;
  for (const auto& path : enumerate_paths(graph, cap)) {
    const double q = quality(path, graph, weights, embedder, experts).total;
    ++best.paths_evaluated;
    if (first || q > best.q) {
      best.path = path;
      best.q = q;
      first = false;
    }
  }
  return best;
}

}  // namespace acotot
