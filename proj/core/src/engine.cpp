#include "acotot/engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <thread>

namespace acotot {

void EngineConfig::validate() const {
  colony.validate();
  weights.validate();
  if (max_iterations < 1) throw ConfigError("max_iterations must be >= 1");
  if (convergence_window < 1) throw ConfigError("convergence_window must be >= 1");
  if (parallelism < 1) throw ConfigError("parallelism must be >= 1");
}

Path extract_best_path(const ReasoningGraph& graph, const PheromoneMatrix& pheromones) {
  Path path{{graph.start()}};
  NodeId current = graph.start();
  while (current != graph.finish()) {
    const auto succ = graph.successors(current);
    NodeId best = succ.front();
    double best_tau = pheromones.at(current, best);
    for (NodeId j : succ.subspan(1)) {
      // successors are ascending, so strict > keeps the smallest id on ties
      if (const double tau = pheromones.at(current, j); tau > best_tau) {
        best = j;
        best_tau = tau;
      }
    }
    path.nodes.push_back(best);
    current = best;
  }
  return path;
}

bool check_convergence(std::span<const Path> best_paths, std::size_t window) {
  if (window == 0 || best_paths.size() < window) return false;
  const auto tail = best_paths.last(window);
  return std::all_of(tail.begin(), tail.end(), [&](const Path& p) { return p == tail.back(); });
}

namespace {

// Most frequent path and its count; ties go to the smallest path.
std::pair<Path, std::size_t> modal_path(std::span<const Path> paths) {
  std::map<Path, std::size_t> counts;
  for (const auto& p : paths) ++counts[p];
  std::pair<Path, std::size_t> best{{}, 0};
  for (const auto& [p, c] : counts) {
    if (c > best.second) best = {p, c};
  }
  return best;
}

}  // namespace

double agreement_rate(std::span<const Path> paths) {
  if (paths.empty()) return 0.0;
  return static_cast<double>(modal_path(paths).second) / static_cast<double>(paths.size());
}

double concentration_ratio(const PheromoneMatrix& pheromones, const Path& best) {
  std::vector<bool> on_path(pheromones.edge_count(), false);
  for (std::size_t i = 0; i + 1 < best.nodes.size(); ++i) {
    on_path[pheromones.index(best.nodes[i], best.nodes[i + 1])] = true;
  }
  double on = 0.0, off = 0.0;
  std::size_t n_on = 0, n_off = 0;
  const auto values = pheromones.values();
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (on_path[k]) {
      on += values[k];
      ++n_on;
    } else {
      off += values[k];
      ++n_off;
    }
  }
  if (n_on == 0 || n_off == 0) return 1.0;
  return (on / static_cast<double>(n_on)) / (off / static_cast<double>(n_off));
}

std::size_t evaluation_count(const ReasoningGraph& graph, const Path& path) {
  std::size_t n = 0;
  for (NodeId id : path.nodes) {
    if (id == graph.finish()) continue;
    const auto out = graph.successors(id).size();
    if (out > 1) n += out;
  }
  return n;
}

std::uint64_t predicted_call_count(std::uint64_t ants, double evaluations_per_path,
                                   std::uint64_t iterations, std::uint64_t tree_overhead) {
  const double colony = static_cast<double>(ants) * evaluations_per_path *
                        static_cast<double>(iterations);
  return static_cast<std::uint64_t>(std::llround(colony)) + tree_overhead;
}

std::uint64_t tree_generation_overhead(int depth, int branching) {
  std::uint64_t total = 0, layer = 1;
  for (int i = 1; i <= depth; ++i) {
    layer *= static_cast<std::uint64_t>(branching);
    total += layer;
  }
  return total;
}

Engine::Engine(const ReasoningGraph& graph, std::vector<ExpertPtr> experts, EmbedderPtr embedder,
               EngineConfig cfg, std::shared_ptr<CallLedger> ledger)
    : graph_(graph),
      cfg_(std::move(cfg)),
      ledger_(ledger ? std::move(ledger) : std::make_shared<CallLedger>()),
      pheromones_(graph, cfg_.colony.tau0, cfg_.colony.tau_min) {
  cfg_.validate();
  if (experts.size() != cfg_.colony.ants) {
    throw ConfigError("need one expert per ant: " + std::to_string(cfg_.colony.ants) +
                      " ants, " + std::to_string(experts.size()) + " experts");
  }
  if (!embedder) throw ConfigError("engine needs an embedder");
  for (auto& e : experts) {
    if (!e) throw ConfigError("expert provider is null");
    experts_.push_back(std::make_shared<CountingExpert>(std::move(e), ledger_));
  }
  embedder_ = std::make_shared<CountingEmbedder>(std::move(embedder), ledger_);
}

template <class Fn>
void Engine::for_each_index(std::size_t count, Fn&& fn) {
  const std::size_t workers = std::min(cfg_.parallelism, count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < count;) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

double Engine::quality_of(const Path& path) {
  return quality(path, graph_, cfg_.weights, *embedder_, experts_).total;
}

const IterationMetrics& Engine::step() {
  const std::size_t t = history_.size() + 1;
  const std::size_t m = cfg_.colony.ants;

  std::vector<Path> paths(m);
  for_each_index(m, [&](std::size_t k) {
    Rng rng = derive_rng(cfg_.colony.seed, t, k);
    HeuristicMemo memo;
    paths[k] = construct_path(graph_, pheromones_, *experts_[k], cfg_.colony, rng, &memo);
  });

  // Identical paths are scored once.
  std::map<Path, std::size_t> slot;
  std::vector<const Path*> distinct;
  for (const auto& p : paths) {
    if (slot.emplace(p, distinct.size()).second) distinct.push_back(&p);
  }
  std::vector<double> q(distinct.size());
  for_each_index(distinct.size(), [&](std::size_t i) { q[i] = quality_of(*distinct[i]); });

  IterationMetrics metrics;
  metrics.iteration = t;
  metrics.ant_q.reserve(m);
  for (const auto& p : paths) metrics.ant_q.push_back(q[slot.at(p)]);

  // Update a copy so a provider failure below leaves the state untouched.
  PheromoneMatrix next = pheromones_;
  evaporate(next, cfg_.colony.rho);
  deposit(next, paths, metrics.ant_q, cfg_.colony);

  metrics.best_path = extract_best_path(graph_, next);
  if (auto it = slot.find(metrics.best_path); it != slot.end()) {
    metrics.best_q = q[it->second];
  } else if (auto cached = extracted_q_.find(metrics.best_path); cached != extracted_q_.end()) {
    metrics.best_q = cached->second;
  } else {
    metrics.best_q = quality_of(metrics.best_path);
    extracted_q_.emplace(metrics.best_path, metrics.best_q);
  }
  pheromones_ = std::move(next);

  double length = 0.0;
  for (const auto& p : paths) length += static_cast<double>(p.thought_count());
  metrics.mean_path_length = length / static_cast<double>(m);
  metrics.agreement_rate = agreement_rate(paths);
  metrics.diversity = static_cast<double>(distinct.size()) / static_cast<double>(m);
  metrics.concentration_ratio = concentration_ratio(pheromones_, metrics.best_path);
  metrics.ant_paths = std::move(paths);
  metrics.calls = ledger_->snapshot();

  history_.push_back(std::move(metrics));
  if (sink_) sink_(history_.back());
  return history_.back();
}

void Engine::restore(PheromoneMatrix pheromones) {
  if (!pheromones.bound_to(graph_)) throw ConfigError("pheromone matrix belongs to another graph");
  pheromones_ = std::move(pheromones);
}

bool Engine::converged() const {
  std::vector<Path> best;
  best.reserve(history_.size());
  for (const auto& h : history_) best.push_back(h.best_path);
  return check_convergence(best, cfg_.convergence_window);
}

RunResult Engine::run() {
  try {
    while (history_.size() < cfg_.max_iterations && !converged()) step();
  } catch (const ProviderFailure& e) {
    throw RunAborted(e.what(), history_);
  }
  RunResult result{.best_path = extract_best_path(graph_, pheromones_),
                   .best_chain = {},
                   .iterations_run = history_.size(),
                   .converged = converged(),
                   .history = history_,
                   .pheromones = pheromones_,
                   .calls = ledger_->snapshot()};
  result.best_chain = graph_.chain_of(result.best_path);
  return result;
}

RunResult run(const ReasoningGraph& graph, std::vector<ExpertPtr> experts, EmbedderPtr embedder,
              const EngineConfig& cfg, std::shared_ptr<CallLedger> ledger) {
  Engine engine(graph, std::move(experts), std::move(embedder), cfg, std::move(ledger));
  return engine.run();
}

}  // namespace acotot
