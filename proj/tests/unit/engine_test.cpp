#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "acotot/engine.hpp"
#include "acotot/errors.hpp"
#include "acotot/mock_providers.hpp"
#include "acotot/synth.hpp"
#include "support.hpp"

namespace acotot {
namespace {

ReasoningGraph linear_graph(int thoughts) {
  ThoughtTree t;
  std::size_t cur = t.add("p");
  for (int i = 1; i < thoughts; ++i) cur = t.add("s" + std::to_string(i), cur);
  return augment(t, "p");
}

ReasoningGraph fan(int k) {
  ThoughtTree t;
  const auto r = t.add("p");
  for (int i = 0; i < k; ++i) t.add("c" + std::to_string(i), r);
  return augment(t, "p");
}

std::vector<ExpertPtr> const_experts(std::size_t n, double h = 0.5, double score = 0.5) {
  std::vector<ExpertPtr> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(std::make_shared<test::ConstExpert>(h, score));
  return out;
}

EngineConfig small_config(std::size_t ants = 5) {
  EngineConfig cfg;
  cfg.colony.ants = ants;
  return cfg;
}

TEST(Engine, LinearGraphConvergesAtWindow) {
  const auto g = linear_graph(3);
  auto cfg = small_config();
  const auto r = run(g, const_experts(5), std::make_shared<HashEmbedder>(), cfg);
  EXPECT_TRUE(r.converged);
  EXPECT_EQ(r.iterations_run, cfg.convergence_window);
  EXPECT_EQ(r.best_path, (Path{{0, 1, 2, 3, 4}}));
  EXPECT_EQ(r.best_chain, (std::vector<std::string>{"s1", "s2"}));
  // No choice anywhere, so no heuristic was ever requested.
  EXPECT_EQ(r.calls.heuristic, 0u);
}

TEST(Engine, SingleIterationBudget) {
  const auto g = fan(3);
  auto cfg = small_config();
  cfg.max_iterations = 1;
  auto r = run(g, const_experts(5), std::make_shared<HashEmbedder>(), cfg);
  EXPECT_EQ(r.iterations_run, 1u);
  EXPECT_FALSE(r.converged);
  cfg.convergence_window = 1;
  r = run(g, const_experts(5), std::make_shared<HashEmbedder>(), cfg);
  EXPECT_EQ(r.iterations_run, 1u);
  EXPECT_TRUE(r.converged);
}

TEST(Engine, PlantedInstanceMatchesOracle) {
  const auto inst = generate_synth({.seed = 3, .depth = 4, .branching = 3});
  EngineConfig cfg = small_config();
  HashEmbedder oracle_embedder;
  const auto oracle =
      oracle_best(inst.graph, cfg.weights, oracle_embedder, inst.noiseless_experts());
  const auto r = run(inst.graph, inst.expert_ptrs(), std::make_shared<HashEmbedder>(), cfg);
  EXPECT_EQ(r.best_path, oracle.path);
  EXPECT_EQ(oracle.path, inst.planted);
  EXPECT_TRUE(r.converged);
}

TEST(ExtractBestPath, UniformPicksSmallestIds) {
  const auto inst = generate_synth({.seed = 1, .depth = 3, .branching = 3});
  const auto& g = inst.graph;
  PheromoneMatrix ph(g, 1.0, 1e-4);
  Path expected{{g.start()}};
  for (NodeId cur = g.start(); cur != g.finish();) {
    const auto s = g.successors(cur);
    cur = *std::min_element(s.begin(), s.end());
    expected.nodes.push_back(cur);
  }
  EXPECT_EQ(extract_best_path(g, ph), expected);
}

TEST(ExtractBestPath, DominantTrailWins) {
  const auto inst = generate_synth({.seed = 1, .depth = 3, .branching = 3});
  const auto& g = inst.graph;
  PheromoneMatrix ph(g, 1.0, 1e-4);
  const auto paths = enumerate_paths(g);
  const Path& target = paths.back();
  for (std::size_t i = 0; i + 1 < target.nodes.size(); ++i) {
    ph.set(target.nodes[i], target.nodes[i + 1], 10.0);
  }
  EXPECT_EQ(extract_best_path(g, ph), target);
}

TEST(CheckConvergence, Examples) {
  const Path a{{0, 1, 2}}, b{{0, 1, 3}};
  const std::vector<Path> one{a};
  EXPECT_TRUE(check_convergence(one, 1));
  const std::vector<Path> abab{a, b, a, b};
  EXPECT_FALSE(check_convergence(abab, 3));
  const std::vector<Path> aaa{a, a, a};
  EXPECT_TRUE(check_convergence(aaa, 3));
  const std::vector<Path> baa{b, a, a};
  EXPECT_FALSE(check_convergence(baa, 3));
  EXPECT_FALSE(check_convergence(std::vector<Path>{a, a}, 3));
}

TEST(CallAccounting, PredictedCounts) {
  EXPECT_EQ(predicted_call_count(5, 4.0, 6, 0), 120u);
  EXPECT_EQ(predicted_call_count(5, 4.0, 0, 12), 12u);
  EXPECT_EQ(tree_generation_overhead(2, 3), 3u + 9u);
  EXPECT_EQ(tree_generation_overhead(4, 3), 3u + 9u + 27u + 81u);
  EXPECT_EQ(tree_generation_overhead(0, 3), 0u);
}

TEST(CallAccounting, LedgerMatchesWalkedEvaluations) {
  const auto inst = generate_synth({.seed = 9, .depth = 3, .branching = 3});
  auto cfg = small_config();
  cfg.max_iterations = 4;
  cfg.convergence_window = 10;  // run all four
  Engine engine(inst.graph, inst.expert_ptrs(), std::make_shared<HashEmbedder>(), cfg);
  const auto r = engine.run();
  // Memoized per ant and iteration: the heuristic count is the number of
  // distinct branching nodes an ant visits times their out-degree.
  std::uint64_t expected = 0;
  for (const auto& it : r.history) {
    for (const auto& p : it.ant_paths) expected += evaluation_count(inst.graph, p);
  }
  EXPECT_EQ(r.calls.heuristic, expected);
  EXPECT_EQ(expected, 4u * 5u * 9u);  // three branching levels of three
}

TEST(Engine, ReproducibleAndThreadCountIndependent) {
  const auto inst = generate_synth({.seed = 21, .depth = 4, .branching = 3, .noise = 0.1});
  auto cfg = small_config();
  cfg.colony.seed = 77;
  const auto a = run(inst.graph, inst.expert_ptrs(), std::make_shared<HashEmbedder>(), cfg);
  const auto b = run(inst.graph, inst.expert_ptrs(), std::make_shared<HashEmbedder>(), cfg);
  cfg.parallelism = 4;
  const auto c = run(inst.graph, inst.expert_ptrs(), std::make_shared<HashEmbedder>(), cfg);
  for (const auto* other : {&b, &c}) {
    EXPECT_EQ(a.best_path, other->best_path);
    EXPECT_EQ(a.history, other->history);
    EXPECT_EQ(a.pheromones, other->pheromones);
    EXPECT_EQ(a.calls, other->calls);
  }
}

TEST(Engine, UpdateEvaporatesThenDeposits) {
  const auto inst = generate_synth({.seed = 5, .depth = 3, .branching = 3});
  auto cfg = small_config();
  Engine engine(inst.graph, inst.expert_ptrs(), std::make_shared<HashEmbedder>(), cfg);
  const PheromoneMatrix before = engine.pheromones();
  const auto& m = engine.step();

  std::map<std::pair<NodeId, NodeId>, double> expected;
  for (const auto& e : inst.graph.edges()) {
    expected[e] = std::max(cfg.colony.tau_min, (1 - cfg.colony.rho) * before.at(e.first, e.second));
  }
  for (std::size_t k = 0; k < m.ant_paths.size(); ++k) {
    const auto& p = m.ant_paths[k].nodes;
    for (std::size_t i = 0; i + 1 < p.size(); ++i) {
      expected[{p[i], p[i + 1]}] += std::max(m.ant_q[k], 0.0);
    }
  }
  for (const auto& [e, v] : expected) {
    EXPECT_NEAR(engine.pheromones().at(e.first, e.second), v, 1e-12);
  }
}

TEST(Engine, AntQualityIsThePathQuality) {
  const auto inst = generate_synth({.seed = 5, .depth = 3, .branching = 3});
  auto cfg = small_config();
  Engine engine(inst.graph, inst.expert_ptrs(), std::make_shared<HashEmbedder>(), cfg);
  const auto& m = engine.step();
  HashEmbedder e;
  const auto experts = inst.expert_ptrs();
  for (std::size_t k = 0; k < m.ant_paths.size(); ++k) {
    EXPECT_DOUBLE_EQ(m.ant_q[k], quality(m.ant_paths[k], inst.graph, cfg.weights, e, experts).total);
  }
}

TEST(Engine, EarlyStopIsSound) {
  const auto inst = generate_synth({.seed = 12, .depth = 4, .branching = 3, .noise = 0.1});
  auto cfg = small_config();
  const auto r = run(inst.graph, inst.expert_ptrs(), std::make_shared<HashEmbedder>(), cfg);
  ASSERT_TRUE(r.converged);
  Engine again(inst.graph, inst.noiseless_experts(), std::make_shared<HashEmbedder>(), cfg);
  again.restore(r.pheromones);
  EXPECT_EQ(extract_best_path(inst.graph, again.pheromones()), r.best_path);
  EXPECT_EQ(again.step().best_path, r.best_path);
}

TEST(Engine, RestoreRejectsForeignMatrix) {
  const auto g = fan(3);
  Engine engine(g, const_experts(5), std::make_shared<HashEmbedder>(), small_config());
  EXPECT_THROW(engine.restore(PheromoneMatrix(fan(2), 1.0, 1e-4)), ConfigError);
}

TEST(Engine, ProviderFailureAbortsWithPartialHistory) {
  const auto inst = generate_synth({.seed = 2, .depth = 3, .branching = 3});
  auto cfg = small_config(1);
  cfg.convergence_window = 100;
  // One ant evaluates 9 heuristics and one path score per iteration, and
  // occasionally one extra score for an unwalked best path. A budget of 25
  // survives two iterations and fails in the third.
  std::vector<ExpertPtr> experts{std::make_shared<test::FailingExpert>(25)};
  Engine engine(inst.graph, experts, std::make_shared<HashEmbedder>(), cfg);
  PheromoneMatrix snapshot = engine.pheromones();
  std::size_t done = 0;
  engine.set_metrics_sink([&](const IterationMetrics&) {
    snapshot = engine.pheromones();
    ++done;
  });
  try {
    engine.run();
    FAIL() << "expected RunAborted";
  } catch (const RunAborted& e) {
    EXPECT_EQ(e.history().size(), done);
    EXPECT_GE(done, 1u);
    EXPECT_LT(done, 3u);
    EXPECT_EQ(engine.pheromones(), snapshot);
  }
}

TEST(Engine, MetricsStayInRange) {
  const auto inst = generate_synth({.seed = 8, .depth = 4, .branching = 3, .noise = 0.2, .experts = 7});
  auto cfg = small_config(7);
  cfg.convergence_window = 100;
  const auto r = run(inst.graph, inst.expert_ptrs(), std::make_shared<HashEmbedder>(), cfg);
  ASSERT_EQ(r.history.size(), cfg.max_iterations);
  std::uint64_t previous_calls = 0;
  for (std::size_t t = 0; t < r.history.size(); ++t) {
    const auto& m = r.history[t];
    EXPECT_EQ(m.iteration, t + 1);
    EXPECT_EQ(m.ant_paths.size(), 7u);
    EXPECT_GE(m.agreement_rate, 1.0 / 7.0);
    EXPECT_LE(m.agreement_rate, 1.0);
    EXPECT_GT(m.concentration_ratio, 0.0);
    EXPECT_GT(m.diversity, 0.0);
    EXPECT_LE(m.diversity, 1.0);
    EXPECT_DOUBLE_EQ(m.mean_path_length, 5.0);  // root plus four levels
    EXPECT_GE(m.calls.llm_total(), previous_calls);
    previous_calls = m.calls.llm_total();
    for (const auto& p : m.ant_paths) EXPECT_TRUE(inst.graph.is_complete_path(p));
  }
}

TEST(Engine, SinkSeesEveryIteration) {
  const auto g = fan(2);
  auto cfg = small_config();
  Engine engine(g, const_experts(5), std::make_shared<HashEmbedder>(), cfg);
  std::vector<std::size_t> seen;
  engine.set_metrics_sink([&](const IterationMetrics& m) { seen.push_back(m.iteration); });
  const auto r = engine.run();
  ASSERT_EQ(seen.size(), r.iterations_run);
  for (std::size_t i = 0; i < seen.size(); ++i) EXPECT_EQ(seen[i], i + 1);
}

TEST(Engine, ExpertCountMustMatchAnts) {
  const auto g = fan(2);
  EXPECT_THROW(Engine(g, const_experts(3), std::make_shared<HashEmbedder>(), small_config(5)),
               ConfigError);
  EXPECT_THROW(Engine(g, const_experts(5), nullptr, small_config(5)), ConfigError);
}

TEST(AgreementRate, ModalFraction) {
  const Path a{{0, 1}}, b{{0, 2}};
  EXPECT_DOUBLE_EQ(agreement_rate(std::vector<Path>{a, a, b}), 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(agreement_rate(std::vector<Path>{a, b}), 0.5);
  EXPECT_DOUBLE_EQ(agreement_rate(std::vector<Path>{a, a}), 1.0);
}

TEST(ConcentrationRatio, Examples) {
  const auto g = fan(2);
  PheromoneMatrix ph(g, 1.0, 1e-4);
  const Path best{{0, 1, 2, 4}};
  EXPECT_DOUBLE_EQ(concentration_ratio(ph, best), 1.0);
  ph.set(1, 2, 3.0);
  // on-path: (0,1)=1, (1,2)=3, (2,4)=1 -> mean 5/3; off: (1,3)=1, (3,4)=1
  EXPECT_DOUBLE_EQ(concentration_ratio(ph, best), 5.0 / 3.0);
  const auto line = linear_graph(2);
  PheromoneMatrix only(line, 1.0, 1e-4);
  EXPECT_DOUBLE_EQ(concentration_ratio(only, Path{{0, 1, 2, 3}}), 1.0);
}

// Over many seeds the mean modal-path agreement must not fall from one of a
// converged run's last W iterations to the next. Each step is a paired
// comparison; a drop larger than three standard errors fails.
TEST(EngineStatistics, AgreementDoesNotFallAcrossFinalWindow) {
  auto cfg = small_config();
  const std::size_t W = cfg.convergence_window;
  std::vector<std::vector<double>> windows;
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const auto inst = generate_synth({.seed = seed, .depth = 4, .branching = 3, .noise = 0.1});
    cfg.colony.seed = seed;
    const auto r = run(inst.graph, inst.expert_ptrs(), std::make_shared<HashEmbedder>(), cfg);
    if (!r.converged) continue;
    std::vector<double> w;
    for (std::size_t i = r.history.size() - W; i < r.history.size(); ++i) {
      w.push_back(r.history[i].agreement_rate);
    }
    windows.push_back(w);
  }
  ASSERT_GE(windows.size(), 50u);
  for (std::size_t j = 1; j < W; ++j) {
    double mean = 0, sq = 0;
    for (const auto& w : windows) mean += w[j] - w[j - 1];
    mean /= windows.size();
    for (const auto& w : windows) sq += std::pow(w[j] - w[j - 1] - mean, 2);
    const double se = std::sqrt(sq / (windows.size() - 1) / windows.size());
    EXPECT_GE(mean, -3 * se) << "step " << j << " mean change " << mean;
  }
}

TEST(EngineConfig, Validation) {
  EngineConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.max_iterations = 0;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = {};
  cfg.convergence_window = 0;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = {};
  cfg.parallelism = 0;
  EXPECT_THROW(cfg.validate(), ConfigError);
}

}  // namespace
}  // namespace acotot
