#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "acotot/errors.hpp"
#include "acotot/providers.hpp"
#include "acotot/synth.hpp"
#include "support.hpp"

namespace acotot {
namespace {

std::size_t ipow(std::size_t b, int e) {
  std::size_t r = 1;
  while (e-- > 0) r *= b;
  return r;
}

TEST(GenerateSynth, SmallestInstance) {
  const auto inst = generate_synth({.seed = 0, .depth = 1, .branching = 1});
  EXPECT_EQ(inst.graph.thought_count(), 2u);  // root plus one thought
  EXPECT_EQ(inst.planted, (Path{{0, 1, 2, 3}}));
  EXPECT_EQ(enumerate_paths(inst.graph).size(), 1u);
}

TEST(GenerateSynth, FullTreeWithOnePlantedChain) {
  const SynthSpec spec{.seed = 4, .depth = 4, .branching = 3};
  const auto inst = generate_synth(spec);
  std::size_t thoughts = 0;
  for (int d = 0; d <= 4; ++d) thoughts += ipow(3, d);
  EXPECT_EQ(inst.graph.thought_count(), thoughts);
  const auto paths = enumerate_paths(inst.graph);
  EXPECT_EQ(paths.size(), 81u);

  std::size_t fully_planted = 0;
  for (const auto& p : paths) {
    const auto chain = inst.graph.chain_of(p);
    bool all = true;
    for (const auto& s : chain) all = all && inst.planted_texts.count(s);
    fully_planted += all;
    if (all) EXPECT_EQ(p, inst.planted);
  }
  EXPECT_EQ(fully_planted, 1u);
  EXPECT_EQ(inst.experts.size(), spec.experts);
  EXPECT_EQ(inst.tree_stats.thoughts_returned, thoughts - 1);
  EXPECT_EQ(inst.tree_stats.duplicates_dropped, 0u);
}

TEST(GenerateSynth, DeterministicPerSeed) {
  const auto a = generate_synth({.seed = 11});
  const auto b = generate_synth({.seed = 11});
  const auto c = generate_synth({.seed = 12});
  EXPECT_EQ(a.graph, b.graph);
  EXPECT_EQ(a.planted, b.planted);
  EXPECT_NE(a.graph, c.graph);
}

TEST(GenerateSynth, ExpertsDifferOnlyBySeedAndRole) {
  const auto inst = generate_synth({.seed = 2, .experts = 5});
  std::set<std::uint64_t> seeds;
  for (std::size_t k = 0; k < inst.experts.size(); ++k) {
    const auto& cfg = inst.experts[k]->config();
    seeds.insert(cfg.seed);
    EXPECT_EQ(cfg.role, default_role(k));
    EXPECT_EQ(cfg.planted, inst.planted_texts);
  }
  EXPECT_EQ(seeds.size(), 5u);
}

TEST(GenerateSynth, LedgerCountsTreeGeneration) {
  auto ledger = std::make_shared<CallLedger>();
  generate_synth({.seed = 1, .depth = 3, .branching = 2}, ledger);
  const auto c = ledger->snapshot();
  EXPECT_EQ(c.generator_calls, 1u + 2u + 4u);
  EXPECT_EQ(c.tree_thoughts, 2u + 4u + 8u);
}

TEST(SynthSpec, Validation) {
  EXPECT_THROW(generate_synth({.depth = 11, .branching = 3}), CapExceeded);  // 177147 paths
  EXPECT_NO_THROW((SynthSpec{.depth = 10, .branching = 3}.validate()));      // 59049
  EXPECT_THROW((SynthSpec{.depth = 0}.validate()), ConfigError);
  EXPECT_THROW((SynthSpec{.separation = 0.0}.validate()), ConfigError);
  EXPECT_THROW((SynthSpec{.separation = 1.5}.validate()), ConfigError);
  EXPECT_THROW((SynthSpec{.noise = -1}.validate()), ConfigError);
  EXPECT_THROW((SynthSpec{.experts = 0}.validate()), ConfigError);
}

TEST(SynthSpec, ScoreMapping) {
  const SynthSpec a{.separation = 0.5, .noise = 0.05};
  EXPECT_DOUBLE_EQ(a.miss_score(), 0.1);
  EXPECT_DOUBLE_EQ(a.hit_score(), 0.6);
  const SynthSpec b{.separation = 0.3, .noise = 0.0};
  EXPECT_DOUBLE_EQ(b.miss_score(), 0.05);
  EXPECT_DOUBLE_EQ(b.hit_score(), 0.35);
  const SynthSpec c{.separation = 1.0, .noise = 0.1};
  EXPECT_DOUBLE_EQ(c.hit_score(), 1.0);
  EXPECT_DOUBLE_EQ(c.miss_score(), 1e-3);
  const SynthSpec d{.separation = 0.9, .noise = 0.1};
  EXPECT_NEAR(d.hit_score() - d.miss_score(), 0.9, 1e-12);
  EXPECT_LE(d.hit_score(), 1.0);
  EXPECT_TRUE(a.well_separated());
  EXPECT_FALSE((SynthSpec{.separation = 0.1, .noise = 0.05}.well_separated()));
  // Across a grid the gap is the separation (short of 1 by the 1e-3 floor
  // that keeps decoys positive) and noise never reaches the floor.
  for (double sep : {0.05, 0.2, 0.5, 0.8, 1.0}) {
    for (double noise : {0.0, 0.01, 0.05, 0.1, 0.2}) {
      const SynthSpec s{.separation = sep, .noise = noise};
      EXPECT_NEAR(s.hit_score() - s.miss_score(), std::min(sep, 1.0 - 1e-3), 1e-12) << sep << " " << noise;
      EXPECT_LE(s.hit_score(), 1.0);
      if (s.hit_score() < 1.0) EXPECT_GE(s.miss_score() - noise, noise);
    }
  }
}

ReasoningGraph two_level_binary() {
  ThoughtTree t;
  const auto r = t.add("p");
  const auto a = t.add("a", r), b = t.add("b", r);
  t.add("a1", a);
  t.add("a2", a);
  t.add("b1", b);
  t.add("b2", b);
  return augment(t, "p");
}

TEST(EnumeratePaths, LinearGraph) {
  ThoughtTree t;
  t.add("a", t.add("p"));
  EXPECT_EQ(enumerate_paths(augment(t, "p")), (std::vector<Path>{{{0, 1, 2, 3}}}));
}

TEST(EnumeratePaths, BinaryTreeInLexicographicOrder) {
  const auto g = two_level_binary();
  const auto paths = enumerate_paths(g);
  ASSERT_EQ(paths.size(), 4u);
  EXPECT_TRUE(std::is_sorted(paths.begin(), paths.end()));
  EXPECT_EQ(paths.front(), (Path{{0, 1, 2, 4, 8}}));
  for (const auto& p : paths) EXPECT_TRUE(g.is_complete_path(p));
  EXPECT_EQ(std::set<Path>(paths.begin(), paths.end()).size(), 4u);
}

TEST(EnumeratePaths, CountIsNumberOfLeaves) {
  // In a tree every path ends at a distinct leaf.
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto inst = generate_synth({.seed = seed, .depth = 3, .branching = 1 + int(seed % 4)});
    EXPECT_EQ(enumerate_paths(inst.graph).size(), inst.graph.in_degree(inst.graph.finish()));
  }
}

TEST(EnumeratePaths, CapIsEnforced) {
  const auto g = two_level_binary();
  EXPECT_THROW(enumerate_paths(g, 3), CapExceeded);
  EXPECT_NO_THROW(enumerate_paths(g, 4));
}

TEST(Oracle, LengthOnlyWeightsPreferShortestPath) {
  ThoughtTree t;
  const auto r = t.add("p");
  const auto a = t.add("a", r);
  t.add("b", r);  // leaf at depth 1
  t.add("a1", t.add("a0", a));
  const auto g = augment(t, "p");
  HashEmbedder e;
  std::vector<ExpertPtr> experts{std::make_shared<test::ConstExpert>(0.5, 0.5)};
  const auto best = oracle_best(g, {0, 1, 0}, e, experts);
  EXPECT_EQ(best.path.thought_count(), 2u);
  EXPECT_EQ(g.chain_of(best.path), (std::vector<std::string>{"b"}));
  EXPECT_DOUBLE_EQ(best.q, -std::log(2.0));
  EXPECT_EQ(best.paths_evaluated, 2u);
}

TEST(Oracle, TiesGoToFirstPath) {
  const auto g = two_level_binary();
  HashEmbedder e;
  std::vector<ExpertPtr> experts{std::make_shared<test::ConstExpert>(0.5, 0.5)};
  EXPECT_EQ(oracle_best(g, {0, 0, 1}, e, experts).path, enumerate_paths(g).front());
}

TEST(Oracle, WellSeparatedInstancesPlantTheOptimum) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto inst = generate_synth({.seed = seed, .depth = 3, .branching = 3});
    HashEmbedder e;
    const auto experts = inst.noiseless_experts();
    const auto best = oracle_best(inst.graph, {}, e, experts);
    EXPECT_EQ(best.path, inst.planted) << "seed " << seed;
    for (const auto& p : enumerate_paths(inst.graph)) {
      EXPECT_LE(quality(p, inst.graph, {}, e, experts).total, best.q + 1e-15);
    }
  }
}

TEST(Synth, PlantedChainIsMostCoherent) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto inst = generate_synth({.seed = seed, .depth = 4, .branching = 3});
    HashEmbedder e;
    const double planted = coherence(inst.planted, inst.graph, e);
    for (const auto& p : enumerate_paths(inst.graph)) {
      if (p == inst.planted) continue;
      EXPECT_GT(planted, coherence(p, inst.graph, e)) << "seed " << seed;
    }
  }
}

TEST(SynthGenerator, PlantedSlotCarriesPlantedText) {
  SynthGenerator gen({.seed = 6, .depth = 3, .branching = 4});
  std::vector<std::string> chain;
  for (int d = 1; d <= 3; ++d) {
    const auto out = gen.generate(gen.problem(), chain, 4);
    ASSERT_EQ(out.size(), 4u);
    EXPECT_EQ(out[gen.planted_slot(d)], gen.planted_text(d));
    chain.push_back(gen.planted_text(d));
  }
  const std::vector<std::string> off{"not planted"};
  for (const auto& s : gen.generate(gen.problem(), off, 4)) {
    EXPECT_NE(s, gen.planted_text(2));
  }
  EXPECT_EQ(gen.final_answer("p", chain), chain.back());
}

}  // namespace
}  // namespace acotot
