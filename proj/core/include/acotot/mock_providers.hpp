#pragma once

#include <cstdint>
#include <set>
#include <string>

#include "acotot/providers.hpp"

namespace acotot {

/// Deterministic thought generator for reproducible trees. Each call draws
/// its options from a fixed phrase table, keyed by a hash of the seed, the
/// problem and the chain; every text names its depth so layers never
/// collide.
class MockGenerator final : public ThoughtGenerator {
 public:
  struct Options {
    std::uint64_t seed = 0;
    /// Replace the last option of every call with a text shared by all nodes
    /// of the same depth, so deduplication has something to remove.
    bool inject_shared_duplicate = false;
  };

  MockGenerator() = default;
  explicit MockGenerator(Options options) : options_(options) {}

  std::vector<std::string> generate(std::string_view problem,
                                    std::span<const std::string> steps_so_far,
                                    std::size_t max_branches) override;
  std::string final_answer(std::string_view problem,
                           std::span<const std::string> chain) override;

 private:
  Options options_;
};

/// Deterministic pseudo-expert: scores are hashes of (seed, inputs) spread
/// over [0.05, 1].
class MockExpert final : public ExpertProvider {
 public:
  explicit MockExpert(std::uint64_t seed = 0, ExpertRole role = ExpertRole::mathematical)
      : seed_(seed), role_(role) {}

  ExpertRole role() const override { return role_; }
  double heuristic(const ReasoningState& state, std::string_view candidate) override;
  double score_path(std::string_view problem, std::span<const std::string> chain) override;

 private:
  std::uint64_t seed_;
  ExpertRole role_;
};

/// Test double that prefers a planted set of thoughts. The perturbation is a
/// pure function of (seed, inputs), uniform in [-noise, noise].
class PlantedExpert final : public ExpertProvider {
 public:
  struct Config {
    std::set<std::string> planted;
    double hit_score = 0.9;   ///< s_hi
    double miss_score = 0.1;  ///< s_lo
    double noise = 0.0;
    std::uint64_t seed = 0;
    ExpertRole role = ExpertRole::mathematical;
    double h_floor = 1e-6;
  };

  /// Throws ConfigError unless hit > miss >= h_floor and noise >= 0.
  explicit PlantedExpert(Config config);

  ExpertRole role() const override { return config_.role; }
  /// s_hi or s_lo by membership of `candidate`, plus noise, clamped to
  /// [h_floor, 1].
  double heuristic(const ReasoningState& state, std::string_view candidate) override;
  /// s_hi when every chain step is planted, else s_lo; plus noise, clamped
  /// to [0, 1].
  double score_path(std::string_view problem, std::span<const std::string> chain) override;

  const Config& config() const noexcept { return config_; }
  PlantedExpert without_noise() const;

 private:
  double perturbation(std::uint64_t key) const;

  Config config_;
};

/// Bag-of-words feature hashing: whitespace tokens are hashed (FNV-1a) into
/// `dimension` buckets, counted, and L2-normalized. Empty text maps to e_0.
class HashEmbedder final : public Embedder {
 public:
  explicit HashEmbedder(std::size_t dimension = 256);

  std::size_t dimension() const override { return dimension_; }
  std::vector<double> embed(std::string_view text) override;
  std::size_t bucket(std::string_view token) const;

 private:
  std::size_t dimension_;
};

}  // namespace acotot
