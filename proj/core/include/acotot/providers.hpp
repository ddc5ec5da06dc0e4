#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "acotot/graph.hpp"

namespace acotot {

/// Central model that proposes candidate next thoughts.
class ThoughtGenerator {
 public:
  virtual ~ThoughtGenerator() = default;

  /// At most `max_branches` candidate next steps for the given chain, with
  /// no exact duplicates.
  virtual std::vector<std::string> generate(std::string_view problem,
                                            std::span<const std::string> steps_so_far,
                                            std::size_t max_branches) = 0;

  /// Optional post-step: turn an optimized chain into a final answer.
  virtual std::string final_answer(std::string_view problem,
                                   std::span<const std::string> chain);
};

enum class ExpertRole { mathematical, scientific, logical, common_sense, domain_specific };

std::string_view to_string(ExpertRole role);
/// Accepts "mathematical", "scientific", "logical", "common-sense" and
/// "domain-specific". Throws ConfigError otherwise.
ExpertRole parse_role(std::string_view name);
/// Default role for the k-th expert, cycling through all five roles.
ExpertRole default_role(std::size_t index);

/// One ant's expertise: step heuristics for transitions and whole-path
/// ratings for the mixture-of-experts score. Implementations must be safe
/// to call concurrently.
class ExpertProvider {
 public:
  virtual ~ExpertProvider() = default;

  virtual ExpertRole role() const = 0;
  /// Assessment of `candidate` as the next step after `state`, in (0, 1].
  virtual double heuristic(const ReasoningState& state, std::string_view candidate) = 0;
  /// Rating of a complete chain, in [0, 1].
  virtual double score_path(std::string_view problem,
                            std::span<const std::string> chain) = 0;
};

/// Fixed-dimension text embedding.
class Embedder {
 public:
  virtual ~Embedder() = default;

  virtual std::size_t dimension() const = 0;
  virtual std::vector<double> embed(std::string_view text) = 0;
};

using GeneratorPtr = std::shared_ptr<ThoughtGenerator>;
using ExpertPtr = std::shared_ptr<ExpertProvider>;
using EmbedderPtr = std::shared_ptr<Embedder>;

/// Snapshot of provider usage.
struct CallCounts {
  std::uint64_t generator_calls = 0;
  std::uint64_t tree_thoughts = 0;  ///< thoughts produced by the generator
  std::uint64_t heuristic = 0;
  std::uint64_t path_score = 0;
  std::uint64_t embed = 0;

  /// Model calls: generation units, heuristics and path scores.
  std::uint64_t llm_total() const noexcept { return tree_thoughts + heuristic + path_score; }

  bool operator==(const CallCounts&) const = default;
};

/// Thread-safe counters shared by the counting decorators below.
class CallLedger {
 public:
  void add_generator_call(std::uint64_t thoughts) noexcept {
    generator_calls_.fetch_add(1, std::memory_order_relaxed);
    tree_thoughts_.fetch_add(thoughts, std::memory_order_relaxed);
  }
  void add_heuristic() noexcept { heuristic_.fetch_add(1, std::memory_order_relaxed); }
  void add_path_score() noexcept { path_score_.fetch_add(1, std::memory_order_relaxed); }
  void add_embed() noexcept { embed_.fetch_add(1, std::memory_order_relaxed); }

  CallCounts snapshot() const noexcept;

 private:
  std::atomic<std::uint64_t> generator_calls_{0};
  std::atomic<std::uint64_t> tree_thoughts_{0};
  std::atomic<std::uint64_t> heuristic_{0};
  std::atomic<std::uint64_t> path_score_{0};
  std::atomic<std::uint64_t> embed_{0};
};

class CountingGenerator final : public ThoughtGenerator {
 public:
  CountingGenerator(GeneratorPtr inner, std::shared_ptr<CallLedger> ledger)
      : inner_(std::move(inner)), ledger_(std::move(ledger)) {}

  std::vector<std::string> generate(std::string_view problem,
                                    std::span<const std::string> steps_so_far,
                                    std::size_t max_branches) override;
  std::string final_answer(std::string_view problem,
                           std::span<const std::string> chain) override {
    return inner_->final_answer(problem, chain);
  }

 private:
  GeneratorPtr inner_;
  std::shared_ptr<CallLedger> ledger_;
};

class CountingExpert final : public ExpertProvider {
 public:
  CountingExpert(ExpertPtr inner, std::shared_ptr<CallLedger> ledger)
      : inner_(std::move(inner)), ledger_(std::move(ledger)) {}

  ExpertRole role() const override { return inner_->role(); }
  double heuristic(const ReasoningState& state, std::string_view candidate) override {
    ledger_->add_heuristic();
    return inner_->heuristic(state, candidate);
  }
  double score_path(std::string_view problem, std::span<const std::string> chain) override {
    ledger_->add_path_score();
    return inner_->score_path(problem, chain);
  }

 private:
  ExpertPtr inner_;
  std::shared_ptr<CallLedger> ledger_;
};

class CountingEmbedder final : public Embedder {
 public:
  CountingEmbedder(EmbedderPtr inner, std::shared_ptr<CallLedger> ledger)
      : inner_(std::move(inner)), ledger_(std::move(ledger)) {}

  std::size_t dimension() const override { return inner_->dimension(); }
  std::vector<double> embed(std::string_view text) override {
    ledger_->add_embed();
    return inner_->embed(text);
  }

 private:
  EmbedderPtr inner_;
  std::shared_ptr<CallLedger> ledger_;
};

}  // namespace acotot
