#pragma once

// Small hand-written providers shared by the unit tests.

#include <atomic>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "acotot/errors.hpp"
#include "acotot/providers.hpp"

namespace acotot::test {

/// Returns whatever the function says for (problem, chain).
class ScriptedGenerator final : public ThoughtGenerator {
 public:
  using Fn = std::function<std::vector<std::string>(std::span<const std::string>)>;
  explicit ScriptedGenerator(Fn fn) : fn_(std::move(fn)) {}

  std::vector<std::string> generate(std::string_view, std::span<const std::string> steps,
                                    std::size_t) override {
    ++calls;
    return fn_(steps);
  }

  int calls = 0;

 private:
  Fn fn_;
};

class ConstExpert final : public ExpertProvider {
 public:
  explicit ConstExpert(double h, double score = 1.0) : h_(h), score_(score) {}
  ExpertRole role() const override { return ExpertRole::mathematical; }
  double heuristic(const ReasoningState&, std::string_view) override { return h_; }
  double score_path(std::string_view, std::span<const std::string>) override { return score_; }

 private:
  double h_, score_;
};

/// Heuristic looked up by candidate text; unknown texts get `fallback`.
class TableExpert final : public ExpertProvider {
 public:
  TableExpert(std::map<std::string, double> h, double fallback, double score = 1.0)
      : h_(std::move(h)), fallback_(fallback), score_(score) {}
  ExpertRole role() const override { return ExpertRole::logical; }
  double heuristic(const ReasoningState&, std::string_view candidate) override {
    auto it = h_.find(std::string(candidate));
    return it == h_.end() ? fallback_ : it->second;
  }
  double score_path(std::string_view, std::span<const std::string>) override { return score_; }

 private:
  std::map<std::string, double> h_;
  double fallback_, score_;
};

/// Fails once `budget` calls have been made.
class FailingExpert final : public ExpertProvider {
 public:
  explicit FailingExpert(int budget) : budget_(budget) {}
  ExpertRole role() const override { return ExpertRole::scientific; }
  double heuristic(const ReasoningState&, std::string_view) override {
    spend();
    return 0.5;
  }
  double score_path(std::string_view, std::span<const std::string>) override {
    spend();
    return 0.5;
  }

 private:
  void spend() {
    if (budget_.fetch_sub(1) <= 0) throw ProviderFailure("expert budget exhausted");
  }
  std::atomic<int> budget_;
};

/// Embeds by calling a function on the state text.
class FnEmbedder final : public Embedder {
 public:
  using Fn = std::function<std::vector<double>(std::string_view)>;
  FnEmbedder(std::size_t dim, Fn fn) : dim_(dim), fn_(std::move(fn)) {}
  std::size_t dimension() const override { return dim_; }
  std::vector<double> embed(std::string_view text) override { return fn_(text); }

 private:
  std::size_t dim_;
  Fn fn_;
};

inline std::size_t count_lines(std::string_view text) {
  std::size_t n = 1;
  for (char c : text) n += c == '\n';
  return n;
}

}  // namespace acotot::test
