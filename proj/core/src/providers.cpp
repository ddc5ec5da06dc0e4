#include "acotot/providers.hpp"

#include <algorithm>
#include <array>

#include "acotot/errors.hpp"

namespace acotot {
namespace {

constexpr std::array<std::string_view, 5> kRoleNames = {
    "mathematical", "scientific", "logical", "common-sense", "domain-specific"};

}  // namespace

std::string ThoughtGenerator::final_answer(std::string_view, std::span<const std::string>) {
  throw ProviderFailure("this generator cannot produce final answers");
}

std::string_view to_string(ExpertRole role) { return kRoleNames[static_cast<std::size_t>(role)]; }

ExpertRole parse_role(std::string_view name) {
  for (std::size_t i = 0; i < kRoleNames.size(); ++i) {
    if (kRoleNames[i] == name) return static_cast<ExpertRole>(i);
  }
  if (name == "common_sense") return ExpertRole::common_sense;
  if (name == "domain_specific") return ExpertRole::domain_specific;
  throw ConfigError("unknown expert role '" + std::string(name) + "'");
}

ExpertRole default_role(std::size_t index) {
  return static_cast<ExpertRole>(index % kRoleNames.size());
}

CallCounts CallLedger::snapshot() const noexcept {
  CallCounts c;
  c.generator_calls = generator_calls_.load(std::memory_order_relaxed);
  c.tree_thoughts = tree_thoughts_.load(std::memory_order_relaxed);
  c.heuristic = heuristic_.load(std::memory_order_relaxed);
  c.path_score = path_score_.load(std::memory_order_relaxed);
  c.embed = embed_.load(std::memory_order_relaxed);
  return c;
}

std::vector<std::string> CountingGenerator::generate(std::string_view problem,
                                                     std::span<const std::string> steps_so_far,
                                                     std::size_t max_branches) {
  auto out = inner_->generate(problem, steps_so_far, max_branches);
  ledger_->add_generator_call(std::min(out.size(), max_branches));
  return out;
}

}  // namespace acotot
