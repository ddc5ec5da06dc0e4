#include "acotot/mock_providers.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "acotot/errors.hpp"
#include "acotot/hashing.hpp"

namespace acotot {
namespace {

constexpr std::array<std::string_view, 8> kVerbs = {
    "compute", "compare", "combine", "simplify", "estimate", "check", "rewrite", "isolate"};
constexpr std::array<std::string_view, 8> kObjects = {
    "the given quantities", "the unknown",   "the ratio",      "the remaining total",
    "the partial sum",      "the unit rate", "the difference", "the product"};

std::uint64_t hash_strings(std::uint64_t seed, std::string_view tag, std::string_view first,
                           std::span<const std::string> rest, std::string_view last = {}) {
  std::uint64_t h = hash_combine(splitmix64(seed), fnv1a64(tag));
  h = hash_combine(h, fnv1a64(first));
  for (const auto& s : rest) h = hash_combine(h, fnv1a64(s));
  return hash_combine(h, fnv1a64(last));
}

std::string hex8(std::uint64_t v) {
  char buf[9];
  std::snprintf(buf, sizeof buf, "%08x", static_cast<unsigned>(v >> 32));
  return buf;
}

}  // namespace

std::vector<std::string> MockGenerator::generate(std::string_view problem,
                                                 std::span<const std::string> steps_so_far,
                                                 std::size_t max_branches) {
  const std::size_t depth = steps_so_far.size() + 1;
  const std::uint64_t key = hash_strings(options_.seed, "generate", problem, steps_so_far);
  std::vector<std::string> out;
  for (std::size_t c = 0; c < max_branches; ++c) {
    if (options_.inject_shared_duplicate && max_branches >= 2 && c + 1 == max_branches) {
      out.push_back("Step " + std::to_string(depth) + ": restate what is known so far");
      break;
    }
    const std::uint64_t h = hash_combine(key, c);
    std::ostringstream text;
    text << "Step " << depth << '.' << (c + 1) << ": " << kVerbs[h % kVerbs.size()] << ' '
         << kObjects[(h >> 8) % kObjects.size()] << " (" << hex8(h) << ')';
    out.push_back(text.str());
  }
  return out;
}

std::string MockGenerator::final_answer(std::string_view problem,
                                        std::span<const std::string> chain) {
  return "answer: " + (chain.empty() ? std::string(problem) : chain.back());
}

double MockExpert::heuristic(const ReasoningState& state, std::string_view candidate) {
  const auto h = hash_strings(seed_, "heuristic", state.problem, state.chain, candidate);
  return 0.05 + 0.95 * unit_interval(h);
}

double MockExpert::score_path(std::string_view problem, std::span<const std::string> chain) {
  const auto h = hash_strings(seed_, "score", problem, chain);
  return 0.05 + 0.95 * unit_interval(h);
}

PlantedExpert::PlantedExpert(Config config) : config_(std::move(config)) {
  if (!(config_.h_floor > 0.0)) throw ConfigError("planted expert h_floor must be > 0");
  if (!(config_.miss_score >= config_.h_floor)) {
    throw ConfigError("planted expert miss score must be >= h_floor");
  }
  if (!(config_.hit_score > config_.miss_score) || config_.hit_score > 1.0) {
    throw ConfigError("planted expert needs miss < hit <= 1");
  }
  if (!(config_.noise >= 0.0)) throw ConfigError("planted expert noise must be >= 0");
}

double PlantedExpert::perturbation(std::uint64_t key) const {
  if (config_.noise == 0.0) return 0.0;
  return config_.noise * (2.0 * unit_interval(splitmix64(key)) - 1.0);
}

double PlantedExpert::heuristic(const ReasoningState& state, std::string_view candidate) {
  const bool hit = config_.planted.count(std::string(candidate)) > 0;
  const double base = hit ? config_.hit_score : config_.miss_score;
  const auto key = hash_strings(config_.seed, "heuristic", state.problem, state.chain, candidate);
  return std::clamp(base + perturbation(key), config_.h_floor, 1.0);
}

double PlantedExpert::score_path(std::string_view problem, std::span<const std::string> chain) {
  const bool all_planted =
      !chain.empty() && std::all_of(chain.begin(), chain.end(), [&](const std::string& step) {
        return config_.planted.count(step) > 0;
      });
  const double base = all_planted ? config_.hit_score : config_.miss_score;
  const auto key = hash_strings(config_.seed, "score", problem, chain);
  return std::clamp(base + perturbation(key), 0.0, 1.0);
}

PlantedExpert PlantedExpert::without_noise() const {
  Config quiet = config_;
  quiet.noise = 0.0;
  return PlantedExpert(std::move(quiet));
}

HashEmbedder::HashEmbedder(std::size_t dimension) : dimension_(dimension) {
  if (dimension_ == 0) throw ConfigError("embedding dimension must be >= 1");
}

std::size_t HashEmbedder::bucket(std::string_view token) const {
  return static_cast<std::size_t>(fnv1a64(token) % dimension_);
}

std::vector<double> HashEmbedder::embed(std::string_view text) {
  std::vector<double> v(dimension_, 0.0);
  std::size_t tokens = 0;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    const std::size_t begin = i;
    while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    if (i > begin) {
      v[bucket(text.substr(begin, i - begin))] += 1.0;
      ++tokens;
    }
  }
  if (tokens == 0) {
    v[0] = 1.0;
    return v;
  }
  double norm = 0.0;
  for (double x : v) norm += x * x;
  norm = std::sqrt(norm);
  for (double& x : v) x /= norm;
  return v;
}

}  // namespace acotot
