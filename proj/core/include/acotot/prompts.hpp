#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "acotot/graph.hpp"
#include "acotot/providers.hpp"

namespace acotot::prompts {

/// The step-proposal prompt with its two placeholders filled in. Steps are
/// rendered as "[s1; s2]", or "[None]" for an empty chain.
std::string render_proposal(std::string_view problem, std::span<const std::string> steps);

/// System prompt that sets up an expert's specialization.
std::string_view role_system_prompt(ExpertRole role);

std::string render_heuristic(const ReasoningState& state, std::string_view candidate);
std::string render_path_score(std::string_view problem, std::span<const std::string> chain);
std::string render_final_answer(std::string_view problem, std::span<const std::string> chain);

/// Extracts "1) ...", "2) ..." options from a completion, keeping at most
/// `max_options` distinct ones. A completion that continues directly after
/// the prompt's trailing "1)" is accepted as option one. Throws ParseError
/// when nothing is found.
std::vector<std::string> parse_numbered_options(std::string_view completion,
                                                std::size_t max_options);

/// First number in a 0-100 rating reply, divided by 100; empty when the
/// reply holds no number in range.
std::optional<double> parse_rating(std::string_view reply);

}  // namespace acotot::prompts
