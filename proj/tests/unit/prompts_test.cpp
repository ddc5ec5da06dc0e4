#include <gtest/gtest.h>

#include "acotot/errors.hpp"
#include "acotot/prompts.hpp"

namespace acotot {
namespace {

using prompts::parse_numbered_options;
using prompts::parse_rating;
using prompts::render_proposal;

TEST(ProposalPrompt, FillsBothPlaceholders) {
  const std::vector<std::string> steps{"Convert 50 minutes to hours", "50/60 = 5/6"};
  const auto p = render_proposal("Weng earns $12 an hour.", steps);
  EXPECT_NE(p.find("Input: \"Weng earns $12 an hour.\""), std::string::npos);
  EXPECT_NE(p.find("Steps taken so far: [Convert 50 minutes to hours; 50/60 = 5/6]"),
            std::string::npos);
  EXPECT_EQ(p.find("[problem here]"), std::string::npos);
  EXPECT_EQ(p.find("[previous steps here]"), std::string::npos);
  EXPECT_EQ(p.substr(p.size() - 11), "Output:\n\n1)");
}

TEST(ProposalPrompt, EmptyChainRendersNone) {
  const auto p = render_proposal("q", {});
  const std::string tail = "Input: \"q\"\n\nSteps taken so far: [None]\n\nOutput:\n\n1)";
  ASSERT_GE(p.size(), tail.size());
  EXPECT_EQ(p.substr(p.size() - tail.size()), tail);
}

TEST(ProposalPrompt, WorkedExamplesAreIntact) {
  const auto p = render_proposal("q", {});
  EXPECT_EQ(p.rfind("Imagine you are trying to solve a math problem", 0), 0u);
  EXPECT_NE(p.find("1) Convert the minutes of babysitting to hours."), std::string::npos);
  EXPECT_NE(p.find("IMPORTANT: **MAKE SURE NOT TO HAVE THE DIRECT ANSWER"), std::string::npos);
}

TEST(ParseOptions, TwoNumberedOptions) {
  const std::string reply =
      "Possible next steps:\n\n1) Convert the minutes of babysitting to hours.\n\n"
      "2) Convert the wage per hour to wage per minute.\n";
  const auto opts = parse_numbered_options(reply, 3);
  ASSERT_EQ(opts.size(), 2u);
  EXPECT_EQ(opts[0], "Convert the minutes of babysitting to hours.");
  EXPECT_EQ(opts[1], "Convert the wage per hour to wage per minute.");
}

TEST(ParseOptions, CapsAtMax) {
  std::string reply;
  for (int i = 1; i <= 5; ++i) reply += std::to_string(i) + ") option " + std::to_string(i) + "\n";
  const auto opts = parse_numbered_options(reply, 3);
  EXPECT_EQ(opts, (std::vector<std::string>{"option 1", "option 2", "option 3"}));
}

TEST(ParseOptions, EmptyReplyIsParseError) {
  EXPECT_THROW(parse_numbered_options("", 3), ParseError);
  EXPECT_THROW(parse_numbered_options("  \n\n ", 3), ParseError);
}

TEST(ParseOptions, ContinuationAfterTrailingOne) {
  const auto opts = parse_numbered_options(" Compute 12/60 = 0.2 per minute.\n\n2) Convert 50 min.", 3);
  EXPECT_EQ(opts, (std::vector<std::string>{"Compute 12/60 = 0.2 per minute.", "Convert 50 min."}));
  const auto single = parse_numbered_options(" Compute 50/60 hours.", 3);
  EXPECT_EQ(single, (std::vector<std::string>{"Compute 50/60 hours."}));
}

TEST(ParseOptions, OtherNumberingStylesAndDuplicates) {
  const auto opts = parse_numbered_options("1. a  b\n2: c\n3) a b\n", 5);
  EXPECT_EQ(opts, (std::vector<std::string>{"a b", "c"}));
}

TEST(ParseRating, Examples) {
  EXPECT_DOUBLE_EQ(*parse_rating("85"), 0.85);
  EXPECT_DOUBLE_EQ(*parse_rating("Rating: 42.5 out of 100"), 0.425);
  EXPECT_DOUBLE_EQ(*parse_rating("0"), 0.0);
  EXPECT_FALSE(parse_rating("no idea").has_value());
  EXPECT_FALSE(parse_rating("150").has_value());
}

TEST(RolePrompts, EveryRoleHasOne) {
  for (int i = 0; i < 5; ++i) {
    EXPECT_FALSE(prompts::role_system_prompt(static_cast<ExpertRole>(i)).empty());
  }
}

TEST(RatingPrompts, MentionInputs) {
  const ReasoningState s{"the problem", {"first"}};
  const auto h = prompts::render_heuristic(s, "the candidate");
  EXPECT_NE(h.find("the problem"), std::string::npos);
  EXPECT_NE(h.find("1. first"), std::string::npos);
  EXPECT_NE(h.find("the candidate"), std::string::npos);
  const std::vector<std::string> chain{"x", "y"};
  const auto p = prompts::render_path_score("prob", chain);
  EXPECT_NE(p.find("2. y"), std::string::npos);
}

}  // namespace
}  // namespace acotot
