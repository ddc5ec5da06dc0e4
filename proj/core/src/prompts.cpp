#include "acotot/prompts.hpp"

#include <regex>
#include <set>
#include <sstream>

#include "acotot/errors.hpp"

namespace acotot::prompts {
namespace {

constexpr std::string_view kProposalTemplate =
    R"(Imagine you are trying to solve a math problem with a step-by-step approach. At each step, you should propose a single next step to solve the problem involving a single arithmetic option. If there are multiple options for how to proceed, you should generate up to 3 options.

The format of the problem is as below, follow this format only

Input: XXXX

Steps taken so far: YYYY

Output: ZZZZ

NOTE: The options should not be sequential or connected with each other, each option should be in a way that it can be evaluated independently. Don't jump to the result directly.

IMPORTANT: **MAKE SURE NOT TO HAVE THE DIRECT ANSWER IN YOUR POSSIBLE STEPS OUTPUT, JUST MAKE ONE STEP AT A TIME.**

Solved Example:

Example 1

Input: "Jasper will serve charcuterie at his dinner party. He buys 2 pounds of cheddar cheese for $10, a pound of cream cheese that cost half the price of the cheddar cheese, and a pack of cold cuts that cost twice the price of the cheddar cheese. How much does he spend on the ingredients?"

Steps take so far: [Calculate the price of cheddar cheese which is $10 (given)]

Output: Possible independent steps:

1) Calculate the price of cold cuts which is 2*10 = $20.

2) Calculate the price of cream cheese which is 10/2 = $5 per pound.

Example 2

Input: "Weng earns $12 an hour for babysitting. Yesterday, she just did 50 minutes of babysitting. How much did she earn?"

Steps taken so far: [None]

Output: Possible next steps:

1) Convert the minutes of babysitting to hours.

2) Convert the wage per hour to wage per minute.

Example 3

Input: "James writes a 3-page letter to 2 different friends twice a week. How many pages does he write a year?"

Steps taken so far: [Number of letter written to 1 friend in a week = 2 as he writes twice a week]

Output: Possible next steps:

1) Number of letter written to 2 friends in a week = 2*2 = 4 letters a week.

2) Calculate the number of pages written to 1 friend in a week = 2*3 = 6 pages.

Now give the possible independent next steps for the below question, making one specifically numerical step at a time to solve the problem, without jumping to a proposed answer solution or repeating previous answer steps.

Input: "[problem here]"

Steps taken so far: [previous steps here]

Output:

1))";

std::string render_steps(std::span<const std::string> steps) {
  if (steps.empty()) return "[None]";
  std::string out = "[";
  for (std::size_t i = 0; i < steps.size(); ++i) {
    if (i) out += "; ";
    out += steps[i];
  }
  return out + "]";
}

std::string numbered(std::span<const std::string> chain) {
  if (chain.empty()) return "(no steps yet)\n";
  std::ostringstream os;
  for (std::size_t i = 0; i < chain.size(); ++i) os << (i + 1) << ". " << chain[i] << '\n';
  return os.str();
}

void replace_once(std::string& s, std::string_view what, std::string_view with) {
  if (auto pos = s.find(what); pos != std::string::npos) s.replace(pos, what.size(), with);
}

}  // namespace

std::string render_proposal(std::string_view problem, std::span<const std::string> steps) {
  std::string prompt(kProposalTemplate);
  replace_once(prompt, "[problem here]", problem);
  replace_once(prompt, "[previous steps here]", render_steps(steps));
  return prompt;
}

std::string_view role_system_prompt(ExpertRole role) {
  switch (role) {
    case ExpertRole::mathematical:
      return "You are a mathematical reasoning expert. You judge reasoning steps by whether "
             "their arithmetic and algebra are correct and whether they move the solution "
             "forward.";
    case ExpertRole::scientific:
      return "You are a scientific reasoning expert. You judge reasoning steps by whether they "
             "apply the relevant scientific facts and principles correctly.";
    case ExpertRole::logical:
      return "You are a logical deduction expert. You judge reasoning steps by whether they "
             "follow validly from the problem and the steps before them.";
    case ExpertRole::common_sense:
      return "You are a common-sense reasoning expert. You judge reasoning steps by whether "
             "they are plausible and consistent with everyday knowledge.";
    case ExpertRole::domain_specific:
      return "You are an expert in the domain of the problem. You judge reasoning steps by "
             "whether they use the conventions and methods of that domain.";
  }
  return {};
}

std::string render_heuristic(const ReasoningState& state, std::string_view candidate) {
  std::ostringstream os;
  os << "Problem:\n" << state.problem << "\n\nSteps taken so far:\n" << numbered(state.chain)
     << "\nCandidate next step:\n" << candidate
     << "\n\nRate how promising this candidate step is for solving the problem on a scale "
        "from 0 to 100. Reply with a single number.";
  return os.str();
}

std::string render_path_score(std::string_view problem, std::span<const std::string> chain) {
  std::ostringstream os;
  os << "Problem:\n" << problem << "\n\nComplete chain of reasoning:\n" << numbered(chain)
     << "\nRate the quality of this complete chain of reasoning for solving the problem on a "
        "scale from 0 to 100. Reply with a single number.";
  return os.str();
}

std::string render_final_answer(std::string_view problem, std::span<const std::string> chain) {
  std::ostringstream os;
  os << "Problem:\n" << problem << "\n\nReasoning steps:\n" << numbered(chain)
     << "\nUsing these steps, give the final answer to the problem. Reply with the answer "
        "only.";
  return os.str();
}

std::vector<std::string> parse_numbered_options(std::string_view completion,
                                                std::size_t max_options) {
  static const std::regex option_line(R"(^\s*(\d+)\s*[\).:]\s*(.*\S)\s*$)");
  std::vector<std::string> options;
  std::set<std::string> seen;
  std::string leading;  // text before the first numbered line
  bool saw_numbered = false;
  std::istringstream in{std::string(completion)};
  std::string line;
  auto keep = [&](std::string text) {
    text = normalize_whitespace(text);
    if (!text.empty() && seen.insert(text).second) options.push_back(std::move(text));
  };
  while (std::getline(in, line)) {
    std::smatch m;
    if (std::regex_match(line, m, option_line)) {
      if (!saw_numbered && !leading.empty() && m[1] == "2") keep(leading);
      saw_numbered = true;
      keep(m[2]);
    } else if (!saw_numbered && leading.empty()) {
      leading = normalize_whitespace(line);
    }
  }
  // A lone unnumbered reply continues the prompt's trailing "1)".
  if (!saw_numbered && !leading.empty()) keep(leading);
  if (options.empty()) throw ParseError("completion contains no numbered options");
  if (options.size() > max_options) options.resize(max_options);
  return options;
}

std::optional<double> parse_rating(std::string_view reply) {
  static const std::regex number(R"((\d+(?:\.\d+)?))");
  std::match_results<std::string_view::const_iterator> m;
  if (!std::regex_search(reply.begin(), reply.end(), m, number)) return std::nullopt;
  const double value = std::stod(m[1].str());
  if (value < 0.0 || value > 100.0) return std::nullopt;
  return value / 100.0;
}

}  // namespace acotot::prompts
