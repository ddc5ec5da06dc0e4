#pragma once

#include <chrono>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "acotot/providers.hpp"

namespace acotot {

/// Connection settings for one chat-completion or embedding endpoint. The
/// secret itself is never stored: `auth_env_var` names the environment
/// variable read at request time.
struct HttpEndpointConfig {
  std::string url;                      ///< e.g. http://localhost:8000/v1/chat/completions
  std::string model;
  std::string auth_env_var;             ///< empty: no auth header
  std::string auth_header = "Authorization";
  int timeout_ms = 30000;
  int max_retries = 2;
  int initial_backoff_ms = 500;
  double temperature = 0.7;
  std::size_t max_in_flight = 4;

  void validate() const;
};

/// Blocking JSON-over-HTTP client with bounded retries (429, 5xx and
/// transport errors, exponential backoff) and a cap on concurrent requests.
class HttpClient {
 public:
  explicit HttpClient(HttpEndpointConfig config);
  ~HttpClient();
  HttpClient(const HttpClient&) = delete;
  HttpClient& operator=(const HttpClient&) = delete;

  /// POSTs `body` and returns the response body of the first 2xx answer.
  /// Throws HttpError once the retry budget is spent or on other statuses.
  std::string post(const std::string& body);

  /// Sends {model, messages, temperature} and returns the completion text.
  std::string chat(std::string_view system_prompt, std::string_view user_prompt);

  const HttpEndpointConfig& config() const noexcept { return config_; }

 private:
  struct Impl;
  HttpEndpointConfig config_;
  std::unique_ptr<Impl> impl_;
};

/// Central model over HTTP, prompted with the step-proposal template.
class HttpGenerator final : public ThoughtGenerator {
 public:
  explicit HttpGenerator(HttpEndpointConfig config) : client_(std::move(config)) {}

  std::vector<std::string> generate(std::string_view problem,
                                    std::span<const std::string> steps_so_far,
                                    std::size_t max_branches) override;
  std::string final_answer(std::string_view problem,
                           std::span<const std::string> chain) override;

 private:
  HttpClient client_;
};

/// Expert over HTTP: the role selects the system prompt (overridable), and
/// both heuristics and path scores are 0-100 ratings scaled to [0, 1]. A
/// non-numeric reply is retried once before ParseError.
class HttpExpert final : public ExpertProvider {
 public:
  HttpExpert(HttpEndpointConfig config, ExpertRole role,
             std::optional<std::string> system_prompt = std::nullopt);

  ExpertRole role() const override { return role_; }
  double heuristic(const ReasoningState& state, std::string_view candidate) override;
  double score_path(std::string_view problem, std::span<const std::string> chain) override;

 private:
  double rate(const std::string& prompt);

  HttpClient client_;
  ExpertRole role_;
  std::string system_prompt_;
};

/// Embedding endpoint: sends {model, input} and reads data[0].embedding (or
/// a top-level embedding array).
class HttpEmbedder final : public Embedder {
 public:
  HttpEmbedder(HttpEndpointConfig config, std::size_t dimension)
      : client_(std::move(config)), dimension_(dimension) {}

  std::size_t dimension() const override { return dimension_; }
  std::vector<double> embed(std::string_view text) override;

 private:
  HttpClient client_;
  std::size_t dimension_;
};

}  // namespace acotot
