#include "acotot/http_providers.hpp"

#include <condition_variable>
#include <cstdlib>
#include <mutex>
#include <regex>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "acotot/errors.hpp"
#include "acotot/prompts.hpp"

namespace acotot {
namespace {

using json = nlohmann::json;

struct ParsedUrl {
  std::string origin;  // scheme://host[:port]
  std::string path;
};

ParsedUrl parse_url(const std::string& url) {
  static const std::regex re(R"(^(https?://[^/]+)(/.*)?$)");
  std::smatch m;
  if (!std::regex_match(url, m, re)) throw ConfigError("invalid endpoint url: " + url);
  return {m[1], m[2].matched ? m[2].str() : std::string("/")};
}

bool retryable(int status) { return status == 429 || status >= 500; }

std::string completion_text(const json& doc) {
  auto string_at = [](const json& j) -> std::optional<std::string> {
    if (j.is_string()) return j.get<std::string>();
    if (j.is_array()) {  // content parts
      std::string out;
      for (const auto& part : j) {
        if (part.is_object() && part.contains("text") && part["text"].is_string()) {
          out += part["text"].get<std::string>();
        }
      }
      if (!out.empty()) return out;
    }
    return std::nullopt;
  };
  if (doc.contains("choices") && doc["choices"].is_array() && !doc["choices"].empty()) {
    const auto& c = doc["choices"][0];
    if (c.contains("message") && c["message"].contains("content")) {
      if (auto s = string_at(c["message"]["content"])) return *s;
    }
    if (c.contains("text")) {
      if (auto s = string_at(c["text"])) return *s;
    }
  }
  for (const char* key : {"content", "text", "completion", "response", "output_text"}) {
    if (doc.contains(key)) {
      if (auto s = string_at(doc[key])) return *s;
    }
  }
  throw ParseError("response has no completion text");
}

}  // namespace

void HttpEndpointConfig::validate() const {
  parse_url(url);
  if (timeout_ms <= 0) throw ConfigError("timeout_ms must be > 0");
  if (max_retries < 0) throw ConfigError("max_retries must be >= 0");
  if (initial_backoff_ms < 0) throw ConfigError("initial_backoff_ms must be >= 0");
  if (max_in_flight < 1) throw ConfigError("max_in_flight must be >= 1");
}

struct HttpClient::Impl {
  ParsedUrl url;
  std::mutex mu;
  std::condition_variable cv;
  std::size_t in_flight = 0;
};

HttpClient::HttpClient(HttpEndpointConfig config)
    : config_(std::move(config)), impl_(std::make_unique<Impl>()) {
  config_.validate();
  impl_->url = parse_url(config_.url);
}

HttpClient::~HttpClient() = default;

std::string HttpClient::post(const std::string& body) {
  {
    std::unique_lock lock(impl_->mu);
    impl_->cv.wait(lock, [&] { return impl_->in_flight < config_.max_in_flight; });
    ++impl_->in_flight;
  }
  struct Release {
    Impl* impl;
    ~Release() {
      {
        std::lock_guard lock(impl->mu);
        --impl->in_flight;
      }
      impl->cv.notify_one();
    }
  } release{impl_.get()};

  httplib::Headers headers;
  if (!config_.auth_env_var.empty()) {
    const char* secret = std::getenv(config_.auth_env_var.c_str());
    if (!secret || !*secret) {
      throw HttpError("environment variable " + config_.auth_env_var + " is not set", 0);
    }
    const bool bearer = config_.auth_header == "Authorization";
    headers.emplace(config_.auth_header, bearer ? "Bearer " + std::string(secret) : secret);
  }

  httplib::Client client(impl_->url.origin);
  const auto timeout = std::chrono::milliseconds(config_.timeout_ms);
  client.set_connection_timeout(timeout);
  client.set_read_timeout(timeout);
  client.set_write_timeout(timeout);

  int last_status = 0;
  std::string last_reason;
  auto backoff = std::chrono::milliseconds(config_.initial_backoff_ms);
  for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(backoff);
      backoff *= 2;
    }
    auto res = client.Post(impl_->url.path, headers, body, "application/json");
    if (!res) {
      last_status = 0;
      last_reason = httplib::to_string(res.error());
      continue;
    }
    if (res->status >= 200 && res->status < 300) return res->body;
    last_status = res->status;
    last_reason = "status " + std::to_string(res->status);
    if (!retryable(res->status)) break;
  }
  throw HttpError("request to " + config_.url + " failed: " + last_reason, last_status);
}

std::string HttpClient::chat(std::string_view system_prompt, std::string_view user_prompt) {
  json messages = json::array();
  if (!system_prompt.empty()) {
    messages.push_back({{"role", "system"}, {"content", std::string(system_prompt)}});
  }
  messages.push_back({{"role", "user"}, {"content", std::string(user_prompt)}});
  const json request = {
      {"model", config_.model}, {"messages", messages}, {"temperature", config_.temperature}};
  const std::string body = post(request.dump());
  json doc;
  try {
    doc = json::parse(body);
  } catch (const json::exception& e) {
    throw ParseError(std::string("response is not JSON: ") + e.what());
  }
  return completion_text(doc);
}

std::vector<std::string> HttpGenerator::generate(std::string_view problem,
                                                 std::span<const std::string> steps_so_far,
                                                 std::size_t max_branches) {
  if (max_branches == 0) return {};
  const std::string reply = client_.chat({}, prompts::render_proposal(problem, steps_so_far));
  return prompts::parse_numbered_options(reply, max_branches);
}

std::string HttpGenerator::final_answer(std::string_view problem,
                                        std::span<const std::string> chain) {
  return normalize_whitespace(client_.chat({}, prompts::render_final_answer(problem, chain)));
}

HttpExpert::HttpExpert(HttpEndpointConfig config, ExpertRole role,
                       std::optional<std::string> system_prompt)
    : client_(std::move(config)),
      role_(role),
      system_prompt_(system_prompt ? std::move(*system_prompt)
                                   : std::string(prompts::role_system_prompt(role))) {}

double HttpExpert::rate(const std::string& prompt) {
  for (int attempt = 0; attempt < 2; ++attempt) {
    if (auto value = prompts::parse_rating(client_.chat(system_prompt_, prompt))) return *value;
  }
  throw ParseError("expert reply holds no 0-100 rating after a retry");
}

double HttpExpert::heuristic(const ReasoningState& state, std::string_view candidate) {
  return rate(prompts::render_heuristic(state, candidate));
}

double HttpExpert::score_path(std::string_view problem, std::span<const std::string> chain) {
  return rate(prompts::render_path_score(problem, chain));
}

std::vector<double> HttpEmbedder::embed(std::string_view text) {
  const json request = {{"model", client_.config().model}, {"input", std::string(text)}};
  json doc;
  try {
    doc = json::parse(client_.post(request.dump()));
  } catch (const json::exception& e) {
    throw EmbedderFailure(std::string("embedding response is not JSON: ") + e.what());
  }
  const json* vec = nullptr;
  if (doc.contains("data") && doc["data"].is_array() && !doc["data"].empty() &&
      doc["data"][0].contains("embedding")) {
    vec = &doc["data"][0]["embedding"];
  } else if (doc.contains("embedding")) {
    vec = &doc["embedding"];
  }
  if (!vec || !vec->is_array()) throw EmbedderFailure("embedding response has no vector");
  std::vector<double> out;
  out.reserve(vec->size());
  for (const auto& x : *vec) {
    if (!x.is_number()) throw EmbedderFailure("embedding holds a non-numeric entry");
    out.push_back(x.get<double>());
  }
  if (out.size() != dimension_) {
    throw EmbedderFailure("embedding has dimension " + std::to_string(out.size()) +
                          ", expected " + std::to_string(dimension_));
  }
  return out;
}

}  // namespace acotot
