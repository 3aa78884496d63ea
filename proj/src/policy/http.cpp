#include <httplib.h>

#include <atomic>
#include <cstdlib>
#include <nlohmann/json.hpp>
#include <thread>

#include "molrl/policy.hpp"

namespace molrl::policy {

namespace {

using nlohmann::json;

struct SplitUrl {
  std::string scheme_host_port;
  std::string path;
};

SplitUrl split_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw ConfigError("base_url needs a scheme: " + url);
  const std::string scheme = url.substr(0, scheme_end);
  if (scheme != "http" && scheme != "https") throw ConfigError("base_url scheme must be http or https: " + url);
  const auto path_start = url.find('/', scheme_end + 3);
  SplitUrl out;
  out.scheme_host_port = url.substr(0, path_start);
  out.path = path_start == std::string::npos ? "" : url.substr(path_start);
  while (!out.path.empty() && out.path.back() == '/') out.path.pop_back();
  return out;
}

enum class Outcome { Done, Transient, TransientTimeout };

}  // namespace

EndpointConfig EndpointConfig::from_file(const KeyValueFile& kv) {
  kv.require_known_keys({"format", "version", "kind", "base_url", "model", "timeout_seconds", "max_attempts",
                         "max_concurrency", "backoff_initial_ms", "api_key_env"});
  if (kv.contains("api_key") || kv.contains("token")) throw ConfigError("credentials are read from the environment");
  EndpointConfig cfg;
  cfg.base_url = kv.get("base_url");
  cfg.model = kv.get("model");
  cfg.timeout_seconds = kv.get_double_or("timeout_seconds", cfg.timeout_seconds);
  const auto attempts = kv.get_int_or("max_attempts", static_cast<long long>(cfg.max_attempts));
  const auto concurrency = kv.get_int_or("max_concurrency", static_cast<long long>(cfg.max_concurrency));
  const auto backoff = kv.get_int_or("backoff_initial_ms", static_cast<long long>(cfg.backoff_initial_ms));
  if (attempts < 1 || concurrency < 1 || backoff < 0 || !(cfg.timeout_seconds > 0)) {
    throw ConfigError(kv.source() + ": endpoint limits must be positive");
  }
  cfg.max_attempts = static_cast<std::size_t>(attempts);
  cfg.max_concurrency = static_cast<std::size_t>(concurrency);
  cfg.backoff_initial_ms = static_cast<std::size_t>(backoff);
  cfg.api_key_env = kv.get_or("api_key_env", cfg.api_key_env);
  split_url(cfg.base_url);
  return cfg;
}

HttpPolicy::HttpPolicy(EndpointConfig cfg, Sleeper sleeper) : cfg_(std::move(cfg)), sleeper_(std::move(sleeper)) {
  if (!sleeper_) sleeper_ = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
  if (cfg_.max_attempts == 0) cfg_.max_attempts = 1;
  const SplitUrl url = split_url(cfg_.base_url);
  scheme_host_port_ = url.scheme_host_port;
  path_prefix_ = url.path;
}

std::string HttpPolicy::request_body(const EndpointConfig& cfg, const GenerationRequest& req) {
  json body = {{"model", cfg.model},
               {"messages",
                json::array({{{"role", "system"}, {"content", req.system}}, {{"role", "user"}, {"content", req.user}}})},
               {"temperature", req.temperature},
               {"max_tokens", req.max_new_chars}};
  if (req.seed) body["seed"] = *req.seed;
  return body.dump();
}

std::string HttpPolicy::parse_response(std::string_view body) {
  const json doc = json::parse(body, nullptr, false);
  if (doc.is_discarded()) throw MalformedResponse("response body is not JSON");
  try {
    const json& content = doc.at("choices").at(0).at("message").at("content");
    if (!content.is_string()) throw MalformedResponse("choices[0].message.content is not a string");
    return content.get<std::string>();
  } catch (const json::exception& e) {
    throw MalformedResponse(std::string("unexpected response shape: ") + e.what());
  }
}

Completion HttpPolicy::complete(const GenerationRequest& req) {
  httplib::Client client(scheme_host_port_);
  const auto timeout = std::chrono::milliseconds(static_cast<long long>(cfg_.timeout_seconds * 1000));
  client.set_connection_timeout(timeout);
  client.set_read_timeout(timeout);
  client.set_write_timeout(timeout);
  httplib::Headers headers;
  if (const char* key = std::getenv(cfg_.api_key_env.c_str()); key != nullptr && *key != '\0') {
    headers.emplace("Authorization", std::string("Bearer ") + key);
  }
  const std::string body = request_body(cfg_, req);
  const std::string path = path_prefix_ + "/chat/completions";

  std::string last_error;
  bool last_was_timeout = false;
  for (std::size_t attempt = 0; attempt < cfg_.max_attempts; ++attempt) {
    if (attempt > 0) sleeper_(std::chrono::milliseconds(cfg_.backoff_initial_ms << (attempt - 1)));
    const httplib::Result res = client.Post(path, headers, body, "application/json");
    if (!res) {
      const httplib::Error err = res.error();
      last_was_timeout = err == httplib::Error::ConnectionTimeout || err == httplib::Error::Read;
      last_error = httplib::to_string(err);
      continue;
    }
    if (res->status == 429 || res->status >= 500) {
      last_was_timeout = false;
      last_error = "HTTP " + std::to_string(res->status);
      continue;
    }
    if (res->status < 200 || res->status >= 300) {
      throw PolicyUnavailable("endpoint rejected request with HTTP " + std::to_string(res->status));
    }
    Completion c;
    c.text = parse_response(res->body);
    return c;
  }
  const std::string msg =
      "endpoint failed after " + std::to_string(cfg_.max_attempts) + " attempts: " + last_error;
  if (last_was_timeout) throw Timeout(msg);
  throw PolicyUnavailable(msg);
}

std::vector<Completion> HttpPolicy::complete_many(const std::vector<GenerationRequest>& reqs) {
  std::vector<Completion> out(reqs.size());
  std::vector<std::exception_ptr> errors(reqs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < reqs.size(); i = next++) {
      try {
        out[i] = complete(reqs[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t n_threads = std::min(cfg_.max_concurrency, reqs.size());
  std::vector<std::thread> threads;
  for (std::size_t t = 0; t < n_threads; ++t) threads.emplace_back(worker);
  for (auto& t : threads) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

}  // namespace molrl::policy
