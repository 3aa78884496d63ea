#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "molrl/kv_config.hpp"
#include "molrl/random.hpp"

namespace molrl::policy {

class PolicyUnavailable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Timeout : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class MalformedResponse : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnknownPrompt : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

struct GenerationRequest {
  std::string system;
  std::string user;
  double temperature = 0.9;
  std::size_t max_new_chars = 8192;
  std::optional<std::uint64_t> seed;
};

struct Completion {
  std::string text;
  std::optional<double> log_prob;
  // Log-probability under the frozen reference, when the policy has one.
  std::optional<double> reference_log_prob;
  // Index into the prompt's candidate list for the toy policy.
  std::optional<std::size_t> candidate;
};

/// Generation port. Every module obtains completions through this interface.
class Policy {
 public:
  virtual ~Policy() = default;
  virtual Completion complete(const GenerationRequest& req) = 0;
  // Default: sequential calls in order.
  virtual std::vector<Completion> complete_many(const std::vector<GenerationRequest>& reqs);
};

/// Scripted responses with log-probability 0.
class MockPolicy : public Policy {
 public:
  using Script = std::function<std::string(const GenerationRequest&, std::size_t call)>;

  explicit MockPolicy(Script script) : script_(std::move(script)) {}
  static MockPolicy fixed(std::string text);

  Completion complete(const GenerationRequest& req) override;
  std::size_t calls() const { return calls_; }

 private:
  Script script_;
  std::size_t calls_ = 0;
};

/// Categorical policy over an enumerated candidate list per prompt; the
/// logits are the trainable parameters.
///
/// Sampling at temperature T > 0 draws from softmax(z / T) and reports the
/// exact log-probability under that distribution. T = 0 returns the argmax
/// (lowest index on ties) with log-probability 0.
class ToyPolicy : public Policy {
 public:
  struct Sample {
    std::size_t index = 0;
    double log_prob = 0;
  };

  explicit ToyPolicy(std::uint64_t seed = 0) : rng_(seed) {}

  // Registers a prompt; `key` is prompt_key(system, user) for requests routed
  // through complete(). Zero logits when none are given.
  std::size_t add_prompt(std::string key, std::vector<std::string> candidates, std::vector<double> logits = {});
  static std::string prompt_key(std::string_view system, std::string_view user);

  std::size_t prompt_count() const { return prompts_.size(); }
  std::size_t prompt_index(std::string_view key) const;  // throws UnknownPrompt
  const std::vector<std::string>& candidates(std::size_t prompt) const;
  const std::vector<double>& logits(std::size_t prompt) const;
  std::vector<double>& mutable_logits(std::size_t prompt);
  const std::vector<double>& reference_logits(std::size_t prompt) const;

  // Copies the current logits into the reference snapshot. Called once
  // before training; later calls throw std::logic_error.
  void freeze_reference();
  bool reference_frozen() const { return frozen_; }

  std::vector<double> probabilities(std::size_t prompt, double temperature) const;
  std::vector<double> reference_probabilities(std::size_t prompt, double temperature) const;
  Sample sample(std::size_t prompt, double temperature, Rng& rng) const;
  Sample sample(std::size_t prompt, double temperature);
  double log_prob(std::size_t prompt, std::size_t candidate, double temperature) const;
  double reference_log_prob(std::size_t prompt, std::size_t candidate, double temperature) const;

  Completion complete(const GenerationRequest& req) override;
  Completion complete_prompt(std::size_t prompt, double temperature, Rng& rng) const;

 private:
  struct Entry {
    std::string key;
    std::vector<std::string> candidates;
    std::vector<double> logits;
    std::vector<double> reference;
  };
  std::vector<Entry> prompts_;
  std::map<std::string, std::size_t, std::less<>> by_key_;
  bool frozen_ = false;
  Rng rng_;

  const Entry& entry(std::size_t prompt) const;
};

// log softmax(z / T); T > 0.
std::vector<double> log_softmax(const std::vector<double>& logits, double temperature);

/// Chat-completion endpoint settings.
///
/// File keys: base_url, model, timeout_seconds, max_attempts,
/// max_concurrency, backoff_initial_ms, api_key_env. The credential itself is
/// read from the environment variable named by api_key_env and never from a
/// file.
struct EndpointConfig {
  std::string base_url;
  std::string model;
  double timeout_seconds = 60;
  std::size_t max_attempts = 3;
  std::size_t max_concurrency = 4;
  std::size_t backoff_initial_ms = 500;
  std::string api_key_env = "MOLRL_API_KEY";

  static EndpointConfig from_file(const KeyValueFile& kv);
};

/// POSTs {model, messages, temperature, max_tokens} to base_url +
/// "/chat/completions" and returns choices[0].message.content. Connection
/// errors, timeouts, 429 and 5xx are retried with exponential backoff; other
/// statuses fail at once.
class HttpPolicy : public Policy {
 public:
  using Sleeper = std::function<void(std::chrono::milliseconds)>;

  explicit HttpPolicy(EndpointConfig cfg, Sleeper sleeper = {});
  Completion complete(const GenerationRequest& req) override;
  // Up to max_concurrency requests in flight; results keep request order.
  std::vector<Completion> complete_many(const std::vector<GenerationRequest>& reqs) override;

  static std::string request_body(const EndpointConfig& cfg, const GenerationRequest& req);
  // Throws MalformedResponse.
  static std::string parse_response(std::string_view body);

 private:
  EndpointConfig cfg_;
  Sleeper sleeper_;
  std::string scheme_host_port_;
  std::string path_prefix_;
};

}  // namespace molrl::policy
