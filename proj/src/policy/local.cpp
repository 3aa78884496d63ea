#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "molrl/policy.hpp"

namespace molrl::policy {

std::vector<Completion> Policy::complete_many(const std::vector<GenerationRequest>& reqs) {
  std::vector<Completion> out;
  out.reserve(reqs.size());
  for (const auto& r : reqs) out.push_back(complete(r));
  return out;
}

MockPolicy MockPolicy::fixed(std::string text) {
  return MockPolicy([text = std::move(text)](const GenerationRequest&, std::size_t) { return text; });
}

Completion MockPolicy::complete(const GenerationRequest& req) {
  Completion c;
  c.text = script_(req, calls_++);
  c.log_prob = 0.0;
  return c;
}

std::vector<double> log_softmax(const std::vector<double>& logits, double temperature) {
  if (!(temperature > 0)) throw std::invalid_argument("log_softmax needs temperature > 0");
  std::vector<double> out(logits.size());
  if (logits.empty()) return out;
  double top = -std::numeric_limits<double>::infinity();
  for (const double z : logits) top = std::max(top, z / temperature);
  double sum = 0;
  for (const double z : logits) sum += std::exp(z / temperature - top);
  const double log_norm = top + std::log(sum);
  for (std::size_t i = 0; i < logits.size(); ++i) out[i] = logits[i] / temperature - log_norm;
  return out;
}

namespace {

std::vector<double> exp_all(std::vector<double> v) {
  for (double& x : v) x = std::exp(x);
  return v;
}

std::size_t argmax(const std::vector<double>& v) {
  return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

}  // namespace

std::string ToyPolicy::prompt_key(std::string_view system, std::string_view user) {
  std::string key(system);
  key.push_back('\x1f');
  key.append(user);
  return key;
}

std::size_t ToyPolicy::add_prompt(std::string key, std::vector<std::string> candidates, std::vector<double> logits) {
  if (candidates.empty()) throw std::invalid_argument("toy prompt needs at least one candidate");
  if (logits.empty()) logits.assign(candidates.size(), 0.0);
  if (logits.size() != candidates.size()) throw std::invalid_argument("toy prompt logits/candidates size mismatch");
  if (frozen_) throw std::logic_error("cannot add prompts after the reference is frozen");
  if (by_key_.count(key)) throw std::invalid_argument("duplicate toy prompt key");
  const std::size_t idx = prompts_.size();
  by_key_.emplace(key, idx);
  prompts_.push_back({std::move(key), std::move(candidates), logits, logits});
  return idx;
}

std::size_t ToyPolicy::prompt_index(std::string_view key) const {
  const auto it = by_key_.find(key);
  if (it == by_key_.end()) throw UnknownPrompt("toy policy has no prompt for this request");
  return it->second;
}

const ToyPolicy::Entry& ToyPolicy::entry(std::size_t prompt) const {
  if (prompt >= prompts_.size()) throw UnknownPrompt("toy prompt index " + std::to_string(prompt));
  return prompts_[prompt];
}

const std::vector<std::string>& ToyPolicy::candidates(std::size_t prompt) const { return entry(prompt).candidates; }
const std::vector<double>& ToyPolicy::logits(std::size_t prompt) const { return entry(prompt).logits; }
const std::vector<double>& ToyPolicy::reference_logits(std::size_t prompt) const { return entry(prompt).reference; }

std::vector<double>& ToyPolicy::mutable_logits(std::size_t prompt) {
  entry(prompt);
  return prompts_[prompt].logits;
}

void ToyPolicy::freeze_reference() {
  if (frozen_) throw std::logic_error("reference snapshot already frozen");
  for (Entry& e : prompts_) e.reference = e.logits;
  frozen_ = true;
}

std::vector<double> ToyPolicy::probabilities(std::size_t prompt, double temperature) const {
  return exp_all(log_softmax(entry(prompt).logits, temperature));
}

std::vector<double> ToyPolicy::reference_probabilities(std::size_t prompt, double temperature) const {
  return exp_all(log_softmax(entry(prompt).reference, temperature));
}

double ToyPolicy::log_prob(std::size_t prompt, std::size_t candidate, double temperature) const {
  return log_softmax(entry(prompt).logits, temperature).at(candidate);
}

double ToyPolicy::reference_log_prob(std::size_t prompt, std::size_t candidate, double temperature) const {
  return log_softmax(entry(prompt).reference, temperature).at(candidate);
}

ToyPolicy::Sample ToyPolicy::sample(std::size_t prompt, double temperature, Rng& rng) const {
  const Entry& e = entry(prompt);
  if (temperature < 0) throw std::invalid_argument("negative temperature");
  if (temperature == 0) return {argmax(e.logits), 0.0};
  const std::vector<double> logp = log_softmax(e.logits, temperature);
  const double u = rng.uniform();
  double acc = 0;
  std::size_t pick = logp.size() - 1;
  for (std::size_t i = 0; i < logp.size(); ++i) {
    acc += std::exp(logp[i]);
    if (u < acc) {
      pick = i;
      break;
    }
  }
  return {pick, logp[pick]};
}

ToyPolicy::Sample ToyPolicy::sample(std::size_t prompt, double temperature) { return sample(prompt, temperature, rng_); }

Completion ToyPolicy::complete_prompt(std::size_t prompt, double temperature, Rng& rng) const {
  const Sample s = sample(prompt, temperature, rng);
  Completion c;
  c.text = entry(prompt).candidates[s.index];
  c.log_prob = s.log_prob;
  c.reference_log_prob = temperature > 0 ? reference_log_prob(prompt, s.index, temperature) : 0.0;
  c.candidate = s.index;
  return c;
}

Completion ToyPolicy::complete(const GenerationRequest& req) {
  const std::size_t prompt = prompt_index(prompt_key(req.system, req.user));
  if (req.seed) {
    Rng local(*req.seed);
    return complete_prompt(prompt, req.temperature, local);
  }
  return complete_prompt(prompt, req.temperature, rng_);
}

}  // namespace molrl::policy
