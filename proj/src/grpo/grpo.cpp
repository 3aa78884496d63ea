#include "molrl/grpo.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <nlohmann/json.hpp>
#include <numeric>

#include "molrl/chem/canonical.hpp"
#include "molrl/completion.hpp"
#include "molrl/random.hpp"
#include "molrl/text.hpp"

namespace molrl::grpo {

using policy::Completion;

void GrpoConfig::validate() const {
  if (group_size < 2) throw ConfigError("group_size must be >= 2");
  if (!(temperature > 0)) throw ConfigError("temperature must be > 0");
  if (!(kl_coefficient >= 0)) throw ConfigError("kl_coefficient must be >= 0");
  if (!(std_epsilon > 0)) throw ConfigError("std_epsilon must be > 0");
  if (!(learning_rate >= 0)) throw ConfigError("learning_rate must be >= 0");
  if (!(kl_ratio_clip >= 1)) throw ConfigError("kl_ratio_clip must be >= 1");
}

GrpoConfig GrpoConfig::from_file(const KeyValueFile& kv) {
  kv.require_known_keys({"format", "version", "group_size", "temperature", "kl_coefficient", "std_epsilon",
                         "overlong_limit", "learning_rate", "kl_ratio_clip", "iterations", "seed"});
  GrpoConfig cfg;
  auto non_negative = [&](const char* key, long long fallback) {
    const long long v = kv.get_int_or(key, fallback);
    if (v < 0) throw ConfigError(std::string(key) + " must be >= 0");
    return v;
  };
  cfg.group_size = static_cast<std::size_t>(non_negative("group_size", static_cast<long long>(cfg.group_size)));
  cfg.temperature = kv.get_double_or("temperature", cfg.temperature);
  cfg.kl_coefficient = kv.get_double_or("kl_coefficient", cfg.kl_coefficient);
  cfg.std_epsilon = kv.get_double_or("std_epsilon", cfg.std_epsilon);
  cfg.overlong_limit =
      static_cast<std::size_t>(non_negative("overlong_limit", static_cast<long long>(cfg.overlong_limit)));
  cfg.learning_rate = kv.get_double_or("learning_rate", cfg.learning_rate);
  cfg.kl_ratio_clip = kv.get_double_or("kl_ratio_clip", cfg.kl_ratio_clip);
  cfg.iterations = static_cast<std::size_t>(non_negative("iterations", static_cast<long long>(cfg.iterations)));
  cfg.seed = static_cast<std::uint64_t>(non_negative("seed", 0));
  cfg.validate();
  return cfg;
}

std::vector<Completion> generate_group(policy::Policy& policy, const dataset::RlPrompt& prompt,
                                       const GrpoConfig& cfg, std::uint64_t seed) {
  std::vector<policy::GenerationRequest> reqs;
  reqs.reserve(cfg.group_size);
  for (std::size_t i = 0; i < cfg.group_size; ++i) {
    reqs.push_back({prompt.system, prompt.user, cfg.temperature, cfg.overlong_limit, mix_seed(seed, i)});
  }
  return policy.complete_many(reqs);
}

FilterResult overlong_filter(std::vector<Completion> completions, const GrpoConfig& cfg) {
  FilterResult out;
  std::vector<std::size_t> lengths;
  lengths.reserve(completions.size());
  for (const auto& c : completions) lengths.push_back(text::codepoint_count(c.text));
  for (std::size_t i = 0; i < completions.size(); ++i) {
    if (lengths[i] <= cfg.overlong_limit) {
      out.kept.push_back(std::move(completions[i]));
    } else {
      ++out.removed;
    }
  }
  if (out.kept.empty() && !completions.empty()) {
    const auto shortest = static_cast<std::size_t>(std::min_element(lengths.begin(), lengths.end()) - lengths.begin());
    out.kept.push_back(std::move(completions[shortest]));
    --out.removed;
    out.flagged = true;
  }
  return out;
}

std::vector<double> group_advantages(const std::vector<double>& rewards, double std_epsilon) {
  if (rewards.empty()) throw std::invalid_argument("group_advantages of an empty group");
  if (std::adjacent_find(rewards.begin(), rewards.end(), std::not_equal_to<>()) == rewards.end()) {
    return std::vector<double>(rewards.size(), 0.0);
  }
  const double n = static_cast<double>(rewards.size());
  const double mean = std::accumulate(rewards.begin(), rewards.end(), 0.0) / n;
  double var = 0;
  for (const double r : rewards) var += (r - mean) * (r - mean);
  const double sd = std::sqrt(var / n);
  std::vector<double> out;
  out.reserve(rewards.size());
  for (const double r : rewards) out.push_back((r - mean) / (sd + std_epsilon));
  return out;
}

double kl_penalty(const GroupBatch& batch) {
  if (batch.completions.empty()) return 0.0;
  double sum = 0;
  for (const auto& c : batch.completions) {
    if (!c.log_prob || !c.reference_log_prob) throw MissingLogProbs("completion lacks current or reference log-prob");
    const double d = *c.reference_log_prob - *c.log_prob;
    sum += std::expm1(d) - d;
  }
  return std::max(0.0, sum / static_cast<double>(batch.completions.size()));
}

GroupBatch build_group(policy::Policy& policy, const dataset::RlPrompt& prompt, const GrpoConfig& cfg,
                       const reward::RewardConfig& reward_cfg, std::uint64_t seed, RewardCache* cache) {
  GroupBatch batch;
  batch.prompt_id = prompt.id;
  batch.system = prompt.system;
  batch.user = prompt.user;
  FilterResult filtered = overlong_filter(generate_group(policy, prompt, cfg, seed), cfg);
  batch.completions = std::move(filtered.kept);
  batch.filtered_count = filtered.removed;
  batch.flagged = filtered.flagged;

  std::unordered_map<std::string, reward::RewardBreakdown> local;
  auto& memo = cache ? (*cache)[prompt.id] : local;
  for (const auto& c : batch.completions) {
    auto it = memo.find(c.text);
    if (it == memo.end()) {
      const completion::ParsedCompletion parsed = completion::parse_completion(c.text);
      it = memo
               .emplace(c.text, reward::total_reward(parsed, prompt.reference.molecule,
                                                     prompt.reference.example_molecules, reward_cfg))
               .first;
    }
    const reward::RewardBreakdown& b = it->second;
    batch.rewards.push_back(b.total);
    batch.valid.push_back(!b.gated_invalid);
    batch.exact.push_back(b.raw_of(reward::Term::Em) == 1.0);
  }
  batch.advantages = group_advantages(batch.rewards, cfg.std_epsilon);
  return batch;
}

StepStats grpo_step(policy::ToyPolicy& policy, const std::vector<GroupBatch>& batches, const GrpoConfig& cfg) {
  StepStats stats;
  if (batches.empty()) return stats;
  std::size_t n_completions = 0;
  std::vector<std::pair<std::size_t, std::vector<double>>> grads;
  for (const GroupBatch& batch : batches) {
    const std::size_t prompt = policy.prompt_index(policy::ToyPolicy::prompt_key(batch.system, batch.user));
    const std::vector<double> logp = policy::log_softmax(policy.logits(prompt), cfg.temperature);
    const std::vector<double> ref_logp = policy::log_softmax(policy.reference_logits(prompt), cfg.temperature);
    std::vector<double> grad(logp.size(), 0.0);
    const double g = static_cast<double>(batch.completions.size());
    double kl = 0;
    for (std::size_t i = 0; i < batch.completions.size(); ++i) {
      const auto& c = batch.completions[i];
      if (!c.candidate) throw MissingLogProbs("toy update needs candidate indices");
      const std::size_t k = *c.candidate;
      const double d = ref_logp.at(k) - logp[k];
      kl += std::expm1(d) - d;
      const double ratio_minus_one = std::min(std::expm1(d), cfg.kl_ratio_clip - 1.0);
      const double coeff = batch.advantages[i] + cfg.kl_coefficient * ratio_minus_one;
      if (coeff == 0.0) continue;
      // d log pi_k / dz_j = (1[j == k] - p_j) / T
      for (std::size_t j = 0; j < grad.size(); ++j) {
        grad[j] -= coeff * std::exp(logp[j]) / (cfg.temperature * g);
      }
      grad[k] += coeff / (cfg.temperature * g);
    }
    grads.emplace_back(prompt, std::move(grad));
    stats.kl += kl / g;
    for (std::size_t i = 0; i < batch.rewards.size(); ++i) {
      stats.mean_reward += batch.rewards[i];
      stats.mean_abs_advantage += std::abs(batch.advantages[i]);
    }
    n_completions += batch.rewards.size();
    stats.filtered += batch.filtered_count;
    if (batch.flagged) ++stats.flagged_batches;
  }
  const double scale = cfg.learning_rate / static_cast<double>(batches.size());
  for (auto& [prompt, grad] : grads) {
    std::vector<double>& z = policy.mutable_logits(prompt);
    for (std::size_t j = 0; j < z.size(); ++j) z[j] += scale * grad[j];
  }
  stats.kl /= static_cast<double>(batches.size());
  if (n_completions > 0) {
    stats.mean_reward /= static_cast<double>(n_completions);
    stats.mean_abs_advantage /= static_cast<double>(n_completions);
  }
  return stats;
}

namespace {

// Candidate indices whose parsed molecule equals the reference.
std::vector<bool> exact_candidates(const policy::ToyPolicy& policy, std::size_t prompt,
                                   const dataset::RlPrompt& rl) {
  const chem::CanonicalId target = chem::canonical_form(rl.reference.molecule);
  std::vector<bool> out;
  for (const std::string& text : policy.candidates(prompt)) {
    const completion::ParsedCompletion p = completion::parse_completion(text);
    out.push_back(p.molecule && chem::canonical_form(*p.molecule) == target);
  }
  return out;
}

double mass_on(const std::vector<double>& probs, const std::vector<bool>& mask) {
  double s = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (mask[i]) s += probs[i];
  }
  return s;
}

}  // namespace

TrainingReport train_toy(policy::ToyPolicy& policy, const std::vector<dataset::RlPrompt>& prompts,
                         const GrpoConfig& cfg, const reward::RewardConfig& reward_cfg) {
  cfg.validate();
  reward_cfg.validate();
  if (!policy.reference_frozen()) policy.freeze_reference();
  std::vector<std::size_t> index;
  std::vector<std::vector<bool>> exact;
  TrainingReport report;
  for (const auto& p : prompts) {
    index.push_back(policy.prompt_index(policy::ToyPolicy::prompt_key(p.system, p.user)));
    exact.push_back(exact_candidates(policy, index.back(), p));
    report.prompt_ids.push_back(p.id);
  }
  RewardCache cache;
  for (std::size_t it = 0; it < cfg.iterations; ++it) {
    std::vector<GroupBatch> batches;
    std::size_t sampled = 0;
    std::size_t valid = 0;
    for (std::size_t p = 0; p < prompts.size(); ++p) {
      const std::uint64_t seed = mix_seed(cfg.seed, it * prompts.size() + p);
      batches.push_back(build_group(policy, prompts[p], cfg, reward_cfg, seed, &cache));
      sampled += batches.back().valid.size();
      valid += static_cast<std::size_t>(std::count(batches.back().valid.begin(), batches.back().valid.end(), true));
    }
    const StepStats stats = grpo_step(policy, batches, cfg);
    IterationRecord rec;
    rec.iteration = it;
    rec.mean_reward = stats.mean_reward;
    rec.validity = sampled ? static_cast<double>(valid) / static_cast<double>(sampled) : 0.0;
    rec.kl = stats.kl;
    rec.mean_abs_advantage = stats.mean_abs_advantage;
    rec.filtered = stats.filtered;
    for (std::size_t p = 0; p < prompts.size(); ++p) {
      rec.exact_probability += mass_on(policy.probabilities(index[p], 1.0), exact[p]);
    }
    if (!prompts.empty()) rec.exact_probability /= static_cast<double>(prompts.size());
    report.iterations.push_back(rec);
  }
  for (std::size_t p = 0; p < prompts.size(); ++p) {
    report.final_probabilities.push_back(policy.probabilities(index[p], 1.0));
    report.final_exact_probability.push_back(mass_on(report.final_probabilities.back(), exact[p]));
  }
  return report;
}

std::string report_to_json(const TrainingReport& report, int indent) {
  nlohmann::ordered_json doc;
  doc["prompt_ids"] = report.prompt_ids;
  doc["final_exact_probability"] = report.final_exact_probability;
  doc["final_probabilities"] = report.final_probabilities;
  auto& its = doc["iterations"] = nlohmann::ordered_json::array();
  for (const auto& r : report.iterations) {
    its.push_back({{"iteration", r.iteration},
                   {"mean_reward", r.mean_reward},
                   {"validity", r.validity},
                   {"exact_probability", r.exact_probability},
                   {"kl", r.kl},
                   {"mean_abs_advantage", r.mean_abs_advantage},
                   {"filtered", r.filtered}});
  }
  return doc.dump(indent);
}

}  // namespace molrl::grpo
