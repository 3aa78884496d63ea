#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "molrl/dataset.hpp"
#include "molrl/kv_config.hpp"
#include "molrl/policy.hpp"
#include "molrl/reward.hpp"

namespace molrl::grpo {

class MissingLogProbs : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// File keys: group_size, temperature, kl_coefficient, std_epsilon,
/// overlong_limit, learning_rate, kl_ratio_clip, iterations, seed.
struct GrpoConfig {
  std::size_t group_size = 8;
  double temperature = 0.9;
  double kl_coefficient = 0.04;
  double std_epsilon = 1e-8;
  std::size_t overlong_limit = 16000;
  double learning_rate = 0.25;
  // Upper bound on pi_ref / pi inside the KL gradient. A candidate sampled
  // far below its reference probability would otherwise get an update
  // proportional to that ratio. The reported KL is not clipped.
  double kl_ratio_clip = 10.0;
  std::size_t iterations = 500;
  std::uint64_t seed = 0;

  // Throws ConfigError.
  void validate() const;
  static GrpoConfig from_file(const KeyValueFile& kv);
};

struct GroupBatch {
  std::string prompt_id;
  std::string system;
  std::string user;
  std::vector<policy::Completion> completions;
  std::vector<double> rewards;
  std::vector<double> advantages;
  std::vector<bool> valid;  // completion yielded a molecule
  std::vector<bool> exact;  // molecule matches the reference
  std::size_t filtered_count = 0;
  bool flagged = false;  // every completion was over the limit
};

// Exactly cfg.group_size completions for the prompt; request i uses seed
// mix_seed(seed, i).
std::vector<policy::Completion> generate_group(policy::Policy& policy, const dataset::RlPrompt& prompt,
                                               const GrpoConfig& cfg, std::uint64_t seed);

struct FilterResult {
  std::vector<policy::Completion> kept;
  std::size_t removed = 0;
  bool flagged = false;
};

// Drops completions longer than cfg.overlong_limit code points. If all are
// too long, keeps the shortest (first on ties) and sets `flagged`.
FilterResult overlong_filter(std::vector<policy::Completion> completions, const GrpoConfig& cfg);

// (r - mean) / (population std + eps); equal rewards (or a single one) yield zeros.
// Throws std::invalid_argument on an empty list.
std::vector<double> group_advantages(const std::vector<double>& rewards, double std_epsilon);

// Mean over completions of exp(d) - d - 1 with d = reference - current.
double kl_penalty(const GroupBatch& batch);

// Rewards keyed by completion text, per prompt id.
using RewardCache = std::map<std::string, std::unordered_map<std::string, reward::RewardBreakdown>>;

GroupBatch build_group(policy::Policy& policy, const dataset::RlPrompt& prompt, const GrpoConfig& cfg,
                       const reward::RewardConfig& reward_cfg, std::uint64_t seed, RewardCache* cache = nullptr);

struct StepStats {
  double mean_reward = 0;
  double mean_abs_advantage = 0;
  double kl = 0;
  std::size_t filtered = 0;
  std::size_t flagged_batches = 0;
};

// One ascent step on mean(A_i * log pi(c_i)) - kl_coefficient * KL over the
// toy policy logits, averaged over batches. Log-probabilities are taken at
// cfg.temperature from the policy's current parameters. The KL gradient of
// completion i is kl_coefficient * (min(r_i, kl_ratio_clip) - 1) * grad log pi
// with r_i = pi_ref / pi.
StepStats grpo_step(policy::ToyPolicy& policy, const std::vector<GroupBatch>& batches, const GrpoConfig& cfg);

struct IterationRecord {
  std::size_t iteration = 0;
  double mean_reward = 0;
  double validity = 0;        // fraction of sampled completions with a molecule
  double exact_probability = 0;  // mean over prompts, temperature 1
  double kl = 0;
  double mean_abs_advantage = 0;
  std::size_t filtered = 0;
};

struct TrainingReport {
  std::vector<IterationRecord> iterations;
  // Per prompt, at temperature 1 after training.
  std::vector<double> final_exact_probability;
  std::vector<std::vector<double>> final_probabilities;
  std::vector<std::string> prompt_ids;
};

/// Sample, filter, reward, advantage and update for cfg.iterations rounds.
/// Each prompt must already be registered in `policy` under
/// ToyPolicy::prompt_key(system, user). Freezes the reference first if it is
/// not frozen yet.
TrainingReport train_toy(policy::ToyPolicy& policy, const std::vector<dataset::RlPrompt>& prompts,
                         const GrpoConfig& cfg, const reward::RewardConfig& reward_cfg);

std::string report_to_json(const TrainingReport& report, int indent = 2);

}  // namespace molrl::grpo
