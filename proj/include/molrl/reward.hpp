#pragma once

#include <array>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "molrl/chem/molgraph.hpp"
#include "molrl/completion.hpp"
#include "molrl/kv_config.hpp"

namespace molrl::reward {

enum class Term : std::size_t { Em, Sem, Format, Cot, Len, Forbid, SimKeyset, SimPath, SimCircular };

inline constexpr std::size_t kTermCount = 9;
inline constexpr std::array<std::string_view, kTermCount> kTermNames = {
    "em", "sem", "format", "cot", "len", "forbid", "sim_keyset", "sim_path", "sim_circular"};

// Terms that compare the emitted molecule with the target.
bool is_molecular(Term t);

/// Reward weights and thresholds.
///
/// File format (key = value, '#' comments, unknown keys rejected):
///   format = reward-config
///   version = 1
///   weight.<term> = <real>           one per term name above
///   cot_min_chars = 100
///   len_soft = 3000
///   len_hard = 8000
///   forbid_keywords = example, examples, Example
///   forbid_slope = 0.25
struct RewardConfig {
  std::array<double, kTermCount> weights = {0.2, 0.2, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1};
  std::size_t cot_min_chars = 100;
  double len_soft = 3000;
  double len_hard = 8000;
  std::vector<std::string> forbid_keywords = {"example", "examples", "Example"};
  double forbid_slope = 0.25;

  double weight(Term t) const { return weights[static_cast<std::size_t>(t)]; }
  double max_total() const;

  // Throws ConfigError when an invariant does not hold.
  void validate() const;
  static RewardConfig from_file(const KeyValueFile& kv);
  static RewardConfig load(const std::filesystem::path& path);
  std::string to_text() const;
};

struct RewardBreakdown {
  std::array<double, kTermCount> raw{};
  std::array<double, kTermCount> weighted{};
  double total = 0;
  bool gated_copy = false;
  bool gated_invalid = false;

  double raw_of(Term t) const { return raw[static_cast<std::size_t>(t)]; }
  double weighted_of(Term t) const { return weighted[static_cast<std::size_t>(t)]; }
};

struct ForbidScore {
  double score = 1.0;
  bool copy_detected = false;
};

double score_format(const completion::ParsedCompletion& p);
double score_cot(const completion::ParsedCompletion& p, const RewardConfig& cfg);
double score_len(const completion::ParsedCompletion& p, const RewardConfig& cfg);
ForbidScore score_forbid(const completion::ParsedCompletion& p, std::span<const chem::MolGraph> examples,
                         const RewardConfig& cfg);
double score_em(const completion::ParsedCompletion& p, const chem::MolGraph& target);
double score_sem(const completion::ParsedCompletion& p, const chem::MolGraph& target);
std::array<double, 3> score_sim(const completion::ParsedCompletion& p, const chem::MolGraph& target);

RewardBreakdown total_reward(const completion::ParsedCompletion& p, const chem::MolGraph& target,
                             std::span<const chem::MolGraph> examples, const RewardConfig& cfg);

}  // namespace molrl::reward
