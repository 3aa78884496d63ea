#include "molrl/reward.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "molrl/chem/canonical.hpp"
#include "molrl/fingerprints.hpp"
#include "molrl/text.hpp"

namespace molrl::reward {

using completion::ExtractionPath;
using completion::ParsedCompletion;

namespace {

std::size_t index(Term t) { return static_cast<std::size_t>(t); }

std::string weight_key(std::size_t i) { return "weight." + std::string(kTermNames[i]); }

struct MoleculeView {
  chem::CanonicalId id;
  fp::BitVector keyset;
  fp::BitVector path;
  fp::BitVector circular;
};

MoleculeView view(const chem::MolGraph& g) {
  const chem::NormalizedGraph ng = chem::normalize(g);
  return {chem::CanonicalId{chem::canonical_labeling(ng).text}, fp::keyset_fp(ng), fp::path_fp(ng),
          fp::circular_fp(ng)};
}

}  // namespace

bool is_molecular(Term t) {
  return t == Term::Em || t == Term::Sem || t == Term::SimKeyset || t == Term::SimPath || t == Term::SimCircular;
}

double RewardConfig::max_total() const {
  double sum = 0;
  for (const double w : weights) sum += w;
  return sum;
}

void RewardConfig::validate() const {
  for (std::size_t i = 0; i < kTermCount; ++i) {
    if (!(weights[i] >= 0) || !std::isfinite(weights[i])) {
      throw ConfigError(weight_key(i) + " must be a finite value >= 0");
    }
  }
  if (!(len_soft < len_hard)) throw ConfigError("len_soft must be below len_hard");
  if (!(forbid_slope > 0)) throw ConfigError("forbid_slope must be > 0");
}

RewardConfig RewardConfig::from_file(const KeyValueFile& kv) {
  std::vector<std::string> keys = {"format", "version", "cot_min_chars", "len_soft", "len_hard", "forbid_keywords",
                                   "forbid_slope"};
  for (std::size_t i = 0; i < kTermCount; ++i) keys.push_back(weight_key(i));
  kv.require_known_keys(std::vector<std::string_view>(keys.begin(), keys.end()));
  if (kv.get_or("format", "reward-config") != "reward-config") {
    throw ConfigError(kv.source() + ": format must be reward-config");
  }
  if (kv.get_int_or("version", 1) != 1) throw ConfigError(kv.source() + ": unsupported version");

  RewardConfig cfg;
  for (std::size_t i = 0; i < kTermCount; ++i) cfg.weights[i] = kv.get_double_or(weight_key(i), cfg.weights[i]);
  const long long cot = kv.get_int_or("cot_min_chars", static_cast<long long>(cfg.cot_min_chars));
  if (cot < 0) throw ConfigError("cot_min_chars must be >= 0");
  cfg.cot_min_chars = static_cast<std::size_t>(cot);
  cfg.len_soft = kv.get_double_or("len_soft", cfg.len_soft);
  cfg.len_hard = kv.get_double_or("len_hard", cfg.len_hard);
  if (kv.contains("forbid_keywords")) cfg.forbid_keywords = kv.get_list("forbid_keywords");
  cfg.forbid_slope = kv.get_double_or("forbid_slope", cfg.forbid_slope);
  cfg.validate();
  return cfg;
}

RewardConfig RewardConfig::load(const std::filesystem::path& path) { return from_file(KeyValueFile::load(path)); }

std::string RewardConfig::to_text() const {
  std::ostringstream out;
  out.precision(17);
  out << "format = reward-config\nversion = 1\n";
  for (std::size_t i = 0; i < kTermCount; ++i) out << weight_key(i) << " = " << weights[i] << "\n";
  out << "cot_min_chars = " << cot_min_chars << "\nlen_soft = " << len_soft << "\nlen_hard = " << len_hard
      << "\nforbid_keywords = ";
  for (std::size_t i = 0; i < forbid_keywords.size(); ++i) out << (i ? ", " : "") << forbid_keywords[i];
  out << "\nforbid_slope = " << forbid_slope << "\n";
  return out.str();
}

double score_format(const ParsedCompletion& p) {
  switch (p.extraction_path) {
    case ExtractionPath::PrimaryJson:
      return 1.0;
    case ExtractionPath::FallbackKey:
    case ExtractionPath::HeuristicRepair:
      return 0.5;
    case ExtractionPath::Failed:
      return 0.0;
  }
  return 0.0;
}

double score_cot(const ParsedCompletion& p, const RewardConfig& cfg) {
  return text::codepoint_count(p.reasoning) > cfg.cot_min_chars ? 1.0 : 0.0;
}

double score_len(const ParsedCompletion& p, const RewardConfig& cfg) {
  const double frac = (static_cast<double>(p.raw_length) - cfg.len_soft) / (cfg.len_hard - cfg.len_soft);
  return 1.0 - std::clamp(frac, 0.0, 1.0);
}

ForbidScore score_forbid(const ParsedCompletion& p, std::span<const chem::MolGraph> examples,
                         const RewardConfig& cfg) {
  ForbidScore out;
  if (p.molecule) {
    const chem::CanonicalId id = chem::canonical_form(*p.molecule);
    out.copy_detected = std::any_of(examples.begin(), examples.end(),
                                    [&](const chem::MolGraph& e) { return chem::canonical_form(e) == id; });
  }
  if (out.copy_detected) {
    out.score = 0.0;
    return out;
  }
  std::size_t hits = 0;
  for (const std::string& kw : cfg.forbid_keywords) hits += text::count_occurrences(p.reasoning, kw);
  out.score = std::max(0.0, 1.0 - cfg.forbid_slope * static_cast<double>(hits));
  return out;
}

double score_em(const ParsedCompletion& p, const chem::MolGraph& target) {
  return p.molecule && chem::graphs_identical(*p.molecule, target) ? 1.0 : 0.0;
}

double score_sem(const ParsedCompletion& p, const chem::MolGraph& target) {
  if (!p.molecule) return 0.0;
  return fp::levenshtein_ratio(chem::canonical_form(*p.molecule).text, chem::canonical_form(target).text);
}

std::array<double, 3> score_sim(const ParsedCompletion& p, const chem::MolGraph& target) {
  if (!p.molecule) return {0.0, 0.0, 0.0};
  const MoleculeView a = view(*p.molecule);
  const MoleculeView b = view(target);
  return {fp::tanimoto(a.keyset, b.keyset), fp::tanimoto(a.path, b.path), fp::tanimoto(a.circular, b.circular)};
}

RewardBreakdown total_reward(const ParsedCompletion& p, const chem::MolGraph& target,
                             std::span<const chem::MolGraph> examples, const RewardConfig& cfg) {
  RewardBreakdown out;
  out.raw[index(Term::Format)] = score_format(p);
  out.raw[index(Term::Cot)] = score_cot(p, cfg);
  out.raw[index(Term::Len)] = score_len(p, cfg);
  const ForbidScore forbid = score_forbid(p, examples, cfg);
  // Without an extracted answer there is nothing to credit for not copying.
  out.raw[index(Term::Forbid)] = p.extraction_path == ExtractionPath::Failed ? 0.0 : forbid.score;
  out.gated_copy = forbid.copy_detected;
  out.gated_invalid = !p.molecule.has_value();

  if (!out.gated_copy && !out.gated_invalid) {
    const MoleculeView mine = view(*p.molecule);
    const MoleculeView ref = view(target);
    out.raw[index(Term::Em)] = mine.id == ref.id ? 1.0 : 0.0;
    out.raw[index(Term::Sem)] = fp::levenshtein_ratio(mine.id.text, ref.id.text);
    out.raw[index(Term::SimKeyset)] = fp::tanimoto(mine.keyset, ref.keyset);
    out.raw[index(Term::SimPath)] = fp::tanimoto(mine.path, ref.path);
    out.raw[index(Term::SimCircular)] = fp::tanimoto(mine.circular, ref.circular);
  }
  for (std::size_t i = 0; i < kTermCount; ++i) {
    out.weighted[i] = cfg.weights[i] * out.raw[i];
    out.total += out.weighted[i];
  }
  return out;
}

}  // namespace molrl::reward
