#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "molrl/chem/molgraph.hpp"
#include "molrl/kv_config.hpp"

namespace molrl::policy {
class Policy;
}

namespace molrl::dataset {

class MalformedLine : public std::runtime_error {
 public:
  MalformedLine(std::size_t line, const std::string& detail);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class SchemaViolation : public std::runtime_error {
 public:
  SchemaViolation(std::size_t line, std::string field, const std::string& detail);
  std::size_t line() const { return line_; }
  const std::string& field() const { return field_; }

 private:
  std::size_t line_;
  std::string field_;
};

class EmptyStratum : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InsufficientStratum : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExamplePair {
  std::string caption;
  std::string smiles;

  friend bool operator==(const ExamplePair&, const ExamplePair&) = default;
};

struct DatasetRecord {
  std::string id;
  std::string caption;
  std::string ground_truth_smiles;
  std::vector<ExamplePair> examples;
  std::optional<std::string> cot;
  // JSON answer written back by bootstrapping.
  std::optional<std::string> answer;
  bool success = false;

  friend bool operator==(const DatasetRecord&, const DatasetRecord&) = default;
};

/// Stratum key: (number of in-context examples, success flag).
struct Stratum {
  std::size_t k = 0;
  bool success = false;

  friend auto operator<=>(const Stratum&, const Stratum&) = default;
};

Stratum stratum_of(const DatasetRecord& r);
std::string to_string(const Stratum& s);

struct Reject {
  std::string id;
  std::string reason;
};

struct LoadResult {
  std::vector<DatasetRecord> records;
  std::vector<Reject> rejects;
};

// One JSON object per line; blank lines are skipped. Syntax and schema errors
// throw; records whose ground truth or examples fail chemistry checks, or
// whose id repeats, go to `rejects`.
LoadResult parse_records(std::string_view jsonl);
LoadResult load_records(const std::filesystem::path& path);

std::string record_to_json(const DatasetRecord& r);
std::string records_to_jsonl(const std::vector<DatasetRecord>& records);

struct PromptTemplate {
  std::string task_description =
      "You are an expert chemist. Given a description of a molecule, reason step by step inside "
      "<think> </think> tags, then answer with a single JSON object of the form "
      "{\"molecule\": \"<SMILES>\"}.";
  std::string example_header = "Here are some example description/molecule pairs:";
  // Placeholders: {index} (1-based), {caption}, {smiles}.
  std::string example_format = "Example {index}:\nDescription: {caption}\nMolecule: {smiles}";
  std::string separator = "\n\n";

  // Keys: task_description, example_header, example_format, separator.
  static PromptTemplate from_file(const KeyValueFile& kv);
};

struct Prompt {
  std::string system;
  std::string user;
};

Prompt assemble_prompt(const DatasetRecord& r, const PromptTemplate& tmpl);

// True iff every code point is printable ASCII or tab/newline/CR, or one of:
// Greek letters, degree, plus-minus, middle dot, micro, multiplication sign,
// angstrom, primes, arrows (U+2190..U+2194, U+21CC), minus sign, sub- and
// superscript digits and signs, en/em dash, ellipsis, curly quotes.
// False on malformed UTF-8.
bool is_english(std::string_view text);

struct SftTriple {
  std::string system;
  std::string user;
  std::string assistant;
  double weight = 1.0;
  std::size_t max_len = 4096;
};

struct SftOptions {
  std::size_t gamma = 200;
  double w_short = 0.3;
  std::size_t max_len = 4096;
};

// "<think>\n{reasoning}\n</think>\n\n{\"molecule\": \"{smiles}\"}"
std::string format_assistant(std::string_view reasoning, std::string_view smiles);

// Throws std::invalid_argument when w_short is outside (0, 1].
std::vector<SftTriple> export_sft(const std::vector<DatasetRecord>& records, const PromptTemplate& tmpl,
                                  const SftOptions& opts = {});
std::string sft_to_json(const SftTriple& t);

using StratumTargets = std::map<Stratum, double>;

// Reads `stratum.<K>.<0|1> = fraction` lines.
StratumTargets load_strata(const KeyValueFile& kv);

// Per-stratum quotas: floor(n * fraction) plus one for the largest
// remainders until the total is n; equal remainders are ordered by the seed.
std::map<Stratum, std::size_t> stratum_quotas(const StratumTargets& targets, std::size_t n, std::uint64_t seed);

// Draws without replacement inside each stratum; output is grouped by
// stratum in key order. Throws EmptyStratum, InsufficientStratum, or
// std::invalid_argument when fractions do not sum to 1.
std::vector<DatasetRecord> stratified_sample(const std::vector<DatasetRecord>& records,
                                             const StratumTargets& targets, std::size_t n, std::uint64_t seed);

struct RlReference {
  std::string smiles;
  std::vector<std::string> example_smiles;
  chem::MolGraph molecule;
  std::vector<chem::MolGraph> example_molecules;
};

struct RlPrompt {
  std::string id;
  std::string system;
  std::string user;
  RlReference reference;
  Stratum stratum;
};

RlPrompt make_rl_prompt(const DatasetRecord& r, const PromptTemplate& tmpl);
std::vector<RlPrompt> export_rl(const std::vector<DatasetRecord>& records, const PromptTemplate& tmpl,
                                const StratumTargets& targets, std::size_t n, std::uint64_t seed);
std::string rl_to_json(const RlPrompt& p);
// Inverse of rl_to_json; reference molecules are re-parsed.
RlPrompt rl_from_json(std::string_view line);
std::vector<RlPrompt> load_rl_prompts(const std::filesystem::path& path);

struct BootstrapOptions {
  std::size_t attempts_per_record = 4;
  double temperature = 0.9;
  std::size_t max_new_chars = 8192;
  std::uint64_t seed = 0;
};

struct BootstrapReport {
  std::size_t considered = 0;  // records with success = false
  std::size_t attempts = 0;
  std::size_t flipped = 0;
  std::vector<std::string> flipped_ids;
  std::map<std::string, std::size_t> failure_reasons;
};

// Regenerates completions for failed records; the first completion whose
// molecule is identical to the ground truth and whose reasoning passes
// is_english is written back. Successful records are left untouched.
BootstrapReport bootstrap(std::vector<DatasetRecord>& records, policy::Policy& policy, const PromptTemplate& tmpl,
                          const BootstrapOptions& opts);

}  // namespace molrl::dataset
