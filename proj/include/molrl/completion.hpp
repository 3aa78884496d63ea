#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

#include "molrl/chem/molgraph.hpp"

namespace molrl::completion {

inline constexpr std::string_view kDefaultDelimiter = "</think>";
inline constexpr std::string_view kOpenMarker = "<think>";

enum class ExtractionPath { PrimaryJson, FallbackKey, HeuristicRepair, Failed };

std::string_view to_string(ExtractionPath path);

class NoPayload : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NoMoleculeField : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Model output decomposed into reasoning, answer and recovered molecule.
struct ParsedCompletion {
  std::string reasoning;
  std::string answer_segment;
  std::optional<std::string> extracted_smiles;
  // Present only when extracted_smiles parsed and passed valence validation.
  std::optional<chem::MolGraph> molecule;
  ExtractionPath extraction_path = ExtractionPath::Failed;
  std::size_t raw_length = 0;  // code points of the whole completion
  // Why extraction or validation stopped, empty on success.
  std::string failure;
};

struct Split {
  std::string reasoning;
  std::string answer;
};

// Splits at the first delimiter. Reasoning is trimmed and loses a leading
// "<think>"; the answer is kept verbatim. Without a delimiter everything is
// answer. Throws std::invalid_argument for an empty delimiter.
Split split_completion(std::string_view y, std::string_view delimiter = kDefaultDelimiter);

// First balanced {...} object (quote-aware, falling back to plain brace
// counting), else the first ``` fenced block. Throws NoPayload.
std::string extract_json_payload(std::string_view answer);

struct MoleculeField {
  std::string smiles;
  ExtractionPath path = ExtractionPath::Failed;
};

/// Strict JSON with top-level "molecule"; then the fallback keys
/// molecule, smiles, SMILES, answer, output (top level first, then nested
/// objects breadth-first); then the same lookup after repairs (unify quote
/// characters, trim trailing commas, drop unbalanced braces) and finally a
/// "key": "value" scan over the repaired text. Throws NoMoleculeField.
MoleculeField parse_molecule_field(std::string_view payload);

// Never throws.
ParsedCompletion parse_completion(std::string_view y, std::string_view delimiter = kDefaultDelimiter);

}  // namespace molrl::completion
