#pragma once

#include <array>
#include <compare>
#include <string>
#include <vector>

#include "molrl/chem/molgraph.hpp"
#include "molrl/chem/normalize.hpp"

namespace molrl::chem {

struct CanonicalId {
  std::string text;

  friend auto operator<=>(const CanonicalId&, const CanonicalId&) = default;
};

/// Canonical ranking of a normalized graph.
///
/// Atom classes start from (element, degree, charge, ring flag, H count) and
/// are refined with the sorted (bond class, neighbor class) multiset until
/// the partition stops splitting. Remaining ties are broken by trying each
/// atom of the first non-singleton class and keeping the labeling whose
/// traversal string is lexicographically smallest; branches related by an
/// automorphism already found are skipped.
struct CanonicalLabeling {
  std::vector<std::size_t> rank;  // rank[atom], a permutation of 0..n-1
  std::string text;               // traversal string under that ranking
};

CanonicalLabeling canonical_labeling(const NormalizedGraph& g);

// Throws InvalidGraph if g fails valence validation.
CanonicalId canonical_form(const MolGraph& g);

bool graphs_identical(const MolGraph& a, const MolGraph& b);

// Kekule SMILES in canonical atom order; re-parses to the same CanonicalId.
std::string write_smiles(const MolGraph& g);

enum class SmilesStyle {
  Kekule,             // uppercase atoms, explicit '=' and '#'
  ResonantLowercase,  // atoms on resonant bonds lowercase, resonant bonds implicit
};

// Traversal string of `g` visiting atoms by ascending `rank`.
std::string write_ranked_smiles(const NormalizedGraph& g, const std::vector<std::size_t>& rank,
                                SmilesStyle style);

}  // namespace molrl::chem
