#pragma once

#include <cstddef>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "molrl/chem/molgraph.hpp"
#include "molrl/chem/normalize.hpp"

namespace molrl::fp {

class WidthMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class BitVector {
 public:
  explicit BitVector(std::size_t width = 0) : width_(width), words_((width + 63) / 64, 0) {}

  std::size_t width() const { return width_; }
  // Throws std::out_of_range when pos >= width.
  void set(std::size_t pos);
  bool test(std::size_t pos) const;
  std::size_t count() const;
  std::vector<std::size_t> positions() const;
  const std::vector<std::uint64_t>& words() const { return words_; }

  friend bool operator==(const BitVector&, const BitVector&) = default;

 private:
  std::size_t width_;
  std::vector<std::uint64_t> words_;
};

inline constexpr std::size_t kKeysetWidth = 64;
inline constexpr std::size_t kHashedWidth = 2048;
inline constexpr std::size_t kMaxPathBonds = 7;
inline constexpr int kCircularRadius = 2;

/// One row of the shipped substructure key table.
struct KeysetPredicate {
  std::size_t bit = 0;
  std::string name;
  std::string expression;
};

const std::vector<KeysetPredicate>& keyset_predicates();
int keyset_table_version();

// Number of matches of a named group predicate (e.g. "carbonyl").
// Throws std::invalid_argument for unknown names.
std::size_t count_group(const chem::NormalizedGraph& g, std::string_view group);
// Simple cycles with exactly `size` atoms.
std::size_t count_rings_of_size(const chem::NormalizedGraph& g, std::size_t size);

BitVector keyset_fp(const chem::MolGraph& g);
BitVector keyset_fp(const chem::NormalizedGraph& g);

// Direction-canonical sequences such as "C-C=O" for every simple path of
// 1..kMaxPathBonds bonds. Bond symbols: '-', '=', '#', ':' (resonant).
std::set<std::string> path_sequences(const chem::NormalizedGraph& g);
BitVector path_fp(const chem::MolGraph& g);
BitVector path_fp(const chem::NormalizedGraph& g);

// Per-atom environment identifiers at the given radius (0..kCircularRadius).
std::vector<std::uint64_t> circular_identifiers(const chem::NormalizedGraph& g, int radius);
BitVector circular_fp(const chem::MolGraph& g);
BitVector circular_fp(const chem::NormalizedGraph& g);

// |A and B| / |A or B|; 1.0 when both are empty.
double tanimoto(const BitVector& a, const BitVector& b);

// Unit-cost edit distance over bytes.
std::size_t edit_distance(std::string_view a, std::string_view b);
// 1 - edit_distance / max(|a|, |b|); 1.0 when both are empty.
double levenshtein_ratio(std::string_view a, std::string_view b);

}  // namespace molrl::fp
