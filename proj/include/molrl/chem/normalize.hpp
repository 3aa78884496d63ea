#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "molrl/chem/molgraph.hpp"

namespace molrl::chem {

// Bond classes after resonance normalization. A bond is Resonant when it is
// double in some Kekule structure of the molecule and single in another.
enum class BondClass : std::uint8_t { Single = 1, Double = 2, Triple = 3, Resonant = 4 };

struct NormAtom {
  Element element = Element::C;
  int charge = 0;
  int hydrogens = 0;
  bool in_ring = false;
  bool resonant = false;  // touches a resonant bond
};

struct NormBond {
  std::size_t a = 0;
  std::size_t b = 0;
  BondClass cls = BondClass::Single;
  int kekule_order = 1;  // one concrete Kekule assignment
};

/// Validated graph in the form compared by canonicalization, fingerprints and
/// descriptors: neutral single-neighbor [H] atoms folded into their heavy
/// neighbor, and every bond classified as single, double, triple or resonant.
/// The classification does not depend on how the input spelled its rings
/// (lowercase or either Kekule form) nor on atom order.
struct NormalizedGraph {
  std::vector<NormAtom> atoms;
  std::vector<NormBond> bonds;
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adjacency;  // (neighbor, bond)
  std::size_t components = 0;

  std::size_t degree(std::size_t i) const { return adjacency[i].size(); }
  std::size_t ring_count() const { return bonds.size() + components - atoms.size(); }
};

// Throws InvalidGraph if the graph fails valence validation.
NormalizedGraph normalize(const MolGraph& g);

}  // namespace molrl::chem
