#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "molrl/chem/element.hpp"

namespace molrl::chem {

struct Atom {
  Element element = Element::C;
  int formal_charge = 0;
  // Present iff the atom was written in brackets with an H specifier.
  std::optional<int> explicit_h;
  bool aromatic = false;
  // Written in brackets: hydrogen count is exactly explicit_h.value_or(0).
  bool bracket = false;
  std::size_t index = 0;

  friend bool operator==(const Atom&, const Atom&) = default;
};

enum class BondOrder : std::uint8_t { Single = 1, Double = 2, Triple = 3, Aromatic = 4 };

struct Bond {
  std::size_t begin = 0;
  std::size_t end = 0;
  BondOrder order = BondOrder::Single;

  std::size_t other(std::size_t atom) const { return atom == begin ? end : begin; }
  friend bool operator==(const Bond&, const Bond&) = default;
};

class InvalidGraph : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Attributed molecular graph. Immutable once built.
///
/// Construction checks the structural invariants (endpoints distinct and in
/// range, at most one bond per atom pair) and derives ring membership: an
/// atom is in a ring iff it touches a bond that is not a bridge.
class MolGraph {
 public:
  struct Neighbor {
    std::size_t atom;
    std::size_t bond;
  };

  MolGraph() = default;

  // Throws InvalidGraph when a structural invariant is violated. Atom
  // indices are reassigned to their positions.
  static MolGraph from_parts(std::vector<Atom> atoms, std::vector<Bond> bonds,
                             bool discarded_annotations = false);

  std::span<const Atom> atoms() const { return atoms_; }
  std::span<const Bond> bonds() const { return bonds_; }
  const Atom& atom(std::size_t i) const { return atoms_[i]; }
  const Bond& bond(std::size_t i) const { return bonds_[i]; }
  std::size_t atom_count() const { return atoms_.size(); }
  std::size_t bond_count() const { return bonds_.size(); }

  std::span<const Neighbor> neighbors(std::size_t atom) const { return adjacency_[atom]; }
  std::size_t degree(std::size_t atom) const { return adjacency_[atom].size(); }
  std::optional<std::size_t> bond_between(std::size_t a, std::size_t b) const;

  const std::vector<bool>& ring_membership() const { return in_ring_; }
  bool in_ring(std::size_t atom) const { return in_ring_[atom]; }
  bool bond_in_ring(std::size_t bond) const { return !bridge_[bond]; }

  std::size_t component_count() const { return components_; }

  // Isotope, chirality or directional-bond markers were present in the input
  // and dropped.
  bool discarded_annotations() const { return discarded_annotations_; }

 private:
  std::vector<Atom> atoms_;
  std::vector<Bond> bonds_;
  std::vector<std::vector<Neighbor>> adjacency_;
  std::vector<bool> in_ring_;
  std::vector<bool> bridge_;
  std::size_t components_ = 0;
  bool discarded_annotations_ = false;
};

// Bridges of an undirected graph given as an edge list (iterative Tarjan).
std::vector<bool> find_bridges(std::size_t vertex_count,
                               std::span<const std::pair<std::size_t, std::size_t>> edges);

// Returns a copy where atom i becomes atom new_index[i]; bonds are listed in
// the order given by `bond_order` (a permutation of bond indices) when
// provided.
MolGraph relabel(const MolGraph& g, std::span<const std::size_t> new_index,
                 std::span<const std::size_t> bond_order = {});

}  // namespace molrl::chem
