#pragma once

#include <cstddef>
#include <vector>

#include "molrl/chem/molgraph.hpp"

namespace molrl::chem {

struct ValenceViolation {
  std::size_t atom = 0;
  int observed = 0;
  std::vector<int> allowed;

  friend bool operator==(const ValenceViolation&, const ValenceViolation&) = default;
};

struct ValidationReport {
  bool valid = true;
  std::vector<ValenceViolation> violations;
};

/// Kekule assignment and hydrogen counts for every atom.
///
/// Aromatic atoms that need a pi bond are paired along aromatic bonds by a
/// maximum matching; paired bonds become double, the remaining aromatic
/// bonds single. `unmatched` lists atoms that needed a pi bond but found no
/// partner.
struct KekuleForm {
  std::vector<int> bond_orders;  // 1, 2 or 3 per bond
  std::vector<int> hydrogens;    // implicit or explicit H per atom
  std::vector<bool> needs_pi;
  std::vector<std::size_t> unmatched;
};

KekuleForm kekulize(const MolGraph& g);

// Hydrogens an atom written without brackets carries, given the sum of its
// bond orders. Returns 0 if no allowed valence fits.
int default_implicit_hydrogens(Element e, int bond_order_sum);

// Hydrogen count and pi requirement for a lowercase organic atom. `sigma`
// counts each aromatic bond as 1 plus the orders of its other bonds.
struct AromaticHydrogenRule {
  int hydrogens = 0;
  bool needs_pi = false;
};
AromaticHydrogenRule aromatic_organic_hydrogens(Element e, int sigma);

/// Total valence (Kekule bond orders plus hydrogens) must be an allowed
/// valence for the atom's element and charge. All violators are listed.
ValidationReport validate_valence(const MolGraph& g);

}  // namespace molrl::chem
