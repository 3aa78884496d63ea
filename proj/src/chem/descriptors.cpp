#include "molrl/chem/descriptors.hpp"

#include "molrl/chem/normalize.hpp"
#include "molrl/chem/tables.hpp"

namespace molrl::chem {

DescriptorVector descriptor_vector(const MolGraph& g) {
  const NormalizedGraph ng = normalize(g);
  const double hydrogen_mass = atomic_mass(Element::H);
  double heavy = 0, resonant = 0, nitrogen = 0, oxygen = 0, multiple = 0, mass = 0, charge = 0;
  for (const NormAtom& a : ng.atoms) {
    if (a.element != Element::H) heavy += 1;
    if (a.resonant) resonant += 1;
    if (a.element == Element::N) nitrogen += 1;
    if (a.element == Element::O) oxygen += 1;
    mass += atomic_mass(a.element) + a.hydrogens * hydrogen_mass;
    charge += a.charge;
  }
  for (const NormBond& b : ng.bonds) {
    if (b.cls == BondClass::Double || b.cls == BondClass::Triple) multiple += 1;
  }
  return {heavy, static_cast<double>(ng.ring_count()), resonant, nitrogen, oxygen, multiple, mass, charge};
}

}  // namespace molrl::chem
