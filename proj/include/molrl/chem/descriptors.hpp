#pragma once

#include <array>

#include "molrl/chem/molgraph.hpp"

namespace molrl::chem {

inline constexpr std::size_t kDescriptorCount = 8;
using DescriptorVector = std::array<double, kDescriptorCount>;

/// [heavy atoms, rings, aromatic atoms, N count, O count, double + triple
///  bonds, mass including hydrogens, net formal charge]
///
/// Computed on the normalized graph: aromatic atoms are atoms on resonant
/// bonds and resonant bonds are not counted as double.
DescriptorVector descriptor_vector(const MolGraph& g);

}  // namespace molrl::chem
