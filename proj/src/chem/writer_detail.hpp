#pragma once

#include <string>
#include <vector>

#include "molrl/chem/canonical.hpp"

namespace molrl::chem::detail {

// Also reports the atoms in the order they appear in the string.
std::string write_ranked(const NormalizedGraph& g, const std::vector<std::size_t>& rank, SmilesStyle style,
                         std::vector<std::size_t>* emission_order);

}  // namespace molrl::chem::detail
