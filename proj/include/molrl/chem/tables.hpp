#pragma once

#include <span>
#include <string_view>

#include "molrl/chem/element.hpp"

namespace molrl::chem {

// Allowed total valences for an element at a formal charge. Charges without
// their own row in data/valence_table.txt use the neutral row.
std::span<const int> allowed_valences(Element e, int formal_charge);

// Smallest allowed valence >= `at_least`, or -1 if none.
int smallest_allowed_valence(Element e, int formal_charge, int at_least);

bool valence_allowed(Element e, int formal_charge, int valence);

double atomic_mass(Element e);

int valence_table_version();
int atomic_mass_table_version();

}  // namespace molrl::chem
