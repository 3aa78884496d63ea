#pragma once

#include "molrl/chem/canonical.hpp"
#include "molrl/chem/descriptors.hpp"
#include "molrl/chem/element.hpp"
#include "molrl/chem/molgraph.hpp"
#include "molrl/chem/normalize.hpp"
#include "molrl/chem/smiles.hpp"
#include "molrl/chem/tables.hpp"
#include "molrl/chem/valence.hpp"
