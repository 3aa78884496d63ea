#pragma once

#include <string_view>

// Contents of the versioned tables in data/, compiled in at build time.
namespace molrl::data {
extern const std::string_view kValenceTable;
extern const std::string_view kAtomicMasses;
extern const std::string_view kKeysetPredicates;
}  // namespace molrl::data
