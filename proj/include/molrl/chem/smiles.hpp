#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

#include "molrl/chem/molgraph.hpp"

namespace molrl::chem {

enum class ParseErrorKind {
  EmptyInput,
  UnbalancedBranch,
  UnclosedRing,
  UnknownElement,
  MalformedBracket,
  // Any other grammar violation: dangling or doubled bond symbols, ring
  // digits without an atom, duplicate bonds, conflicting ring-bond symbols.
  UnexpectedToken,
  // Lowercase atom that is not on a ring of aromatic bonds.
  AromaticOutsideRing,
};

std::string_view to_string(ParseErrorKind kind);

class ParseError : public std::runtime_error {
 public:
  ParseError(ParseErrorKind kind, std::size_t position, const std::string& detail);

  ParseErrorKind kind() const { return kind_; }
  // Byte offset into the trimmed input.
  std::size_t position() const { return position_; }

 private:
  ParseErrorKind kind_;
  std::size_t position_;
};

/// Parses the SMILES subset: organic-subset and bracket atoms (isotope,
/// chirality and atom class are accepted and discarded), bonds `- = # :`,
/// directional bonds `/ \` (read as single, discarded), branches, ring
/// closures `0-9` and `%nn`, and dot-separated components.
///
/// Surrounding whitespace is ignored. Throws ParseError.
MolGraph parse_smiles(std::string_view text);

}  // namespace molrl::chem
