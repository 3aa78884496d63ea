#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

namespace molrl::chem {

enum class Element : std::uint8_t { H, B, C, N, O, F, P, S, Cl, Br, I };

inline constexpr std::array<Element, 11> kAllElements = {
    Element::H, Element::B, Element::C,  Element::N,  Element::O, Element::F,
    Element::P, Element::S, Element::Cl, Element::Br, Element::I};

constexpr std::string_view symbol(Element e) {
  constexpr std::array<std::string_view, 11> kSymbols = {"H", "B", "C",  "N",  "O", "F",
                                                         "P", "S", "Cl", "Br", "I"};
  return kSymbols[static_cast<std::size_t>(e)];
}

constexpr std::optional<Element> element_from_symbol(std::string_view s) {
  for (const Element e : kAllElements) {
    if (symbol(e) == s) return e;
  }
  return std::nullopt;
}

// Elements that may appear outside brackets.
constexpr bool in_organic_subset(Element e) { return e != Element::H; }

// Elements with a lowercase aromatic spelling.
constexpr bool has_aromatic_form(Element e) {
  return e == Element::B || e == Element::C || e == Element::N || e == Element::O ||
         e == Element::P || e == Element::S;
}

constexpr bool is_halogen(Element e) {
  return e == Element::F || e == Element::Cl || e == Element::Br || e == Element::I;
}

}  // namespace molrl::chem
