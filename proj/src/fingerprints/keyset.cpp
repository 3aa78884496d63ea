#include <algorithm>
#include <charconv>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "molrl/chem/element.hpp"
#include "molrl/embedded_data.hpp"
#include "molrl/fingerprints.hpp"
#include "molrl/text.hpp"

namespace molrl::fp {

using chem::BondClass;
using chem::Element;
using chem::NormalizedGraph;

namespace {

enum class Comparison { AtLeast, AtMost, Equal };

struct CompiledPredicate {
  std::function<std::size_t(const NormalizedGraph&)> counter;
  Comparison cmp = Comparison::AtLeast;
  std::size_t threshold = 1;
};

struct KeysetTable {
  int version = 0;
  std::vector<KeysetPredicate> rows;
  std::vector<CompiledPredicate> compiled;
};

bool bonded_by(const NormalizedGraph& g, std::size_t bond, BondClass cls) { return g.bonds[bond].cls == cls; }

bool is_terminal_oxygen(const NormalizedGraph& g, std::size_t v) {
  return g.atoms[v].element == Element::O && g.degree(v) == 1;
}

std::size_t double_bonded_terminal_oxygens(const NormalizedGraph& g, std::size_t v) {
  std::size_t n = 0;
  for (const auto& [nb, bond] : g.adjacency[v]) {
    if (bonded_by(g, bond, BondClass::Double) && is_terminal_oxygen(g, nb)) ++n;
  }
  return n;
}

bool is_carbonyl_carbon(const NormalizedGraph& g, std::size_t v) {
  return g.atoms[v].element == Element::C && double_bonded_terminal_oxygens(g, v) > 0;
}

bool is_hydroxyl(const NormalizedGraph& g, std::size_t v) {
  const auto& a = g.atoms[v];
  if (a.element != Element::O || a.charge != 0 || a.hydrogens < 1 || g.degree(v) != 1) return false;
  const auto& [nb, bond] = g.adjacency[v][0];
  return g.atoms[nb].element == Element::C && bonded_by(g, bond, BondClass::Single);
}

// Neutral, non-resonant N with exactly `carbons` single-bonded carbon
// neighbors and no other neighbors.
bool is_amine(const NormalizedGraph& g, std::size_t v, std::size_t carbons, int hydrogens) {
  const auto& a = g.atoms[v];
  if (a.element != Element::N || a.charge != 0 || a.resonant || a.hydrogens != hydrogens) return false;
  if (g.degree(v) != carbons) return false;
  return std::all_of(g.adjacency[v].begin(), g.adjacency[v].end(), [&](const auto& nb) {
    return g.atoms[nb.first].element == Element::C && bonded_by(g, nb.second, BondClass::Single);
  });
}

bool carbonyl_with_single_neighbor(const NormalizedGraph& g, std::size_t v,
                                   const std::function<bool(std::size_t)>& accept) {
  if (!is_carbonyl_carbon(g, v)) return false;
  return std::any_of(g.adjacency[v].begin(), g.adjacency[v].end(), [&](const auto& nb) {
    return bonded_by(g, nb.second, BondClass::Single) && accept(nb.first);
  });
}

using AtomTest = std::function<bool(const NormalizedGraph&, std::size_t)>;

const std::map<std::string, AtomTest, std::less<>>& group_tests() {
  static const std::map<std::string, AtomTest, std::less<>> tests = {
      {"ring_heteroatom",
       [](const NormalizedGraph& g, std::size_t v) {
         const Element e = g.atoms[v].element;
         return g.atoms[v].in_ring && e != Element::C && e != Element::H;
       }},
      {"ring_nitrogen",
       [](const NormalizedGraph& g, std::size_t v) { return g.atoms[v].in_ring && g.atoms[v].element == Element::N; }},
      {"ring_oxygen",
       [](const NormalizedGraph& g, std::size_t v) { return g.atoms[v].in_ring && g.atoms[v].element == Element::O; }},
      {"ring_sulfur",
       [](const NormalizedGraph& g, std::size_t v) { return g.atoms[v].in_ring && g.atoms[v].element == Element::S; }},
      {"carbonyl", [](const NormalizedGraph& g, std::size_t v) { return is_carbonyl_carbon(g, v); }},
      {"hydroxyl", [](const NormalizedGraph& g, std::size_t v) { return is_hydroxyl(g, v); }},
      {"primary_amine", [](const NormalizedGraph& g, std::size_t v) { return is_amine(g, v, 1, 2); }},
      {"secondary_amine", [](const NormalizedGraph& g, std::size_t v) { return is_amine(g, v, 2, 1); }},
      {"tertiary_amine", [](const NormalizedGraph& g, std::size_t v) { return is_amine(g, v, 3, 0); }},
      {"halogen", [](const NormalizedGraph& g, std::size_t v) { return chem::is_halogen(g.atoms[v].element); }},
      {"nitro",
       [](const NormalizedGraph& g, std::size_t v) {
         if (g.atoms[v].element != Element::N) return false;
         const auto n = std::count_if(g.adjacency[v].begin(), g.adjacency[v].end(),
                                      [&](const auto& nb) { return is_terminal_oxygen(g, nb.first); });
         return n == 2;
       }},
      {"sulfonyl",
       [](const NormalizedGraph& g, std::size_t v) {
         return g.atoms[v].element == Element::S && double_bonded_terminal_oxygens(g, v) >= 2;
       }},
      {"carboxylic_acid",
       [](const NormalizedGraph& g, std::size_t v) {
         return carbonyl_with_single_neighbor(g, v, [&](std::size_t o) { return is_hydroxyl(g, o); });
       }},
      {"ester",
       [](const NormalizedGraph& g, std::size_t v) {
         return carbonyl_with_single_neighbor(g, v, [&](std::size_t o) {
           if (g.atoms[o].element != Element::O || g.degree(o) != 2) return false;
           return std::all_of(g.adjacency[o].begin(), g.adjacency[o].end(),
                              [&](const auto& nb) { return g.atoms[nb.first].element == Element::C; });
         });
       }},
      {"amide",
       [](const NormalizedGraph& g, std::size_t v) {
         return carbonyl_with_single_neighbor(g, v, [&](std::size_t n) { return g.atoms[n].element == Element::N; });
       }},
      {"ether",
       [](const NormalizedGraph& g, std::size_t v) {
         const auto& a = g.atoms[v];
         if (a.element != Element::O || a.charge != 0 || a.resonant || g.degree(v) != 2) return false;
         return std::all_of(g.adjacency[v].begin(), g.adjacency[v].end(), [&](const auto& nb) {
           return g.atoms[nb.first].element == Element::C && bonded_by(g, nb.second, BondClass::Single);
         });
       }},
      {"nitrile",
       [](const NormalizedGraph& g, std::size_t v) {
         if (g.atoms[v].element != Element::C) return false;
         return std::any_of(g.adjacency[v].begin(), g.adjacency[v].end(), [&](const auto& nb) {
           return g.atoms[nb.first].element == Element::N && bonded_by(g, nb.second, BondClass::Triple);
         });
       }},
      {"thiol",
       [](const NormalizedGraph& g, std::size_t v) {
         const auto& a = g.atoms[v];
         return a.element == Element::S && a.charge == 0 && a.hydrogens >= 1 && g.degree(v) == 1;
       }},
      {"aldehyde",
       [](const NormalizedGraph& g, std::size_t v) { return is_carbonyl_carbon(g, v) && g.atoms[v].hydrogens >= 1; }},
      {"ketone",
       [](const NormalizedGraph& g, std::size_t v) {
         if (!is_carbonyl_carbon(g, v) || g.degree(v) != 3) return false;
         const auto carbons = std::count_if(g.adjacency[v].begin(), g.adjacency[v].end(), [&](const auto& nb) {
           return g.atoms[nb.first].element == Element::C && bonded_by(g, nb.second, BondClass::Single);
         });
         return carbons == 2;
       }},
      {"phosphate",
       [](const NormalizedGraph& g, std::size_t v) {
         if (g.atoms[v].element != Element::P) return false;
         const auto n = std::count_if(g.adjacency[v].begin(), g.adjacency[v].end(),
                                      [&](const auto& nb) { return g.atoms[nb.first].element == Element::O; });
         return n >= 4;
       }},
      {"methyl",
       [](const NormalizedGraph& g, std::size_t v) {
         return g.atoms[v].element == Element::C && g.degree(v) == 1 && g.atoms[v].hydrogens == 3;
       }},
      {"charged_atom", [](const NormalizedGraph& g, std::size_t v) { return g.atoms[v].charge != 0; }},
  };
  return tests;
}

// Simple cycles through atoms >= start, each counted once.
void count_cycles_from(const NormalizedGraph& g, std::size_t start, std::size_t v, std::size_t size,
                       std::vector<std::size_t>& path, std::vector<bool>& on_path, std::size_t& found) {
  for (const auto& [nb, bond] : g.adjacency[v]) {
    if (nb == start && path.size() == size && path[1] < path.back()) {
      ++found;
      continue;
    }
    if (nb <= start || on_path[nb] || path.size() == size) continue;
    on_path[nb] = true;
    path.push_back(nb);
    count_cycles_from(g, start, nb, size, path, on_path, found);
    path.pop_back();
    on_path[nb] = false;
  }
}

std::size_t parse_number(std::string_view s, std::string_view context) {
  std::size_t value = 0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, value);
  if (ec != std::errc{} || ptr != end) {
    throw std::runtime_error("keyset table: bad number '" + std::string(s) + "' in " + std::string(context));
  }
  return value;
}

// Argument of `name(arg)`, or nullopt when `text` is not of that shape.
std::optional<std::string_view> call_argument(std::string_view text, std::string_view name) {
  if (text.size() < name.size() + 2 || text.substr(0, name.size()) != name || text[name.size()] != '(' ||
      text.back() != ')') {
    return std::nullopt;
  }
  return text.substr(name.size() + 1, text.size() - name.size() - 2);
}

std::function<std::size_t(const NormalizedGraph&)> compile_counter(std::string_view text) {
  if (auto arg = call_argument(text, "count")) {
    const auto element = chem::element_from_symbol(*arg);
    if (!element) throw std::runtime_error("keyset table: unknown element in " + std::string(text));
    const Element e = *element;
    return [e](const NormalizedGraph& g) {
      return static_cast<std::size_t>(
          std::count_if(g.atoms.begin(), g.atoms.end(), [e](const auto& a) { return a.element == e; }));
    };
  }
  if (auto arg = call_argument(text, "ring")) {
    const std::size_t size = parse_number(*arg, text);
    if (size < 3) throw std::runtime_error("keyset table: ring size below 3 in " + std::string(text));
    return [size](const NormalizedGraph& g) { return count_rings_of_size(g, size); };
  }
  if (text == "rings") {
    return [](const NormalizedGraph& g) { return g.ring_count(); };
  }
  if (auto arg = call_argument(text, "bonds")) {
    static const std::map<std::string, BondClass, std::less<>> kinds = {{"single", BondClass::Single},
                                                                        {"double", BondClass::Double},
                                                                        {"triple", BondClass::Triple},
                                                                        {"aromatic", BondClass::Resonant}};
    const auto it = kinds.find(*arg);
    if (it == kinds.end()) throw std::runtime_error("keyset table: unknown bond kind in " + std::string(text));
    const BondClass cls = it->second;
    return [cls](const NormalizedGraph& g) {
      return static_cast<std::size_t>(
          std::count_if(g.bonds.begin(), g.bonds.end(), [cls](const auto& b) { return b.cls == cls; }));
    };
  }
  if (auto arg = call_argument(text, "group")) {
    const auto it = group_tests().find(*arg);
    if (it == group_tests().end()) throw std::runtime_error("keyset table: unknown group in " + std::string(text));
    const std::string name(*arg);
    return [name](const NormalizedGraph& g) { return count_group(g, name); };
  }
  if (text == "heavy_atoms") {
    return [](const NormalizedGraph& g) {
      return static_cast<std::size_t>(
          std::count_if(g.atoms.begin(), g.atoms.end(), [](const auto& a) { return a.element != Element::H; }));
    };
  }
  throw std::runtime_error("keyset table: unknown counter '" + std::string(text) + "'");
}

CompiledPredicate compile(std::string_view expression) {
  CompiledPredicate out;
  static const std::pair<std::string_view, Comparison> ops[] = {
      {">=", Comparison::AtLeast}, {"<=", Comparison::AtMost}, {"==", Comparison::Equal}};
  for (const auto& [token, cmp] : ops) {
    const auto pos = expression.find(token);
    if (pos == std::string_view::npos) continue;
    out.counter = compile_counter(text::trim(expression.substr(0, pos)));
    out.cmp = cmp;
    out.threshold = parse_number(text::trim(expression.substr(pos + token.size())), expression);
    return out;
  }
  out.counter = compile_counter(text::trim(expression));
  return out;
}

KeysetTable load_table() {
  KeysetTable table;
  bool have_format = false;
  for (const std::string& raw : text::split(data::kKeysetPredicates, '\n')) {
    const std::string_view line = text::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    if (line.find('|') == std::string_view::npos) {
      const auto eq = line.find('=');
      if (eq == std::string_view::npos) throw std::runtime_error("keyset table: unparseable line '" + raw + "'");
      const auto key = text::trim(line.substr(0, eq));
      const auto value = text::trim(line.substr(eq + 1));
      if (key == "format") {
        if (value != "keyset-predicates") throw std::runtime_error("keyset table: wrong format tag");
        have_format = true;
      } else if (key == "version") {
        table.version = static_cast<int>(parse_number(value, line));
      }
      continue;
    }
    const auto fields = text::split(line, '|');
    if (fields.size() != 3) throw std::runtime_error("keyset table: expected 3 fields in '" + raw + "'");
    KeysetPredicate row;
    row.bit = parse_number(text::trim(fields[0]), line);
    row.name = std::string(text::trim(fields[1]));
    row.expression = std::string(text::trim(fields[2]));
    if (row.bit != table.rows.size()) throw std::runtime_error("keyset table: bits must be listed 0,1,2,...");
    table.compiled.push_back(compile(row.expression));
    table.rows.push_back(std::move(row));
  }
  if (!have_format || table.version <= 0) throw std::runtime_error("keyset table: missing format/version header");
  if (table.rows.size() != kKeysetWidth) throw std::runtime_error("keyset table: expected 64 predicates");
  return table;
}

const KeysetTable& table() {
  static const KeysetTable t = load_table();
  return t;
}

}  // namespace

const std::vector<KeysetPredicate>& keyset_predicates() { return table().rows; }

int keyset_table_version() { return table().version; }

std::size_t count_group(const NormalizedGraph& g, std::string_view group) {
  const auto it = group_tests().find(group);
  if (it == group_tests().end()) throw std::invalid_argument("unknown group '" + std::string(group) + "'");
  std::size_t n = 0;
  for (std::size_t v = 0; v < g.atoms.size(); ++v) {
    if (it->second(g, v)) ++n;
  }
  return n;
}

std::size_t count_rings_of_size(const NormalizedGraph& g, std::size_t size) {
  if (size < 3) return 0;
  std::size_t found = 0;
  std::vector<bool> on_path(g.atoms.size(), false);
  std::vector<std::size_t> path;
  for (std::size_t start = 0; start < g.atoms.size(); ++start) {
    if (!g.atoms[start].in_ring) continue;
    path.assign(1, start);
    on_path[start] = true;
    count_cycles_from(g, start, start, size, path, on_path, found);
    on_path[start] = false;
  }
  return found;
}

BitVector keyset_fp(const NormalizedGraph& g) {
  BitVector bits(kKeysetWidth);
  const KeysetTable& t = table();
  for (std::size_t i = 0; i < t.compiled.size(); ++i) {
    const CompiledPredicate& p = t.compiled[i];
    const std::size_t value = p.counter(g);
    bool hit = false;
    switch (p.cmp) {
      case Comparison::AtLeast:
        hit = value >= p.threshold;
        break;
      case Comparison::AtMost:
        hit = value <= p.threshold;
        break;
      case Comparison::Equal:
        hit = value == p.threshold;
        break;
    }
    if (hit) bits.set(t.rows[i].bit);
  }
  return bits;
}

BitVector keyset_fp(const chem::MolGraph& g) { return keyset_fp(chem::normalize(g)); }

}  // namespace molrl::fp
