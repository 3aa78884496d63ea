#include "molrl/chem/tables.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "molrl/embedded_data.hpp"
#include "molrl/kv_config.hpp"
#include "molrl/text.hpp"

namespace molrl::chem {

namespace {

constexpr std::size_t kElementCount = kAllElements.size();

int parse_int(std::string_view s, const std::string& context) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw std::logic_error("bad integer '" + std::string(s) + "' in " + context);
  }
  return v;
}

struct ValenceTable {
  int version = 0;
  std::array<std::vector<int>, kElementCount> neutral;
  std::map<std::pair<Element, int>, std::vector<int>> charged;

  ValenceTable() {
    const auto kv = KeyValueFile::parse(data::kValenceTable, "valence_table.txt");
    if (kv.get("format") != "valence-table") throw std::logic_error("valence table: bad format tag");
    version = static_cast<int>(kv.get_int("version"));
    for (const auto& e : kv.entries()) {
      if (e.key == "format" || e.key == "version") continue;
      const auto split = e.key.find_first_of("+-");
      const auto sym = std::string_view(e.key).substr(0, split);
      const auto element = element_from_symbol(sym);
      if (!element) throw std::logic_error("valence table: unknown element " + e.key);
      std::vector<int> values;
      for (const auto& part : kv.get_list(e.key)) values.push_back(parse_int(part, e.key));
      std::sort(values.begin(), values.end());
      if (split == std::string::npos) {
        neutral[static_cast<std::size_t>(*element)] = std::move(values);
      } else {
        std::string_view charge_text = std::string_view(e.key).substr(split);
        if (charge_text.front() == '+') charge_text.remove_prefix(1);
        charged[{*element, parse_int(charge_text, e.key)}] = std::move(values);
      }
    }
    for (const Element el : kAllElements) {
      if (neutral[static_cast<std::size_t>(el)].empty()) {
        throw std::logic_error("valence table: no neutral row for " + std::string(symbol(el)));
      }
    }
  }
};

struct MassTable {
  int version = 0;
  std::array<double, kElementCount> mass{};

  MassTable() {
    const auto kv = KeyValueFile::parse(data::kAtomicMasses, "atomic_masses.txt");
    if (kv.get("format") != "atomic-masses") throw std::logic_error("mass table: bad format tag");
    version = static_cast<int>(kv.get_int("version"));
    for (const Element el : kAllElements) mass[static_cast<std::size_t>(el)] = kv.get_double(symbol(el));
  }
};

const ValenceTable& valences() {
  static const ValenceTable table;
  return table;
}

const MassTable& masses() {
  static const MassTable table;
  return table;
}

}  // namespace

std::span<const int> allowed_valences(Element e, int formal_charge) {
  const auto& t = valences();
  if (formal_charge != 0) {
    const auto it = t.charged.find({e, formal_charge});
    if (it != t.charged.end()) return it->second;
  }
  return t.neutral[static_cast<std::size_t>(e)];
}

int smallest_allowed_valence(Element e, int formal_charge, int at_least) {
  for (const int v : allowed_valences(e, formal_charge)) {
    if (v >= at_least) return v;
  }
  return -1;
}

bool valence_allowed(Element e, int formal_charge, int valence) {
  const auto allowed = allowed_valences(e, formal_charge);
  return std::find(allowed.begin(), allowed.end(), valence) != allowed.end();
}

double atomic_mass(Element e) { return masses().mass[static_cast<std::size_t>(e)]; }

int valence_table_version() { return valences().version; }
int atomic_mass_table_version() { return masses().version; }

}  // namespace molrl::chem
