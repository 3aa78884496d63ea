#include "molrl/chem/normalize.hpp"

#include <string>

#include "matching.hpp"
#include "molrl/chem/valence.hpp"

namespace molrl::chem {

namespace {

constexpr auto kRemoved = static_cast<std::size_t>(-1);

bool foldable_hydrogen(const MolGraph& g, const KekuleForm& k, std::size_t i) {
  const Atom& a = g.atom(i);
  if (a.element != Element::H || a.formal_charge != 0 || a.aromatic || k.hydrogens[i] != 0) return false;
  if (g.degree(i) != 1) return false;
  const auto nb = g.neighbors(i).front();
  return g.atom(nb.atom).element != Element::H && k.bond_orders[nb.bond] == 1;
}

// Marks bonds that are double in some but not all perfect matchings of the
// subgraph spanned by conjugated double bonds.
void classify_resonance(NormalizedGraph& ng) {
  const std::size_t n = ng.atoms.size();
  std::vector<int> doubles(n, 0);
  for (const auto& b : ng.bonds) {
    if (b.kekule_order == 2) {
      ++doubles[b.a];
      ++doubles[b.b];
    }
  }
  std::vector<bool> pi_atom(n, false);
  detail::BlossomMatcher base(n);
  for (const auto& b : ng.bonds) {
    if (b.kekule_order == 2 && doubles[b.a] == 1 && doubles[b.b] == 1) {
      pi_atom[b.a] = pi_atom[b.b] = true;
      base.set_mate(b.a, static_cast<int>(b.b));
      base.set_mate(b.b, static_cast<int>(b.a));
    }
  }

  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (const auto& b : ng.bonds) edges.emplace_back(b.a, b.b);
  const auto bridge = find_bridges(n, edges);

  std::vector<std::size_t> candidates;
  for (std::size_t e = 0; e < ng.bonds.size(); ++e) {
    const auto& b = ng.bonds[e];
    if (!pi_atom[b.a] || !pi_atom[b.b] || bridge[e]) continue;
    if (b.kekule_order != 1 && b.kekule_order != 2) continue;
    base.add_edge(b.a, b.b);
    if (b.kekule_order == 1) candidates.push_back(e);
  }

  std::vector<bool> resonant_atom(n, false);
  std::vector<bool> resonant_bond(ng.bonds.size(), false);
  for (const std::size_t e : candidates) {
    const auto& b = ng.bonds[e];
    detail::BlossomMatcher trial = base;
    const auto u_mate = static_cast<std::size_t>(trial.mate(b.a));
    const auto v_mate = static_cast<std::size_t>(trial.mate(b.b));
    for (const std::size_t v : {b.a, b.b, u_mate, v_mate}) trial.set_mate(v, detail::BlossomMatcher::kUnmatched);
    trial.set_excluded(b.a, true);
    trial.set_excluded(b.b, true);
    if (trial.augment_from(u_mate)) {
      resonant_bond[e] = true;
      resonant_atom[b.a] = resonant_atom[b.b] = true;
    }
  }
  for (std::size_t e = 0; e < ng.bonds.size(); ++e) {
    auto& b = ng.bonds[e];
    const bool matched_edge = b.kekule_order == 2 && pi_atom[b.a] && pi_atom[b.b];
    if (resonant_bond[e] || (matched_edge && (resonant_atom[b.a] || resonant_atom[b.b]))) {
      b.cls = BondClass::Resonant;
      ng.atoms[b.a].resonant = ng.atoms[b.b].resonant = true;
    }
  }
}

}  // namespace

NormalizedGraph normalize(const MolGraph& g) {
  const auto report = validate_valence(g);
  if (!report.valid) {
    const auto& v = report.violations.front();
    throw InvalidGraph("graph fails valence validation at atom " + std::to_string(v.atom) + " (valence " +
                       std::to_string(v.observed) + ")");
  }
  const KekuleForm k = kekulize(g);

  const std::size_t n = g.atom_count();
  std::vector<std::size_t> new_index(n, kRemoved);
  std::vector<int> folded(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (foldable_hydrogen(g, k, i)) ++folded[g.neighbors(i).front().atom];
  }

  NormalizedGraph ng;
  for (std::size_t i = 0; i < n; ++i) {
    if (foldable_hydrogen(g, k, i)) continue;
    new_index[i] = ng.atoms.size();
    const Atom& a = g.atom(i);
    ng.atoms.push_back({a.element, a.formal_charge, k.hydrogens[i] + folded[i], g.in_ring(i), false});
  }
  ng.adjacency.resize(ng.atoms.size());
  for (std::size_t b = 0; b < g.bond_count(); ++b) {
    const Bond& bond = g.bond(b);
    const std::size_t a = new_index[bond.begin];
    const std::size_t c = new_index[bond.end];
    if (a == kRemoved || c == kRemoved) continue;
    const int order = k.bond_orders[b];
    ng.adjacency[a].emplace_back(c, ng.bonds.size());
    ng.adjacency[c].emplace_back(a, ng.bonds.size());
    ng.bonds.push_back({a, c, static_cast<BondClass>(order), order});
  }
  ng.components = g.component_count();
  classify_resonance(ng);
  return ng;
}

}  // namespace molrl::chem
