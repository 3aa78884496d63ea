#include "molrl/chem/valence.hpp"

#include <vector>

#include "matching.hpp"
#include "molrl/chem/tables.hpp"

namespace molrl::chem {

int default_implicit_hydrogens(Element e, int bond_order_sum) {
  const int v = smallest_allowed_valence(e, 0, bond_order_sum);
  return v < 0 ? 0 : v - bond_order_sum;
}

AromaticHydrogenRule aromatic_organic_hydrogens(Element e, int sigma) {
  const int v = smallest_allowed_valence(e, 0, sigma);
  if (v < 0 || v == sigma) return {0, false};
  return {v - sigma - 1, true};
}

KekuleForm kekulize(const MolGraph& g) {
  const std::size_t n = g.atom_count();
  KekuleForm k;
  k.bond_orders.assign(g.bond_count(), 1);
  k.hydrogens.assign(n, 0);
  k.needs_pi.assign(n, false);

  for (std::size_t i = 0; i < n; ++i) {
    const Atom& atom = g.atom(i);
    int sigma = 0;  // aromatic bonds count 1
    for (const auto& nb : g.neighbors(i)) {
      const BondOrder order = g.bond(nb.bond).order;
      sigma += order == BondOrder::Aromatic ? 1 : static_cast<int>(order);
    }
    if (atom.bracket) {
      k.hydrogens[i] = atom.explicit_h.value_or(0);
      if (atom.aromatic) {
        k.needs_pi[i] = !valence_allowed(atom.element, atom.formal_charge, sigma + k.hydrogens[i]);
      }
    } else if (atom.aromatic) {
      const auto rule = aromatic_organic_hydrogens(atom.element, sigma);
      k.hydrogens[i] = rule.hydrogens;
      k.needs_pi[i] = rule.needs_pi;
    } else {
      k.hydrogens[i] = default_implicit_hydrogens(atom.element, sigma);
    }
  }

  detail::BlossomMatcher matcher(n);
  std::vector<std::size_t> aromatic_bonds;
  for (std::size_t b = 0; b < g.bond_count(); ++b) {
    const Bond& bond = g.bond(b);
    if (bond.order == BondOrder::Aromatic) {
      aromatic_bonds.push_back(b);
      if (k.needs_pi[bond.begin] && k.needs_pi[bond.end]) matcher.add_edge(bond.begin, bond.end);
    } else {
      k.bond_orders[b] = static_cast<int>(bond.order);
    }
  }
  for (std::size_t i = 0; i < n; ++i) matcher.set_excluded(i, !k.needs_pi[i]);
  matcher.solve();
  for (const std::size_t b : aromatic_bonds) {
    const Bond& bond = g.bond(b);
    if (matcher.mate(bond.begin) == static_cast<int>(bond.end)) k.bond_orders[b] = 2;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (k.needs_pi[i] && matcher.mate(i) == detail::BlossomMatcher::kUnmatched) k.unmatched.push_back(i);
  }
  return k;
}

ValidationReport validate_valence(const MolGraph& g) {
  const KekuleForm k = kekulize(g);
  ValidationReport report;
  for (std::size_t i = 0; i < g.atom_count(); ++i) {
    const Atom& atom = g.atom(i);
    int valence = k.hydrogens[i];
    for (const auto& nb : g.neighbors(i)) valence += k.bond_orders[nb.bond];
    if (!valence_allowed(atom.element, atom.formal_charge, valence)) {
      const auto allowed = allowed_valences(atom.element, atom.formal_charge);
      report.violations.push_back({i, valence, std::vector<int>(allowed.begin(), allowed.end())});
    }
  }
  report.valid = report.violations.empty();
  return report;
}

}  // namespace molrl::chem
