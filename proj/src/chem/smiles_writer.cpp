#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "molrl/chem/canonical.hpp"
#include "molrl/chem/smiles.hpp"
#include "molrl/chem/tables.hpp"
#include "molrl/chem/valence.hpp"
#include "writer_detail.hpp"

namespace molrl::chem {

namespace {

class RankedWriter {
 public:
  RankedWriter(const NormalizedGraph& g, const std::vector<std::size_t>& rank, SmilesStyle style)
      : g_(g), rank_(rank), style_(style) {
    const std::size_t n = g.atoms.size();
    sorted_neighbors_.resize(n);
    for (std::size_t v = 0; v < n; ++v) {
      sorted_neighbors_[v] = g.adjacency[v];
      std::sort(sorted_neighbors_[v].begin(), sorted_neighbors_[v].end(),
                [&](const auto& x, const auto& y) { return rank_[x.first] < rank_[y.first]; });
    }
  }

  std::string write(std::vector<std::size_t>* emission_order) {
    const std::size_t n = g_.atoms.size();
    visited_.assign(n, false);
    closure_seen_.assign(g_.bonds.size(), false);
    opening_.assign(n, {});
    closing_.assign(n, {});
    children_.assign(n, {});
    std::vector<std::size_t> by_rank(n);
    for (std::size_t v = 0; v < n; ++v) by_rank[rank_[v]] = v;

    std::vector<std::size_t> roots;
    for (const std::size_t v : by_rank) {
      if (visited_[v]) continue;
      roots.push_back(v);
      discover(v, kNoBond);
    }
    if (emission_order) emission_order->clear();
    order_ = emission_order;
    out_.clear();
    for (std::size_t i = 0; i < roots.size(); ++i) {
      if (i > 0) out_.push_back('.');
      emit(roots[i]);
    }
    return out_;
  }

 private:
  static constexpr auto kNoBond = static_cast<std::size_t>(-1);

  const NormalizedGraph& g_;
  const std::vector<std::size_t>& rank_;
  SmilesStyle style_;
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> sorted_neighbors_;
  std::vector<bool> visited_;
  std::vector<bool> closure_seen_;
  std::vector<std::vector<std::size_t>> opening_;
  std::vector<std::vector<std::size_t>> closing_;
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> children_;
  std::vector<int> digit_of_bond_;
  std::set<int> free_digits_;
  int next_digit_ = 1;
  std::vector<std::size_t>* order_ = nullptr;
  std::string out_;

  void discover(std::size_t v, std::size_t parent_bond) {
    visited_[v] = true;
    for (const auto& [nb, bond] : sorted_neighbors_[v]) {
      if (bond == parent_bond) continue;
      if (visited_[nb]) {
        if (!closure_seen_[bond]) {
          closure_seen_[bond] = true;
          opening_[nb].push_back(bond);
          closing_[v].push_back(bond);
        }
      } else {
        children_[v].emplace_back(nb, bond);
        discover(nb, bond);
      }
    }
  }

  bool lowercase(std::size_t v) const { return style_ == SmilesStyle::ResonantLowercase && g_.atoms[v].resonant; }

  std::string bond_symbol(std::size_t bond) const {
    const NormBond& b = g_.bonds[bond];
    if (style_ == SmilesStyle::Kekule) {
      return b.kekule_order == 2 ? "=" : b.kekule_order == 3 ? "#" : "";
    }
    switch (b.cls) {
      case BondClass::Resonant:
        return "";
      case BondClass::Single:
        return lowercase(b.a) && lowercase(b.b) ? "-" : "";
      case BondClass::Double:
        return "=";
      case BondClass::Triple:
        return "#";
    }
    return "";
  }

  std::string atom_token(std::size_t v) const {
    const NormAtom& atom = g_.atoms[v];
    const bool lower = lowercase(v);
    int sigma = 0;
    for (const auto& [nb, bond] : g_.adjacency[v]) {
      const NormBond& b = g_.bonds[bond];
      if (style_ == SmilesStyle::Kekule) {
        sigma += b.kekule_order;
      } else {
        sigma += b.cls == BondClass::Resonant ? 1 : static_cast<int>(b.cls);
      }
    }
    std::string sym(symbol(atom.element));
    bool organic = in_organic_subset(atom.element) && atom.charge == 0;
    if (organic) {
      if (lower) {
        const auto rule = aromatic_organic_hydrogens(atom.element, sigma);
        organic = has_aromatic_form(atom.element) && rule.needs_pi && rule.hydrogens == atom.hydrogens;
      } else {
        organic = default_implicit_hydrogens(atom.element, sigma) == atom.hydrogens;
      }
    }
    if (lower) sym[0] = static_cast<char>(sym[0] - 'A' + 'a');
    if (organic) return sym;
    std::string token = "[" + sym;
    if (atom.hydrogens > 0) {
      token += "H";
      if (atom.hydrogens > 1) token += std::to_string(atom.hydrogens);
    }
    if (atom.charge != 0) {
      token += atom.charge > 0 ? "+" : "-";
      const int magnitude = atom.charge > 0 ? atom.charge : -atom.charge;
      if (magnitude > 1) token += std::to_string(magnitude);
    }
    token += "]";
    return token;
  }

  static std::string digit_text(int d) {
    if (d < 10) return std::string(1, static_cast<char>('0' + d));
    return "%" + std::to_string(d);
  }

  int take_digit() {
    int d = 0;
    if (!free_digits_.empty()) {
      d = *free_digits_.begin();
      free_digits_.erase(free_digits_.begin());
    } else {
      d = next_digit_++;
    }
    if (d > 99) throw InvalidGraph("more than 99 simultaneously open rings");
    return d;
  }

  void emit(std::size_t v) {
    if (order_) order_->push_back(v);
    out_ += atom_token(v);
    if (digit_of_bond_.empty()) digit_of_bond_.assign(g_.bonds.size(), 0);
    std::vector<int> released;
    for (const std::size_t bond : closing_[v]) {
      out_ += digit_text(digit_of_bond_[bond]);
      released.push_back(digit_of_bond_[bond]);
    }
    for (const int d : released) free_digits_.insert(d);
    for (const std::size_t bond : opening_[v]) {
      const int d = take_digit();
      digit_of_bond_[bond] = d;
      out_ += bond_symbol(bond) + digit_text(d);
    }
    const auto& kids = children_[v];
    for (std::size_t i = 0; i < kids.size(); ++i) {
      const bool last = i + 1 == kids.size();
      if (!last) out_.push_back('(');
      out_ += bond_symbol(kids[i].second);
      emit(kids[i].first);
      if (!last) out_.push_back(')');
    }
  }
};

}  // namespace

namespace detail {

std::string write_ranked(const NormalizedGraph& g, const std::vector<std::size_t>& rank, SmilesStyle style,
                         std::vector<std::size_t>* emission_order) {
  return RankedWriter(g, rank, style).write(emission_order);
}

}  // namespace detail

std::string write_ranked_smiles(const NormalizedGraph& g, const std::vector<std::size_t>& rank,
                                SmilesStyle style) {
  return detail::write_ranked(g, rank, style, nullptr);
}

std::string write_smiles(const MolGraph& g) {
  const NormalizedGraph ng = normalize(g);
  return write_ranked_smiles(ng, canonical_labeling(ng).rank, SmilesStyle::Kekule);
}

}  // namespace molrl::chem
