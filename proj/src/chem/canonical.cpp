#include "molrl/chem/canonical.hpp"

#include <algorithm>
#include <numeric>
#include <tuple>
#include <vector>

#include "writer_detail.hpp"

namespace molrl::chem {

namespace {

using Classes = std::vector<std::size_t>;

// Rank = number of atoms whose key is strictly smaller.
template <typename Key>
Classes rank_by_key(const std::vector<Key>& keys) {
  const std::size_t n = keys.size();
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return keys[a] < keys[b]; });
  Classes cls(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0 && keys[idx[i - 1]] == keys[idx[i]]) {
      cls[idx[i]] = cls[idx[i - 1]];
    } else {
      cls[idx[i]] = i;
    }
  }
  return cls;
}

std::size_t distinct_count(const Classes& cls) {
  std::vector<bool> seen(cls.size(), false);
  std::size_t count = 0;
  for (const std::size_t c : cls) {
    if (!seen[c]) {
      seen[c] = true;
      ++count;
    }
  }
  return count;
}

Classes refine(const NormalizedGraph& g, Classes cls) {
  const std::size_t n = g.atoms.size();
  std::size_t cells = distinct_count(cls);
  while (cells < n) {
    std::vector<std::pair<std::size_t, std::vector<std::size_t>>> keys(n);
    for (std::size_t v = 0; v < n; ++v) {
      keys[v].first = cls[v];
      auto& nbs = keys[v].second;
      for (const auto& [nb, bond] : g.adjacency[v]) {
        nbs.push_back(static_cast<std::size_t>(g.bonds[bond].cls) * n + cls[nb]);
      }
      std::sort(nbs.begin(), nbs.end());
    }
    Classes next = rank_by_key(keys);
    const std::size_t next_cells = distinct_count(next);
    cls = std::move(next);
    if (next_cells == cells) break;
    cells = next_cells;
  }
  return cls;
}

Classes initial_classes(const NormalizedGraph& g) {
  std::vector<std::tuple<int, std::size_t, int, bool, int>> keys;
  keys.reserve(g.atoms.size());
  for (std::size_t v = 0; v < g.atoms.size(); ++v) {
    const NormAtom& a = g.atoms[v];
    keys.emplace_back(static_cast<int>(a.element), g.degree(v), a.charge, a.in_ring, a.hydrogens);
  }
  return rank_by_key(keys);
}

class DisjointSet {
 public:
  explicit DisjointSet(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void unite(std::size_t a, std::size_t b) { parent_[find(a)] = find(b); }

 private:
  std::vector<std::size_t> parent_;
};

class LabelingSearch {
 public:
  explicit LabelingSearch(const NormalizedGraph& g) : g_(g) {}

  CanonicalLabeling run() {
    descend(refine(g_, initial_classes(g_)));
    return {best_rank_, best_text_};
  }

 private:
  const NormalizedGraph& g_;
  bool have_best_ = false;
  std::string best_text_;
  Classes best_rank_;
  std::vector<std::size_t> best_order_;
  std::vector<std::vector<std::size_t>> automorphisms_;
  std::vector<std::size_t> path_;

  void descend(const Classes& cls) {
    const std::size_t n = g_.atoms.size();
    std::vector<std::size_t> cell_size(n, 0);
    for (const std::size_t c : cls) ++cell_size[c];
    std::size_t target = n;
    for (std::size_t c = 0; c < n; ++c) {
      if (cell_size[c] > 1) {
        target = c;
        break;
      }
    }
    if (target == n) {
      leaf(cls);
      return;
    }
    std::vector<std::size_t> tried;
    for (std::size_t v = 0; v < n; ++v) {
      if (cls[v] != target) continue;
      if (!tried.empty() && equivalent_to_tried(v, tried)) continue;
      tried.push_back(v);
      Classes next = cls;
      for (std::size_t u = 0; u < n; ++u) {
        if (u != v && next[u] == target) next[u] = target + 1;
      }
      path_.push_back(v);
      descend(refine(g_, std::move(next)));
      path_.pop_back();
    }
  }

  // Orbits of the automorphisms found so far that fix the current path.
  bool equivalent_to_tried(std::size_t v, const std::vector<std::size_t>& tried) {
    DisjointSet orbits(g_.atoms.size());
    for (const auto& perm : automorphisms_) {
      const bool fixes_path =
          std::all_of(path_.begin(), path_.end(), [&](std::size_t p) { return perm[p] == p; });
      if (!fixes_path) continue;
      for (std::size_t x = 0; x < perm.size(); ++x) orbits.unite(x, perm[x]);
    }
    const std::size_t root = orbits.find(v);
    return std::any_of(tried.begin(), tried.end(), [&](std::size_t t) { return orbits.find(t) == root; });
  }

  void leaf(const Classes& rank) {
    std::vector<std::size_t> order;
    std::string text = detail::write_ranked(g_, rank, SmilesStyle::ResonantLowercase, &order);
    if (!have_best_ || text < best_text_) {
      have_best_ = true;
      best_text_ = std::move(text);
      best_rank_ = rank;
      best_order_ = std::move(order);
      return;
    }
    if (text != best_text_) return;
    std::vector<std::size_t> perm(order.size());
    bool identity = true;
    for (std::size_t i = 0; i < order.size(); ++i) {
      perm[order[i]] = best_order_[i];
      identity = identity && order[i] == best_order_[i];
    }
    if (!identity) automorphisms_.push_back(std::move(perm));
  }
};

}  // namespace

CanonicalLabeling canonical_labeling(const NormalizedGraph& g) {
  if (g.atoms.empty()) return {};
  return LabelingSearch(g).run();
}

CanonicalId canonical_form(const MolGraph& g) { return CanonicalId{canonical_labeling(normalize(g)).text}; }

bool graphs_identical(const MolGraph& a, const MolGraph& b) { return canonical_form(a) == canonical_form(b); }

}  // namespace molrl::chem
