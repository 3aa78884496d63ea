#include "molrl/chem/molgraph.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <string>

namespace molrl::chem {

std::vector<bool> find_bridges(std::size_t vertex_count,
                               std::span<const std::pair<std::size_t, std::size_t>> edges) {
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adj(vertex_count);
  for (std::size_t e = 0; e < edges.size(); ++e) {
    adj[edges[e].first].emplace_back(edges[e].second, e);
    adj[edges[e].second].emplace_back(edges[e].first, e);
  }
  constexpr auto kUnset = static_cast<std::size_t>(-1);
  std::vector<bool> bridge(edges.size(), false);
  std::vector<std::size_t> disc(vertex_count, kUnset);
  std::vector<std::size_t> low(vertex_count, 0);
  std::size_t timer = 0;

  struct Frame {
    std::size_t vertex;
    std::size_t parent_edge;
    std::size_t next;
  };
  std::vector<Frame> stack;
  for (std::size_t root = 0; root < vertex_count; ++root) {
    if (disc[root] != kUnset) continue;
    disc[root] = low[root] = timer++;
    stack.push_back({root, kUnset, 0});
    while (!stack.empty()) {
      auto& f = stack.back();
      if (f.next < adj[f.vertex].size()) {
        const auto [to, edge] = adj[f.vertex][f.next++];
        if (edge == f.parent_edge) continue;
        if (disc[to] == kUnset) {
          disc[to] = low[to] = timer++;
          stack.push_back({to, edge, 0});
        } else {
          low[f.vertex] = std::min(low[f.vertex], disc[to]);
        }
      } else {
        const Frame done = f;
        stack.pop_back();
        if (!stack.empty()) {
          auto& parent = stack.back();
          low[parent.vertex] = std::min(low[parent.vertex], low[done.vertex]);
          if (low[done.vertex] > disc[parent.vertex]) bridge[done.parent_edge] = true;
        }
      }
    }
  }
  return bridge;
}

MolGraph MolGraph::from_parts(std::vector<Atom> atoms, std::vector<Bond> bonds,
                              bool discarded_annotations) {
  MolGraph g;
  const std::size_t n = atoms.size();
  for (std::size_t i = 0; i < n; ++i) atoms[i].index = i;
  std::set<std::pair<std::size_t, std::size_t>> seen;
  g.adjacency_.resize(n);
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  edges.reserve(bonds.size());
  for (std::size_t b = 0; b < bonds.size(); ++b) {
    const auto& bond = bonds[b];
    if (bond.begin >= n || bond.end >= n) throw InvalidGraph("bond endpoint out of range");
    if (bond.begin == bond.end) throw InvalidGraph("bond endpoints must be distinct");
    const auto key = std::minmax(bond.begin, bond.end);
    if (!seen.insert(key).second) {
      throw InvalidGraph("more than one bond between atoms " + std::to_string(key.first) + " and " +
                         std::to_string(key.second));
    }
    g.adjacency_[bond.begin].push_back({bond.end, b});
    g.adjacency_[bond.end].push_back({bond.begin, b});
    edges.emplace_back(bond.begin, bond.end);
  }
  g.bridge_ = find_bridges(n, edges);
  g.in_ring_.assign(n, false);
  for (std::size_t b = 0; b < bonds.size(); ++b) {
    if (!g.bridge_[b]) g.in_ring_[bonds[b].begin] = g.in_ring_[bonds[b].end] = true;
  }

  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::size_t components = n;
  for (const auto& [a, b] : edges) {
    const auto ra = find(a);
    const auto rb = find(b);
    if (ra != rb) {
      parent[ra] = rb;
      --components;
    }
  }
  g.components_ = components;
  g.atoms_ = std::move(atoms);
  g.bonds_ = std::move(bonds);
  g.discarded_annotations_ = discarded_annotations;
  return g;
}

std::optional<std::size_t> MolGraph::bond_between(std::size_t a, std::size_t b) const {
  for (const auto& nb : adjacency_[a]) {
    if (nb.atom == b) return nb.bond;
  }
  return std::nullopt;
}

MolGraph relabel(const MolGraph& g, std::span<const std::size_t> new_index,
                 std::span<const std::size_t> bond_order) {
  const std::size_t n = g.atom_count();
  if (new_index.size() != n) throw InvalidGraph("relabel: permutation size mismatch");
  if (!bond_order.empty() && bond_order.size() != g.bond_count()) {
    throw InvalidGraph("relabel: bond order size mismatch");
  }
  std::vector<Atom> atoms(n);
  std::vector<bool> used(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    if (new_index[i] >= n || used[new_index[i]]) throw InvalidGraph("relabel: not a permutation");
    used[new_index[i]] = true;
    atoms[new_index[i]] = g.atom(i);
  }
  std::vector<Bond> bonds;
  bonds.reserve(g.bond_count());
  for (std::size_t k = 0; k < g.bond_count(); ++k) {
    const auto& b = g.bond(bond_order.empty() ? k : bond_order[k]);
    bonds.push_back({new_index[b.begin], new_index[b.end], b.order});
  }
  return MolGraph::from_parts(std::move(atoms), std::move(bonds), g.discarded_annotations());
}

}  // namespace molrl::chem
