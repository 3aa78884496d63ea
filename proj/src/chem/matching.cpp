#include "matching.hpp"

#include <deque>

namespace molrl::chem::detail {

BlossomMatcher::BlossomMatcher(std::size_t vertex_count)
    : adj_(vertex_count),
      mate_(vertex_count, kUnmatched),
      excluded_(vertex_count, false),
      parent_(vertex_count),
      base_(vertex_count),
      used_(vertex_count),
      blossom_(vertex_count) {}

void BlossomMatcher::add_edge(std::size_t a, std::size_t b) {
  adj_[a].push_back(b);
  adj_[b].push_back(a);
}

int BlossomMatcher::lowest_common_ancestor(int a, int b) {
  std::vector<bool> seen(adj_.size(), false);
  while (true) {
    a = base_[a];
    seen[a] = true;
    if (mate_[a] == kUnmatched) break;
    a = parent_[mate_[a]];
  }
  while (true) {
    b = base_[b];
    if (seen[b]) return b;
    b = parent_[mate_[b]];
  }
}

void BlossomMatcher::mark_path(int v, int b, int child) {
  while (base_[v] != b) {
    blossom_[base_[v]] = blossom_[base_[mate_[v]]] = true;
    parent_[v] = child;
    child = mate_[v];
    v = parent_[mate_[v]];
  }
}

int BlossomMatcher::find_path(int root) {
  const int n = static_cast<int>(adj_.size());
  std::fill(used_.begin(), used_.end(), false);
  std::fill(parent_.begin(), parent_.end(), -1);
  for (int i = 0; i < n; ++i) base_[i] = i;
  used_[root] = true;
  std::deque<int> queue{root};
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop_front();
    for (const std::size_t to_index : adj_[v]) {
      const int to = static_cast<int>(to_index);
      if (excluded_[to]) continue;
      if (base_[v] == base_[to] || mate_[v] == to) continue;
      if (to == root || (mate_[to] != kUnmatched && parent_[mate_[to]] != -1)) {
        const int current_base = lowest_common_ancestor(v, to);
        std::fill(blossom_.begin(), blossom_.end(), false);
        mark_path(v, current_base, to);
        mark_path(to, current_base, v);
        for (int i = 0; i < n; ++i) {
          if (blossom_[base_[i]]) {
            base_[i] = current_base;
            if (!used_[i]) {
              used_[i] = true;
              queue.push_back(i);
            }
          }
        }
      } else if (parent_[to] == -1) {
        parent_[to] = v;
        if (mate_[to] == kUnmatched) return to;
        used_[mate_[to]] = true;
        queue.push_back(mate_[to]);
      }
    }
  }
  return -1;
}

bool BlossomMatcher::augment_from(std::size_t root) {
  if (excluded_[root] || mate_[root] != kUnmatched) return false;
  int v = find_path(static_cast<int>(root));
  if (v == -1) return false;
  while (v != -1) {
    const int pv = parent_[v];
    const int ppv = mate_[pv];
    mate_[v] = pv;
    mate_[pv] = v;
    v = ppv;
  }
  return true;
}

void BlossomMatcher::solve() {
  for (std::size_t v = 0; v < adj_.size(); ++v) {
    if (excluded_[v] || mate_[v] != kUnmatched) continue;
    for (const std::size_t to : adj_[v]) {
      if (!excluded_[to] && mate_[to] == kUnmatched) {
        mate_[v] = static_cast<int>(to);
        mate_[to] = static_cast<int>(v);
        break;
      }
    }
  }
  for (std::size_t v = 0; v < adj_.size(); ++v) {
    if (!excluded_[v] && mate_[v] == kUnmatched) augment_from(v);
  }
}

}  // namespace molrl::chem::detail
