#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace molrl::chem::detail {

/// Maximum-cardinality matching in a general graph (Edmonds' blossom
/// algorithm, O(V^3)). Vertices can be excluded to ask whether a matching
/// survives the removal of some atoms.
class BlossomMatcher {
 public:
  static constexpr int kUnmatched = -1;

  explicit BlossomMatcher(std::size_t vertex_count);

  void add_edge(std::size_t a, std::size_t b);

  // Greedy start followed by augmentation from every free vertex, in index
  // order. Deterministic for a given edge insertion order.
  void solve();

  // Tries to grow the current matching with an augmenting path rooted at
  // `root`. Returns true on success.
  bool augment_from(std::size_t root);

  void set_excluded(std::size_t v, bool excluded) { excluded_[v] = excluded; }
  void set_mate(std::size_t v, int mate) { mate_[v] = mate; }

  int mate(std::size_t v) const { return mate_[v]; }
  const std::vector<int>& mates() const { return mate_; }
  std::size_t size() const { return adj_.size(); }

 private:
  std::vector<std::vector<std::size_t>> adj_;
  std::vector<int> mate_;
  std::vector<bool> excluded_;
  // Scratch for the search.
  std::vector<int> parent_;
  std::vector<int> base_;
  std::vector<bool> used_;
  std::vector<bool> blossom_;

  int lowest_common_ancestor(int a, int b);
  void mark_path(int v, int b, int child);
  int find_path(int root);
};

}  // namespace molrl::chem::detail
