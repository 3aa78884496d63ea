#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "molrl/chem/element.hpp"
#include "molrl/fingerprints.hpp"
#include "molrl/stable_hash.hpp"

namespace molrl::fp {

using chem::BondClass;
using chem::NormalizedGraph;

namespace {

char bond_symbol(BondClass c) {
  switch (c) {
    case BondClass::Single:
      return '-';
    case BondClass::Double:
      return '=';
    case BondClass::Triple:
      return '#';
    case BondClass::Resonant:
      return ':';
  }
  return '?';
}

class PathWalker {
 public:
  explicit PathWalker(const NormalizedGraph& g) : g_(g), on_path_(g.atoms.size(), false) {}

  std::set<std::string> run() {
    for (std::size_t start = 0; start < g_.atoms.size(); ++start) {
      atoms_.assign(1, start);
      on_path_[start] = true;
      extend(start);
      on_path_[start] = false;
    }
    return std::move(out_);
  }

 private:
  const NormalizedGraph& g_;
  std::vector<bool> on_path_;
  std::vector<std::size_t> atoms_;
  std::vector<BondClass> bonds_;
  std::set<std::string> out_;

  void extend(std::size_t v) {
    if (bonds_.size() == kMaxPathBonds) return;
    for (const auto& [nb, bond] : g_.adjacency[v]) {
      if (on_path_[nb]) continue;
      on_path_[nb] = true;
      atoms_.push_back(nb);
      bonds_.push_back(g_.bonds[bond].cls);
      record();
      extend(nb);
      bonds_.pop_back();
      atoms_.pop_back();
      on_path_[nb] = false;
    }
  }

  void record() {
    std::string forward;
    std::string backward;
    const std::size_t n = atoms_.size();
    for (std::size_t i = 0; i < n; ++i) {
      if (i > 0) forward += bond_symbol(bonds_[i - 1]);
      forward += chem::symbol(g_.atoms[atoms_[i]].element);
      if (i > 0) backward += bond_symbol(bonds_[n - 1 - i]);
      backward += chem::symbol(g_.atoms[atoms_[n - 1 - i]].element);
    }
    out_.insert(std::min(forward, backward));
  }
};

std::size_t fold(std::uint64_t h) { return static_cast<std::size_t>(h % kHashedWidth); }

}  // namespace

std::set<std::string> path_sequences(const NormalizedGraph& g) { return PathWalker(g).run(); }

BitVector path_fp(const NormalizedGraph& g) {
  BitVector bits(kHashedWidth);
  for (const std::string& seq : path_sequences(g)) bits.set(fold(stable_hash(seq)));
  return bits;
}

BitVector path_fp(const chem::MolGraph& g) { return path_fp(chem::normalize(g)); }

std::vector<std::uint64_t> circular_identifiers(const NormalizedGraph& g, int radius) {
  const std::size_t n = g.atoms.size();
  std::vector<std::uint64_t> ids(n);
  for (std::size_t v = 0; v < n; ++v) {
    const chem::NormAtom& a = g.atoms[v];
    ids[v] = StableHasher{}
                 .i64(static_cast<int>(a.element))
                 .i64(static_cast<std::int64_t>(g.degree(v)))
                 .i64(a.charge)
                 .i64(a.in_ring ? 1 : 0)
                 .i64(a.hydrogens)
                 .digest();
  }
  for (int round = 0; round < radius; ++round) {
    std::vector<std::uint64_t> next(n);
    for (std::size_t v = 0; v < n; ++v) {
      std::vector<std::pair<std::uint64_t, std::uint64_t>> env;
      for (const auto& [nb, bond] : g.adjacency[v]) {
        env.emplace_back(static_cast<std::uint64_t>(g.bonds[bond].cls), ids[nb]);
      }
      std::sort(env.begin(), env.end());
      StableHasher h;
      h.u64(static_cast<std::uint64_t>(round + 1)).u64(ids[v]);
      for (const auto& [cls, id] : env) h.u64(cls).u64(id);
      next[v] = h.digest();
    }
    ids = std::move(next);
  }
  return ids;
}

BitVector circular_fp(const NormalizedGraph& g) {
  BitVector bits(kHashedWidth);
  for (int r = 0; r <= kCircularRadius; ++r) {
    for (const std::uint64_t id : circular_identifiers(g, r)) bits.set(fold(id));
  }
  return bits;
}

BitVector circular_fp(const chem::MolGraph& g) { return circular_fp(chem::normalize(g)); }

}  // namespace molrl::fp
