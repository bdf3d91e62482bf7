// Oriented transitive-fraternal augmentations. One round adds, reading the
// input digraph only:
//   - x->y whenever x->z->y exists and x->y does not (transitivity), and
//   - one of x->y / y->x for nonadjacent x,y with a common out-neighbor
//     (fraternality), oriented along a degeneracy order of the graph formed
//     by the fraternal pairs.
// A k-th augmentation iterates this from a degeneracy orientation. Rounds
// are deterministic, so chains are reproducible byte for byte.
#pragma once

#include <cstdint>
#include <set>

#include "sparsefo/graph.hpp"

namespace sparsefo {

struct AugmentOptions {
  // Abort once the running digraph exceeds this many edges (0 = unlimited).
  long long max_edges = 0;
};

inline DiGraph oriented_augment(const DiGraph& d, const AugmentOptions& opt = {}) {
  const int n = d.n();
  std::vector<std::pair<int, int>> trans;
  std::set<std::pair<int, int>> trans_set;
  for (int z = 0; z < n; ++z) {
    for (int x : d.in(z)) {
      for (int y : d.out(z)) {
        if (x == y || d.has_edge(x, y)) continue;
        if (trans_set.insert({x, y}).second) trans.emplace_back(x, y);
      }
    }
  }

  // fraternal pairs not already settled by a transitive edge
  std::vector<std::pair<int, int>> frat;
  std::set<std::pair<int, int>> frat_set;
  for (int z = 0; z < n; ++z) {
    const auto& in = d.in(z);
    for (size_t i = 0; i < in.size(); ++i) {
      for (size_t j = i + 1; j < in.size(); ++j) {
        int x = in[i], y = in[j];
        if (d.adjacent(x, y)) continue;
        if (trans_set.count({x, y}) || trans_set.count({y, x})) continue;
        if (frat_set.insert({x, y}).second) frat.emplace_back(x, y);
      }
    }
  }

  if (opt.max_edges > 0 &&
      d.edge_count() + static_cast<long long>(trans.size()) +
              static_cast<long long>(frat.size()) >
          opt.max_edges)
    throw cap_error("augmentation edge budget exceeded (" +
                    std::to_string(d.edge_count() + trans.size() + frat.size()) +
                    " > " + std::to_string(opt.max_edges) + ")");

  // orient the fraternal pairs by a fresh degeneracy order of the graph they
  // span, keeping their in-degree within twice its density
  DiGraph out(n);
  if (!frat.empty()) {
    std::vector<int> verts;
    for (auto [x, y] : frat) {
      verts.push_back(x);
      verts.push_back(y);
    }
    std::sort(verts.begin(), verts.end());
    verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
    std::vector<int> local(n, -1);
    for (size_t i = 0; i < verts.size(); ++i) local[verts[i]] = static_cast<int>(i);
    Graph fg(static_cast<int>(verts.size()));
    for (auto [x, y] : frat) fg.add_edge_unsorted(local[x], local[y]);
    fg.finish();
    DegeneracyOrder ford = degeneracy_order(fg);
    for (auto [x, y] : frat) {
      if (ford.pos[local[x]] < ford.pos[local[y]])
        out.add_edge(x, y);
      else
        out.add_edge(y, x);
    }
  }
  for (int v = 0; v < n; ++v)
    for (int u : d.out(v)) out.add_edge(v, u);
  for (auto [x, y] : trans) out.add_edge(x, y);
  return out;
}

struct AugmentationChain {
  Graph base;                    // G
  std::vector<DiGraph> digraphs; // D_0 .. D_j, truncated once stationary
  Graph augmented;               // underlying graph of the last digraph
  int k = 0;                     // requested round count
  int stationary_at = -1;        // first round whose augmentation added nothing

  const DiGraph& last() const { return digraphs.back(); }
};

// Starts from the given orientation; rounds stop early once no rule fires,
// since every later digraph in the chain would be identical.
inline AugmentationChain kth_augmentation(const Graph& g, const DiGraph& d0, int k,
                                          const AugmentOptions& opt = {}) {
  if (k < 0) throw input_error("augmentation round count must be >= 0");
  AugmentationChain chain;
  chain.base = g;
  chain.k = k;
  chain.digraphs.push_back(d0);
  for (int i = 1; i <= k; ++i) {
    DiGraph next = oriented_augment(chain.digraphs.back(), opt);
    if (next == chain.digraphs.back()) {
      chain.stationary_at = i;
      break;
    }
    chain.digraphs.push_back(std::move(next));
  }
  chain.augmented = chain.digraphs.back().underlying();
  return chain;
}

// D_0 is the degeneracy orientation of g; its in-degree bound leaves two
// slack slots under 2*density+2, which simplification spends on function
// edges.
inline AugmentationChain kth_augmentation(const Graph& g, int k,
                                          const AugmentOptions& opt = {}) {
  return kth_augmentation(g, orient_by_order(g, degeneracy_order(g)), k, opt);
}

}  // namespace sparsefo
