// Low tree-depth colorings and depth-certifying rooted forests.
//
// A coloring of the 3(d+1)^2-th augmentation is a low tree-depth coloring of
// order d: any s <= d classes induce a subgraph of tree-depth at most s. The
// certifying forests here are DFS forests of the induced subgraph; an
// undirected DFS tree has no cross edges, so every induced edge joins an
// ancestor-descendant pair, and tree-depth <= s caps the DFS depth at
// 2^s - 1 because no induced path has more than 2^s - 1 vertices.
#pragma once

#include <map>

#include "sparsefo/augment.hpp"
#include "sparsefo/graph.hpp"

namespace sparsefo {

// Forest over a subset of 0..n-1. Roots are their own parents and sit at
// depth 1; vertices outside the forest have parent -1 and depth 0.
struct RootedForest {
  std::vector<int> parent;
  std::vector<int> depth;
  std::vector<int> members;  // ascending
  int max_depth = 0;

  int n() const { return static_cast<int>(parent.size()); }
  bool contains(int v) const { return parent[v] >= 0; }
  bool is_root(int v) const { return parent[v] == v; }

  static RootedForest empty(int n) {
    RootedForest f;
    f.parent.assign(n, -1);
    f.depth.assign(n, 0);
    return f;
  }

  // u an ancestor of v (reflexively)?
  bool ancestor_of(int u, int v) const {
    while (depth[v] > depth[u]) v = parent[v];
    return u == v;
  }

  bool closure_has_edge(int u, int v) const {
    if (u == v) return false;
    return ancestor_of(u, v) || ancestor_of(v, u);
  }
};

// DFS forest of the subgraph of g induced by `members`. Component roots are
// the smallest-index vertices; children are visited in ascending order.
// Fails if some induced edge does not join an ancestor-descendant pair,
// which cannot happen for a DFS forest and signals internal breakage.
inline RootedForest depth_certifying_forest(const Graph& g,
                                            const std::vector<int>& members) {
  RootedForest f = RootedForest::empty(g.n());
  std::vector<char> in(g.n(), 0);
  for (int v : members) {
    if (v < 0 || v >= g.n()) throw input_error("forest member out of range");
    in[v] = 1;
  }
  f.members = members;
  std::sort(f.members.begin(), f.members.end());
  f.members.erase(std::unique(f.members.begin(), f.members.end()), f.members.end());

  std::vector<std::pair<int, int>> stack;  // (vertex, parent)
  for (int root : f.members) {
    if (f.parent[root] >= 0) continue;
    stack.emplace_back(root, root);
    while (!stack.empty()) {
      auto [v, p] = stack.back();
      stack.pop_back();
      if (f.parent[v] >= 0) continue;
      f.parent[v] = p;
      f.depth[v] = (v == p) ? 1 : f.depth[p] + 1;
      f.max_depth = std::max(f.max_depth, f.depth[v]);
      // push descending so the smallest unvisited neighbor is explored first
      const auto& nb = g.neighbors(v);
      for (auto it = nb.rbegin(); it != nb.rend(); ++it) {
        int u = *it;
        if (in[u] && f.parent[u] < 0) stack.emplace_back(u, v);
      }
    }
  }
  for (int v : f.members)
    for (int u : g.neighbors(v))
      if (in[u] && v < u && !f.closure_has_edge(u, v))
        throw std::logic_error("depth-certifying forest: induced edge " +
                               std::to_string(v) + "-" + std::to_string(u) +
                               " violates the ancestor property");
  return f;
}

// Exact tree-depth by recursive vertex removal with memoization on vertex
// subsets; exponential, usable up to 20 vertices.
namespace detail {

class TreedepthSolver {
public:
  explicit TreedepthSolver(const Graph& g) : g_(g) {
    if (g.n() > 20) throw input_error("exact_treedepth: more than 20 vertices");
    adj_.resize(g.n());
    for (int v = 0; v < g.n(); ++v)
      for (int u : g.neighbors(v)) adj_[v] |= (1u << u);
  }

  int solve(uint32_t mask) {
    if (mask == 0) return 0;
    auto it = memo_.find(mask);
    if (it != memo_.end()) return it->second;
    int result;
    uint32_t comp = component_of(mask, lowest(mask));
    if (comp != mask) {
      result = std::max(solve(comp), solve(mask & ~comp));
    } else if ((mask & (mask - 1)) == 0) {
      result = 1;  // single vertex
    } else {
      result = g_.n() + 1;
      for (uint32_t m = mask; m;) {
        uint32_t bit = m & (~m + 1);
        m &= m - 1;
        result = std::min(result, 1 + solve(mask & ~bit));
        if (result == 2) break;  // cannot beat 2 on a connected graph with an edge
      }
    }
    memo_[mask] = result;
    return result;
  }

  uint32_t full_mask() const {
    return g_.n() == 32 ? ~0u : ((1u << g_.n()) - 1);
  }

private:
  static int lowest(uint32_t mask) { return __builtin_ctz(mask); }

  uint32_t component_of(uint32_t mask, int start) const {
    uint32_t seen = 1u << start;
    uint32_t frontier = seen;
    while (frontier) {
      uint32_t next = 0;
      for (uint32_t m = frontier; m;) {
        int v = lowest(m);
        m &= m - 1;
        next |= adj_[v] & mask & ~seen;
      }
      seen |= next;
      frontier = next;
    }
    return seen;
  }

  const Graph& g_;
  std::vector<uint32_t> adj_;
  std::map<uint32_t, int> memo_;
};

}  // namespace detail

inline int exact_treedepth(const Graph& g) {
  if (g.n() == 0) return 0;
  detail::TreedepthSolver solver(g);
  return solver.solve(solver.full_mask());
}

struct LowTDColoring {
  AugmentationChain chain;
  Coloring coloring;  // proper on chain.augmented
  int order = 0;      // d

  std::vector<int> class_members(const std::vector<int>& classes) const {
    std::vector<int> out;
    for (int v = 0; v < static_cast<int>(coloring.color.size()); ++v)
      for (int c : classes)
        if (coloring.color[v] == c) {
          out.push_back(v);
          break;
        }
    return out;
  }
};

inline LowTDColoring low_treedepth_coloring(const Graph& g, int d,
                                            const AugmentOptions& opt = {}) {
  if (d < 1) throw input_error("low tree-depth coloring order must be >= 1");
  LowTDColoring ltd;
  ltd.order = d;
  ltd.chain = kth_augmentation(g, 3 * (d + 1) * (d + 1), opt);
  ltd.coloring = greedy_color(ltd.chain.augmented, degeneracy_order(ltd.chain.augmented));
  return ltd;
}

}  // namespace sparsefo
