// Undirected and directed graphs on dense integer vertices, degeneracy
// orderings (smallest-last), bounded in-degree orientations and greedy
// coloring. Everything here is immutable once constructed.
#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace sparsefo {

struct input_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct cap_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class Graph {
public:
  Graph() = default;
  explicit Graph(int n) : adj_(n) {
    if (n < 0) throw input_error("graph: negative vertex count");
  }

  static Graph from_edges(int n, const std::vector<std::pair<int, int>>& edges) {
    Graph g(n);
    for (auto [u, v] : edges) g.add_edge_unsorted(u, v);
    g.finish();
    return g;
  }

  int n() const { return static_cast<int>(adj_.size()); }

  long long edge_count() const {
    long long m = 0;
    for (const auto& a : adj_) m += static_cast<long long>(a.size());
    return m / 2;
  }

  const std::vector<int>& neighbors(int v) const { return adj_[v]; }

  int degree(int v) const { return static_cast<int>(adj_[v].size()); }

  bool has_edge(int u, int v) const {
    if (u < 0 || v < 0 || u >= n() || v >= n()) return false;
    const auto& a = adj_[u];
    return std::binary_search(a.begin(), a.end(), v);
  }

  // |E|/|V| of the graph itself; the r=0 density proxy reported by tools.
  double density() const {
    return n() == 0 ? 0.0 : static_cast<double>(edge_count()) / n();
  }

  bool operator==(const Graph& o) const { return adj_ == o.adj_; }

  // Edges may be added in any order and duplicated; loops are rejected.
  void add_edge_unsorted(int u, int v) {
    check_vertex(u);
    check_vertex(v);
    if (u == v) throw input_error("graph: loop at vertex " + std::to_string(u));
    adj_[u].push_back(v);
    adj_[v].push_back(u);
  }

  // Sorts neighbor lists and drops parallel edges.
  void finish() {
    for (auto& a : adj_) {
      std::sort(a.begin(), a.end());
      a.erase(std::unique(a.begin(), a.end()), a.end());
    }
  }

private:
  void check_vertex(int v) const {
    if (v < 0 || v >= n())
      throw input_error("graph: vertex " + std::to_string(v) + " out of range");
  }

  std::vector<std::vector<int>> adj_;
};

// At most one edge per ordered pair; a pair may be joined in both directions.
class DiGraph {
public:
  DiGraph() = default;
  explicit DiGraph(int n) : out_(n), in_(n) {}

  int n() const { return static_cast<int>(out_.size()); }

  long long edge_count() const {
    long long m = 0;
    for (const auto& a : out_) m += static_cast<long long>(a.size());
    return m;
  }

  const std::vector<int>& out(int v) const { return out_[v]; }
  const std::vector<int>& in(int v) const { return in_[v]; }

  int in_degree(int v) const { return static_cast<int>(in_[v].size()); }

  int max_in_degree() const {
    int m = 0;
    for (int v = 0; v < n(); ++v) m = std::max(m, in_degree(v));
    return m;
  }

  bool has_edge(int u, int v) const {
    const auto& a = out_[u];
    return std::binary_search(a.begin(), a.end(), v);
  }

  bool adjacent(int u, int v) const { return has_edge(u, v) || has_edge(v, u); }

  // Requires has_edge(u,v) false; keeps out/in lists sorted.
  void add_edge(int u, int v) {
    if (u == v) throw input_error("digraph: loop at vertex " + std::to_string(u));
    insert_sorted(out_[u], v);
    insert_sorted(in_[v], u);
  }

  Graph underlying() const {
    Graph g(n());
    for (int u = 0; u < n(); ++u)
      for (int v : out_[u])
        if (!g.has_edge(u, v)) g.add_edge_unsorted(u, v);
    g.finish();
    return g;
  }

  bool operator==(const DiGraph& o) const { return out_ == o.out_; }

private:
  static void insert_sorted(std::vector<int>& a, int x) {
    auto it = std::lower_bound(a.begin(), a.end(), x);
    if (it != a.end() && *it == x) return;
    a.insert(it, x);
  }

  std::vector<std::vector<int>> out_, in_;
};

struct DegeneracyOrder {
  std::vector<int> order;  // order[i] = i-th vertex
  std::vector<int> pos;    // pos[v] = position of v in order
  int degeneracy = 0;
};

// Smallest-last ordering via bucket sort (the usual core-decomposition
// peeling): the removal sequence is listed in reverse, so every vertex has
// at most `degeneracy` neighbors earlier in the order. Runs in O(n + m).
inline DegeneracyOrder degeneracy_order(const Graph& g) {
  const int n = g.n();
  DegeneracyOrder res;
  res.pos.assign(n, -1);
  if (n == 0) return res;

  int maxdeg = 0;
  std::vector<int> deg(n);
  for (int v = 0; v < n; ++v) {
    deg[v] = g.degree(v);
    maxdeg = std::max(maxdeg, deg[v]);
  }
  std::vector<int> bin(maxdeg + 2, 0), vert(n), pos(n);
  for (int v = 0; v < n; ++v) ++bin[deg[v]];
  int start = 0;
  for (int d = 0; d <= maxdeg; ++d) {
    int num = bin[d];
    bin[d] = start;
    start += num;
  }
  for (int v = 0; v < n; ++v) {
    pos[v] = bin[deg[v]]++;
    vert[pos[v]] = v;
  }
  for (int d = maxdeg; d >= 1; --d) bin[d] = bin[d - 1];
  bin[0] = 0;

  int degeneracy = 0;
  for (int i = 0; i < n; ++i) {
    int v = vert[i];
    degeneracy = std::max(degeneracy, deg[v]);
    for (int u : g.neighbors(v)) {
      if (deg[u] > deg[v]) {
        int du = deg[u], pu = pos[u];
        int pw = bin[du], w = vert[pw];
        if (u != w) {
          vert[pu] = w;
          vert[pw] = u;
          pos[u] = pw;
          pos[w] = pu;
        }
        ++bin[du];
        --deg[u];
      }
    }
  }
  res.order.assign(vert.rbegin(), vert.rend());
  for (int i = 0; i < n; ++i) res.pos[res.order[i]] = i;
  res.degeneracy = degeneracy;
  return res;
}

// Directs every edge from the earlier to the later endpoint of the order,
// so max in-degree <= ord.degeneracy.
inline DiGraph orient_by_order(const Graph& g, const DegeneracyOrder& ord) {
  DiGraph d(g.n());
  for (int v = 0; v < g.n(); ++v)
    for (int u : g.neighbors(v))
      if (ord.pos[v] < ord.pos[u]) d.add_edge(v, u);
  return d;
}

struct Coloring {
  std::vector<int> color;  // 1..count
  int count = 0;

  bool proper_on(const Graph& g) const {
    for (int v = 0; v < g.n(); ++v)
      for (int u : g.neighbors(v))
        if (color[u] == color[v]) return false;
    return true;
  }
};

// First-fit along the order; uses at most degeneracy+1 colors.
inline Coloring greedy_color(const Graph& g, const DegeneracyOrder& ord) {
  Coloring c;
  c.color.assign(g.n(), 0);
  std::vector<char> used;
  for (int v : ord.order) {
    used.assign(ord.degeneracy + 2, 0);
    for (int u : g.neighbors(v)) {
      int cu = c.color[u];
      if (cu > 0 && cu <= ord.degeneracy + 1) used[cu] = 1;
    }
    int k = 1;
    while (used[k]) ++k;
    c.color[v] = k;
    c.count = std::max(c.count, k);
  }
  return c;
}

// Text format: `graph <n>`, then one `u v` pair per line; `#` starts a
// comment. Duplicate and reversed pairs collapse to one edge.
inline Graph read_graph(std::istream& is) {
  std::string line;
  int n = -1;
  Graph g;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    if (n < 0) {
      std::string kw;
      if (!(ls >> kw)) continue;
      if (kw != "graph")
        throw input_error("line " + std::to_string(lineno) + ": expected `graph <n>`");
      if (!(ls >> n) || n < 0)
        throw input_error("line " + std::to_string(lineno) + ": bad vertex count");
      g = Graph(n);
      continue;
    }
    int u, v;
    if (!(ls >> u)) continue;
    if (!(ls >> v))
      throw input_error("line " + std::to_string(lineno) + ": expected `u v`");
    g.add_edge_unsorted(u, v);
  }
  if (n < 0) throw input_error("missing `graph <n>` header");
  g.finish();
  return g;
}

inline void write_graph(std::ostream& os, const Graph& g) {
  os << "graph " << g.n() << "\n";
  for (int v = 0; v < g.n(); ++v)
    for (int u : g.neighbors(v))
      if (v < u) os << v << " " << u << "\n";
}

inline DiGraph read_digraph(std::istream& is) {
  std::string line;
  int n = -1;
  DiGraph d;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    if (n < 0) {
      std::string kw;
      if (!(ls >> kw)) continue;
      if (kw != "digraph")
        throw input_error("line " + std::to_string(lineno) + ": expected `digraph <n>`");
      if (!(ls >> n) || n < 0)
        throw input_error("line " + std::to_string(lineno) + ": bad vertex count");
      d = DiGraph(n);
      continue;
    }
    int u, v;
    if (!(ls >> u)) continue;
    if (!(ls >> v))
      throw input_error("line " + std::to_string(lineno) + ": expected `u v`");
    if (!d.has_edge(u, v)) d.add_edge(u, v);
  }
  if (n < 0) throw input_error("missing `digraph <n>` header");
  return d;
}

inline void write_digraph(std::ostream& os, const DiGraph& d) {
  os << "digraph " << d.n() << "\n";
  for (int v = 0; v < d.n(); ++v)
    for (int u : d.out(v)) os << v << " " << u << "\n";
}

// n-by-n grid, row-major vertex ids; handy guard for benchmarks.
inline Graph grid_graph(int side) {
  Graph g(side * side);
  for (int r = 0; r < side; ++r)
    for (int c = 0; c < side; ++c) {
      int v = r * side + c;
      if (c + 1 < side) g.add_edge_unsorted(v, v + 1);
      if (r + 1 < side) g.add_edge_unsorted(v, v + side);
    }
  g.finish();
  return g;
}

}  // namespace sparsefo
