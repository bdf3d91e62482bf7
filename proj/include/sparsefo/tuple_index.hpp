// Constant-time relation membership for structures guarded by a degenerate
// graph: every tuple is associated with its element that comes latest in a
// degeneracy order, so each vertex carries boundedly many tuples.
#pragma once

#include <unordered_set>

#include "sparsefo/graph.hpp"
#include "sparsefo/logic.hpp"

namespace sparsefo {

class TupleIndex {
public:
  TupleIndex() = default;

  struct Assoc {
    int rel;
    std::vector<int> tuple;
  };

  const std::vector<Assoc>& associated(int v) const { return assoc_[v]; }

  bool member(int rel, const std::vector<int>& t) const {
    return keys_.count(encode(rel, t)) > 0;
  }

  friend TupleIndex build_tuple_index(const DegeneracyOrder& ord,
                                      const Structure& s, const Graph& guard);

private:
  static std::string encode(int rel, const std::vector<int>& t) {
    std::string k = std::to_string(rel);
    for (int v : t) {
      k += ',';
      k += std::to_string(v);
    }
    return k;
  }

  std::vector<std::vector<Assoc>> assoc_;
  std::unordered_set<std::string> keys_;
};

inline TupleIndex build_tuple_index(const DegeneracyOrder& ord, const Structure& s,
                                    const Graph& guard) {
  if (s.n() != guard.n())
    throw input_error("tuple index: structure and guard sizes differ");
  TupleIndex idx;
  idx.assoc_.resize(s.n());
  const Language& lang = s.language();
  for (int r = 0; r < lang.relation_count(); ++r) {
    for (const auto& t : s.tuples(r)) {
      for (size_t i = 0; i < t.size(); ++i)
        for (size_t j = i + 1; j < t.size(); ++j)
          if (t[i] != t[j] && !guard.has_edge(t[i], t[j]))
            throw input_error("tuple not guarded: elements " + std::to_string(t[i]) +
                              " and " + std::to_string(t[j]) + " are not adjacent");
      if (!t.empty()) {
        int latest = t[0];
        for (int v : t)
          if (ord.pos[v] > ord.pos[latest]) latest = v;
        idx.assoc_[latest].push_back({r, t});
      }
      idx.keys_.insert(TupleIndex::encode(r, t));
    }
  }
  return idx;
}

}  // namespace sparsefo
