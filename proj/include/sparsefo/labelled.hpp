// k-labelled structures and canonical keys. Two labelled structures get the
// same key exactly when their label domains agree and their trunks (the
// structures with fully-labelled tuples removed) are isomorphic by a
// label-preserving map. Keys are computed by brute force over orderings of
// the unlabelled elements, which is fine for the handful of elements these
// structures ever have.
#pragma once

#include <map>
#include <unordered_map>

#include "sparsefo/logic.hpp"

namespace sparsefo {

using CanonicalKey = std::string;

// Compact labelled structure over an implicit language: rels[r] holds the
// tuples of relation r (positive arity only). labels[i] is element i's label
// or 0. Used as the unit of the per-forest index lists.
struct LStruct {
  int m = 0;
  std::vector<int> labels;
  std::vector<std::vector<std::vector<int>>> rels;

  int labelled_count() const {
    int c = 0;
    for (int l : labels)
      if (l > 0) ++c;
    return c;
  }
  int unlabelled_count() const { return m - labelled_count(); }

  bool operator==(const LStruct&) const = default;
};

namespace detail {

inline void encode_int(std::string& out, int x) {
  // small nonnegative ints; 0xff escapes larger values
  if (x < 0xff) {
    out.push_back(static_cast<char>(x));
  } else {
    out.push_back(static_cast<char>(0xff));
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((x >> (8 * i)) & 0xff));
  }
}

inline std::string encode_under(const LStruct& s, const std::vector<int>& perm) {
  // perm maps old element index -> canonical index
  std::string out;
  encode_int(out, s.m);
  std::vector<std::pair<int, int>> lab;  // (label, canonical index)
  for (int i = 0; i < s.m; ++i)
    if (s.labels[i] > 0) lab.emplace_back(s.labels[i], perm[i]);
  std::sort(lab.begin(), lab.end());
  encode_int(out, static_cast<int>(lab.size()));
  for (auto [l, i] : lab) {
    encode_int(out, l);
    encode_int(out, i);
  }
  for (const auto& rel : s.rels) {
    std::vector<std::vector<int>> ts;
    ts.reserve(rel.size());
    for (const auto& t : rel) {
      std::vector<int> mapped(t.size());
      for (size_t i = 0; i < t.size(); ++i) mapped[i] = perm[t[i]];
      ts.push_back(std::move(mapped));
    }
    std::sort(ts.begin(), ts.end());
    encode_int(out, static_cast<int>(ts.size()));
    for (const auto& t : ts)
      for (int v : t) encode_int(out, v);
  }
  return out;
}

}  // namespace detail

// Canonical key: labelled elements are pinned to positions 0..L-1 in label
// order; the encoding is minimized over all orderings of the rest.
inline CanonicalKey canonical_key(const LStruct& s) {
  std::vector<int> perm(s.m, -1);
  std::vector<std::pair<int, int>> lab;
  std::vector<int> unlab;
  for (int i = 0; i < s.m; ++i) {
    if (s.labels[i] > 0)
      lab.emplace_back(s.labels[i], i);
    else
      unlab.push_back(i);
  }
  std::sort(lab.begin(), lab.end());
  for (size_t i = 0; i < lab.size(); ++i) perm[lab[i].second] = static_cast<int>(i);

  if (unlab.empty()) return detail::encode_under(s, perm);

  std::vector<int> slots(unlab.size());
  for (size_t i = 0; i < slots.size(); ++i)
    slots[i] = static_cast<int>(lab.size() + i);
  std::string best;
  std::sort(unlab.begin(), unlab.end());
  do {
    for (size_t i = 0; i < unlab.size(); ++i) perm[unlab[i]] = slots[i];
    std::string enc = detail::encode_under(s, perm);
    if (best.empty() || enc < best) best = std::move(enc);
  } while (std::next_permutation(unlab.begin(), unlab.end()));
  return best;
}

// The spec-facing labelled structure: a Structure plus an injective partial
// labelling of {1..k-1}.
struct KLabelledStructure {
  Structure core;
  std::map<int, int> sigma;  // label -> element
  int k = 0;

  // removes tuples whose elements are all labelled
  KLabelledStructure trunk() const {
    KLabelledStructure t = *this;
    std::vector<char> labelled(core.n(), 0);
    for (auto [l, e] : sigma) labelled[e] = 1;
    const Language& lang = core.language();
    for (int r = 0; r < lang.relation_count(); ++r) {
      std::vector<std::vector<int>> drop;
      for (const auto& tup : t.core.tuples(r)) {
        bool all = true;
        for (int v : tup)
          if (!labelled[v]) {
            all = false;
            break;
          }
        if (all) drop.push_back(tup);
      }
      for (const auto& tup : drop) t.core.remove_tuple(r, tup);
    }
    return t;
  }

  bool is_hollow() const {
    KLabelledStructure t = trunk();
    return t.core == core;
  }
};

inline CanonicalKey canonical_key(const KLabelledStructure& ks, int max_elements = 8) {
  if (ks.core.n() > max_elements)
    throw cap_error("canonical_key: structure too large (" +
                    std::to_string(ks.core.n()) + " elements)");
  for (auto [l, e] : ks.sigma) {
    if (l < 1 || l >= ks.k) throw input_error("label out of range");
    if (e < 0 || e >= ks.core.n()) throw input_error("labelled element out of range");
  }
  KLabelledStructure t = ks.trunk();
  LStruct s;
  s.m = t.core.n();
  s.labels.assign(s.m, 0);
  for (auto [l, e] : t.sigma) {
    if (s.labels[e] != 0) throw input_error("labelling not injective");
    s.labels[e] = l;
  }
  const Language& lang = t.core.language();
  s.rels.resize(lang.relation_count());
  for (int r = 0; r < lang.relation_count(); ++r) {
    if (lang.arity(r) == 0) continue;  // nullary facts are not part of trunks
    for (const auto& tup : t.core.tuples(r)) s.rels[r].push_back(tup);
  }
  return canonical_key(s);
}

}  // namespace sparsefo
