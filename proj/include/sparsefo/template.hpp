// X-templates: small rooted forests with a placement map from a term set
// into the vertices, every leaf placed upon. A template is the pattern of
// how the values of the terms can sit inside a rooted forest; admissibility
// of a concrete value tuple is expressible by iterated-parent (dis)equalities
// over the forest parent function.
#pragma once

#include "sparsefo/logic.hpp"
#include "sparsefo/treedepth.hpp"

namespace sparsefo {

struct Template {
  int size = 0;
  std::vector<int> parent;  // self for roots
  std::vector<int> depth;   // roots at depth 1
  std::vector<int> alpha;   // term index -> vertex
  int term_count = 0;
  int max_depth = 0;

  bool is_root(int v) const { return parent[v] == v; }

  int iterated_parent(int v, int k) const {
    while (k-- > 0) v = parent[v];
    return v;
  }

  bool ancestor_of(int u, int v) const {
    while (depth[v] > depth[u]) v = parent[v];
    return u == v;
  }

  bool comparable(int u, int v) const {
    return ancestor_of(u, v) || ancestor_of(v, u);
  }

  std::vector<std::vector<int>> children() const {
    std::vector<std::vector<int>> ch(size);
    for (int v = 0; v < size; ++v)
      if (!is_root(v)) ch[parent[v]].push_back(v);
    return ch;
  }

  // every vertex with no children must carry a term
  bool leaves_covered() const {
    std::vector<char> has_child(size, 0), has_term(size, 0);
    for (int v = 0; v < size; ++v)
      if (!is_root(v)) has_child[parent[v]] = 1;
    for (int t = 0; t < term_count; ++t)
      if (alpha[t] >= 0) has_term[alpha[t]] = 1;
    for (int v = 0; v < size; ++v)
      if (!has_child[v] && !has_term[v]) return false;
    return true;
  }
};

namespace detail {

inline std::string template_code(const Template& t, int v,
                                 const std::vector<std::vector<int>>& ch,
                                 const std::vector<std::vector<int>>& terms_at) {
  std::string code = "(";
  for (int ti : terms_at[v]) {
    code += std::to_string(ti);
    code.push_back(',');
  }
  code.push_back(';');
  std::vector<std::string> sub;
  for (int c : ch[v]) sub.push_back(template_code(t, c, ch, terms_at));
  std::sort(sub.begin(), sub.end());
  for (const auto& s : sub) code += s;
  code.push_back(')');
  return code;
}

}  // namespace detail

// Equal keys iff the templates are isomorphic as rooted forests with
// identically placed terms.
inline std::string template_key(const Template& t) {
  auto ch = t.children();
  std::vector<std::vector<int>> terms_at(t.size);
  for (int ti = 0; ti < t.term_count; ++ti)
    if (t.alpha[ti] >= 0) terms_at[t.alpha[ti]].push_back(ti);
  std::vector<std::string> roots;
  for (int v = 0; v < t.size; ++v)
    if (t.is_root(v)) roots.push_back(detail::template_code(t, v, ch, terms_at));
  std::sort(roots.begin(), roots.end());
  std::string key;
  for (const auto& r : roots) key += r;
  return key;
}

// The minimal ancestor-closed subforest of F through the values of the given
// terms, with each term placed on its value. Returns the template plus the
// embedding of template vertices into F. The result is the unique template
// admissibly embeddable on these values.
struct CanonicalTemplate {
  Template tmpl;
  std::vector<int> embed;  // template vertex -> forest vertex
};

inline CanonicalTemplate canonical_template(const std::vector<Term>& terms,
                                            const RootedForest& f,
                                            const Structure& s,
                                            const Bindings& values) {
  std::vector<int> val(terms.size());
  for (size_t i = 0; i < terms.size(); ++i) {
    auto it = values.find(terms[i].var);
    if (it == values.end()) throw input_error("unbound variable " + terms[i].var);
    val[i] = s.eval_term(terms[i], it->second);
  }
  // collect values with their full root paths
  std::set<int> verts;
  for (int v : val) {
    if (!f.contains(v))
      throw guard_error("term value " + std::to_string(v) + " outside the forest");
    int w = v;
    while (true) {
      verts.insert(w);
      if (f.is_root(w)) break;
      w = f.parent[w];
    }
  }
  CanonicalTemplate out;
  out.embed.assign(verts.begin(), verts.end());
  std::map<int, int> local;
  for (size_t i = 0; i < out.embed.size(); ++i) local[out.embed[i]] = static_cast<int>(i);
  Template& t = out.tmpl;
  t.size = static_cast<int>(out.embed.size());
  t.term_count = static_cast<int>(terms.size());
  t.parent.resize(t.size);
  t.depth.resize(t.size);
  for (int i = 0; i < t.size; ++i) {
    int g = out.embed[i];
    t.parent[i] = f.is_root(g) ? i : local.at(f.parent[g]);
    t.depth[i] = f.depth[g];
    t.max_depth = std::max(t.max_depth, t.depth[i]);
  }
  t.alpha.resize(terms.size());
  for (size_t i = 0; i < terms.size(); ++i) t.alpha[i] = local.at(val[i]);
  return out;
}

// All X-templates of depth at most d for |X| terms, up to isomorphism.
// Exhaustive; throws once more than `cap` templates are produced.
inline std::vector<Template> enumerate_templates(int term_count, int d,
                                                 long long cap = 100000) {
  if (term_count <= 0) throw input_error("enumerate_templates: no terms");
  if (d < 1) throw input_error("enumerate_templates: depth must be >= 1");

  // terms as a bitmask; trees are built top-down, every tree owns a nonempty
  // term subset and every leaf a nonempty label
  struct Gen {
    int d;
    long long cap;
    std::map<std::pair<uint32_t, int>, std::vector<Template>> tree_memo;

    // all trees over exactly the terms in `mask`, depth <= budget
    const std::vector<Template>& trees(uint32_t mask, int budget) {
      auto memo_it = tree_memo.find({mask, budget});
      if (memo_it != tree_memo.end()) return memo_it->second;
      std::vector<Template> out;
      // choose the root label subset (may be empty if there are children)
      for (uint32_t label = mask;; label = (label - 1) & mask) {
        uint32_t rest = mask & ~label;
        if (rest == 0) {
          if (label != 0) out.push_back(single_vertex(label));
        } else if (budget >= 2) {
          for (auto& partition : set_partitions(rest)) {
            std::vector<std::vector<Template>> choices;
            bool ok = true;
            for (uint32_t part : partition) {
              const auto& sub = trees(part, budget - 1);
              if (sub.empty()) {
                ok = false;
                break;
              }
              choices.push_back(sub);
            }
            if (!ok) continue;
            std::vector<size_t> pick(choices.size(), 0);
            while (true) {
              std::vector<const Template*> kids;
              for (size_t i = 0; i < choices.size(); ++i)
                kids.push_back(&choices[i][pick[i]]);
              out.push_back(join_under_root(label, kids));
              if (static_cast<long long>(out.size()) > cap)
                throw cap_error("template enumeration cap exceeded");
              size_t i = 0;
              while (i < pick.size() && ++pick[i] == choices[i].size()) pick[i++] = 0;
              if (i == pick.size()) break;
            }
          }
        }
        if (label == 0) break;
      }
      dedupe(out);
      return tree_memo.emplace(std::make_pair(mask, budget), std::move(out))
          .first->second;
    }

    static Template single_vertex(uint32_t label) {
      Template t;
      t.size = 1;
      t.parent = {0};
      t.depth = {1};
      t.max_depth = 1;
      t.term_count = 0;
      for (uint32_t m = label; m; m &= m - 1) {
        int ti = __builtin_ctz(m);
        if (ti + 1 > t.term_count) t.term_count = ti + 1;
      }
      return with_alpha(t, label, 0);
    }

    static Template with_alpha(Template t, uint32_t label, int vertex) {
      for (uint32_t m = label; m; m &= m - 1) {
        int ti = __builtin_ctz(m);
        if (static_cast<int>(t.alpha.size()) <= ti) t.alpha.resize(ti + 1, -1);
        t.alpha[ti] = vertex;
      }
      t.term_count = static_cast<int>(t.alpha.size());
      return t;
    }

    static Template join_under_root(uint32_t label,
                                    const std::vector<const Template*>& kids) {
      Template t;
      t.size = 1;
      t.parent = {0};
      t.depth = {1};
      t.max_depth = 1;
      for (const Template* k : kids) {
        int off = t.size;
        for (int v = 0; v < k->size; ++v) {
          t.parent.push_back(k->is_root(v) ? 0 : k->parent[v] + off);
          t.depth.push_back(k->depth[v] + 1);
        }
        t.size += k->size;
        t.max_depth = std::max(t.max_depth, k->max_depth + 1);
        for (int ti = 0; ti < k->term_count; ++ti) {
          if (k->alpha[ti] < 0) continue;
          if (static_cast<int>(t.alpha.size()) <= ti) t.alpha.resize(ti + 1, -1);
          t.alpha[ti] = k->alpha[ti] + off;
        }
      }
      t.term_count = static_cast<int>(t.alpha.size());
      return with_alpha(t, label, 0);
    }

    // partitions of the set bits into unordered nonempty blocks
    static std::vector<std::vector<uint32_t>> set_partitions(uint32_t mask) {
      std::vector<std::vector<uint32_t>> out;
      std::vector<uint32_t> current;
      partition_rec(mask, current, out);
      return out;
    }

    static void partition_rec(uint32_t rest, std::vector<uint32_t>& current,
                              std::vector<std::vector<uint32_t>>& out) {
      if (rest == 0) {
        out.push_back(current);
        return;
      }
      int low = __builtin_ctz(rest);
      uint32_t low_bit = 1u << low;
      uint32_t others = rest & ~low_bit;
      // the block containing the lowest remaining bit
      for (uint32_t sub = others;; sub = (sub - 1) & others) {
        current.push_back(low_bit | sub);
        partition_rec(others & ~sub, current, out);
        current.pop_back();
        if (sub == 0) break;
      }
    }

    static void dedupe(std::vector<Template>& ts) {
      std::map<std::string, Template> seen;
      for (auto& t : ts) seen.emplace(template_key(t), std::move(t));
      ts.clear();
      for (auto& [k, t] : seen) ts.push_back(std::move(t));
    }
  };

  Gen gen{d, cap, {}};
  uint32_t full = (term_count == 32) ? ~0u : ((1u << term_count) - 1);

  // forests: partition the terms across trees
  std::vector<Template> out;
  for (auto& partition : Gen::set_partitions(full)) {
    std::vector<std::vector<Template>> choices;
    bool ok = true;
    for (uint32_t part : partition) {
      const auto& sub = gen.trees(part, d);
      if (sub.empty()) {
        ok = false;
        break;
      }
      choices.push_back(sub);
    }
    if (!ok) continue;
    std::vector<size_t> pick(choices.size(), 0);
    while (true) {
      Template t;
      for (size_t i = 0; i < choices.size(); ++i) {
        const Template& k = choices[i][pick[i]];
        int off = t.size;
        for (int v = 0; v < k.size; ++v) {
          t.parent.push_back(k.is_root(v) ? v + off : k.parent[v] + off);
          t.depth.push_back(k.depth[v]);
        }
        t.size += k.size;
        t.max_depth = std::max(t.max_depth, k.max_depth);
        for (int ti = 0; ti < k.term_count; ++ti) {
          if (k.alpha[ti] < 0) continue;
          if (static_cast<int>(t.alpha.size()) <= ti) t.alpha.resize(ti + 1, -1);
          t.alpha[ti] = k.alpha[ti] + off;
        }
      }
      t.term_count = term_count;
      t.alpha.resize(term_count, -1);
      out.push_back(std::move(t));
      if (static_cast<long long>(out.size()) > cap)
        throw cap_error("template enumeration cap exceeded");
      size_t i = 0;
      while (i < pick.size() && ++pick[i] == choices[i].size()) pick[i++] = 0;
      if (i == pick.size()) break;
    }
  }
  Gen::dedupe(out);
  return out;
}

// Admissibility formula: the conjunction over term pairs and iteration counts
// 0..depth+1 of p^k(t) = p^k'(t') or its negation, matching the template's
// iterated-parent pattern. Satisfied by exactly the value tuples that embed
// admissibly when p is the forest parent function.
inline FormulaPtr build_xi(const Template& t, const std::vector<Term>& terms,
                           int p_fn) {
  int d = t.max_depth;
  std::set<std::string> seen;
  FormulaPtr xi = nullptr;
  auto add = [&](FormulaPtr lit, const std::string& sig) {
    if (!seen.insert(sig).second) return;
    xi = xi ? Formula::conj(xi, lit) : lit;
  };
  auto tower = [&](const Term& base, int k) {
    Term out = base;
    for (int i = 0; i < k; ++i) out.fns.push_back(p_fn);
    return out;
  };
  for (size_t a = 0; a < terms.size(); ++a) {
    for (size_t b = a; b < terms.size(); ++b) {
      for (int k = 0; k <= d + 1; ++k) {
        for (int kk = 0; kk <= d + 1; ++kk) {
          if (a == b && k == kk) continue;
          int va = t.iterated_parent(t.alpha[a], k);
          int vb = t.iterated_parent(t.alpha[b], kk);
          Term ta = tower(terms[a], k);
          Term tb = tower(terms[b], kk);
          std::string sig = std::to_string(a) + "." + std::to_string(k) + "/" +
                            std::to_string(b) + "." + std::to_string(kk);
          if (va == vb)
            add(Formula::eq(ta, tb), sig);
          else
            add(Formula::neg(Formula::eq(ta, tb)), sig);
        }
      }
    }
  }
  return xi ? xi : Formula::top();
}

}  // namespace sparsefo
