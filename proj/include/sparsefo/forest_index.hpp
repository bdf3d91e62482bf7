// Dynamic Sigma_1 query index over a structure guarded by the closure of a
// rooted forest of bounded depth.
//
// Each vertex v at depth d stores
//   list1: per relation, the tuples lying on v's root path with v deepest,
//   list2: canonical keys of the d-labelled hollow structures (at most d0
//          elements) realized by induced substructures drawn from v's root
//          path and subtree, each with a certificate, and
//   list3: for non-leaves, which children realize which (d+1)-labelled key.
// A virtual root at depth 0 aggregates the tree roots the same way; its
// list2 is the global list of unlabelled structures realized anywhere in
// the structure. Nullary relations are global facts and live outside the
// per-vertex lists.
//
// list2 entries are assembled from a path pattern plus child pieces: choose
// the occupied path depths, take the forced path tuples from list1, pick a
// multiset of child keys, and accept when distinct children can realize the
// pieces, tested by a small bipartite matching. An update touches only the
// vertices on the root path of the changed tuple's deepest element.
//
// An assembly depends only on the vertex depth, the depth profile of its
// list1 and the multiset of children key sets, so results are memoized on
// that signature and shared across forests through IndexCache.
#pragma once

#include <memory>
#include <unordered_map>

#include "sparsefo/labelled.hpp"
#include "sparsefo/matching.hpp"
#include "sparsefo/treedepth.hpp"

namespace sparsefo {

struct guard_error : input_error {
  using input_error::input_error;
};

// Which path depths an entry occupies, whether the list vertex itself is an
// element, and the child pieces. Concrete children are re-derived by a
// matching when a witness is decoded, so certificates stay valid across
// updates elsewhere in the forest.
struct Cert {
  uint64_t dmask = 0;
  bool v_used = false;
  std::vector<CanonicalKey> pieces;
};

struct IndexCounters {
  long long build_vertices = 0;
  long long build_work = 0;
  long long update_vertices = 0;  // vertices recomputed by the last update
  long long update_vertices_total = 0;
  long long global_recomputes = 0;
  long long query_keys = 0;  // global keys inspected by the last query
  long long query_work_total = 0;
};

// Shared across the forests of one composite index.
struct IndexCache {
  // assembly signature -> (list2 contents, work units)
  std::unordered_map<std::string,
                     std::pair<std::vector<std::pair<CanonicalKey, Cert>>, long long>>
      assembly;
  std::unordered_map<CanonicalKey, LStruct> intern;
  std::unordered_map<std::string, char> sat;  // formula/key satisfaction
};

struct QueryResult {
  bool sat = false;
  Bindings witness;
};

class ForestIndex {
public:
  ForestIndex(const RootedForest& forest, const Structure& s, int d0,
              std::shared_ptr<IndexCache> cache = nullptr)
      : d0_(d0), cache_(std::move(cache)) {
    if (d0 < 1) throw input_error("forest index: d0 must be >= 1");
    if (d0 > 6) throw cap_error("forest index: d0 > 6 is not supported");
    if (s.language().function_count() > 0)
      throw input_error("forest index: language must be function-free");
    if (!cache_) cache_ = std::make_shared<IndexCache>();
    lang_ = s.language();
    init_forest(forest);
    if (max_depth_ > 60) throw cap_error("forest index: depth > 60");
    init_structure(s);
    build();
  }

  const Language& language() const { return lang_; }
  int d0() const { return d0_; }
  int member_count() const { return m_; }
  int max_depth() const { return max_depth_; }
  IndexCounters& counters() { return counters_; }
  const IndexCounters& counters() const { return counters_; }

  // test hook: when set, updates leave parents' child-class bookkeeping stale
  bool debug_skip_list3_update = false;

  bool has_tuple(int rel, const std::vector<int>& tuple) const {
    check_arity(rel, tuple);
    if (lang_.arity(rel) == 0) return nullary_.count(rel) > 0;
    return tuples_[rel].count(to_local_checked(tuple)) > 0;
  }

  void insert_tuple(int rel, const std::vector<int>& tuple) {
    check_arity(rel, tuple);
    counters_.update_vertices = 0;
    if (lang_.arity(rel) == 0) {
      nullary_.insert(rel);
      return;
    }
    std::vector<int> loc = to_local_checked(tuple);
    if (tuples_[rel].count(loc)) return;  // tuple sets: re-adding is a no-op
    tuples_[rel].insert(loc);
    int deepest = deepest_of(loc);
    list1_[deepest].insert({rel, loc});
    propagate(deepest);
  }

  void remove_tuple(int rel, const std::vector<int>& tuple) {
    check_arity(rel, tuple);
    counters_.update_vertices = 0;
    if (lang_.arity(rel) == 0) {
      if (!nullary_.erase(rel)) throw input_error("removing an absent tuple");
      return;
    }
    std::vector<int> loc = to_local_checked(tuple);
    if (!tuples_[rel].erase(loc)) throw input_error("removing an absent tuple");
    int deepest = deepest_of(loc);
    list1_[deepest].erase({rel, loc});
    propagate(deepest);
  }

  // phi must be a function-free Sigma_1 sentence with at most d0 variables.
  QueryResult query(const FormulaPtr& phi) {
    std::vector<std::string> vars;
    FormulaPtr matrix = strip_sigma1(phi, vars);
    std::string sig = query_sig(phi);
    counters_.query_keys = 0;
    for (const auto& [key, cert] : global_) {
      ++counters_.query_keys;
      ++counters_.query_work_total;
      if (!candidate_satisfies(sig, key, phi)) continue;
      std::vector<int> elems;
      decode_elements(virtual_root_, cert, elems);
      std::sort(elems.begin(), elems.end());
      elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
      QueryResult res;
      res.sat = true;
      std::map<std::string, int> env;
      if (!find_assignment(matrix, vars, elems, 0, env))
        throw std::logic_error("sigma1 index: witness decode failed to verify");
      for (const auto& [x, e] : env) res.witness[x] = global_id_[e];
      return res;
    }
    return {};
  }

  // Canonical rendering of every list; equal strings mean equal indexes.
  std::string snapshot() const {
    std::ostringstream os;
    for (int v = 0; v < m_; ++v) {
      os << "vertex " << global_id_[v] << " depth " << depth_[v] << "\n";
      for (const auto& [rel, t] : list1_[v]) {
        os << "  t " << lang_.relation_name(rel);
        for (int e : t) os << " " << global_id_[e];
        os << "\n";
      }
      for (const auto& [key, cert] : list2_[v]) os << "  k " << hex(key) << "\n";
      for (const auto& [key, kids] : derived_list3(v)) {
        os << "  c " << hex(key) << " :";
        for (int c : kids) os << " " << global_id_[c];
        os << "\n";
      }
    }
    os << "nullary";
    for (int r : nullary_) os << " " << lang_.relation_name(r);
    os << "\nglobal\n";
    for (const auto& [key, cert] : global_) os << "  k " << hex(key) << "\n";
    return os.str();
  }

  std::vector<CanonicalKey> global_keys() const {
    std::vector<CanonicalKey> out;
    out.reserve(global_.size());
    for (const auto& [key, cert] : global_) out.push_back(key);
    return out;
  }

  const std::map<CanonicalKey, Cert>& list2(int local_vertex) const {
    return list2_[local_vertex];
  }

private:
  struct ClassEntry {
    std::vector<CanonicalKey> keyset;
    std::set<int> children;
  };

  struct Piece {
    CanonicalKey key;
    int extra = 0;      // unlabelled element count
    uint64_t dom = 0;   // label set
    std::vector<int> class_ids;
  };

  // --- construction --------------------------------------------------------

  void init_forest(const RootedForest& forest) {
    global_id_ = forest.members;
    m_ = static_cast<int>(global_id_.size());
    virtual_root_ = m_;
    local_of_.reserve(m_);
    for (int i = 0; i < m_; ++i) local_of_.emplace_back(global_id_[i], i);
    parent_.resize(m_);
    depth_.resize(m_);
    children_.assign(m_ + 1, {});
    for (int i = 0; i < m_; ++i) {
      int g = global_id_[i];
      if (!forest.contains(g)) throw input_error("forest member list mismatch");
      depth_[i] = forest.depth[g];
      max_depth_ = std::max(max_depth_, depth_[i]);
      parent_[i] = forest.is_root(g) ? virtual_root_ : local(forest.parent[g]);
      children_[parent_[i]].push_back(i);
    }
    for (auto& c : children_) std::sort(c.begin(), c.end());
    postorder_.reserve(m_);
    std::vector<std::pair<int, size_t>> stack;
    for (auto it = children_[virtual_root_].rbegin();
         it != children_[virtual_root_].rend(); ++it)
      stack.emplace_back(*it, 0);
    while (!stack.empty()) {
      auto& [v, next] = stack.back();
      if (next < children_[v].size()) {
        int c = children_[v][next++];
        stack.emplace_back(c, 0);
      } else {
        postorder_.push_back(v);
        stack.pop_back();
      }
    }
  }

  void init_structure(const Structure& s) {
    tuples_.resize(lang_.relation_count());
    list1_.assign(m_ + 1, {});
    list2_.assign(m_ + 1, {});
    classes_.assign(m_ + 1, {});
    child_sig_.assign(m_ + 1, "");
    for (int r = 0; r < lang_.relation_count(); ++r) {
      for (const auto& t : s.tuples(r)) {
        if (lang_.arity(r) == 0) {
          nullary_.insert(r);
          continue;
        }
        std::vector<int> loc = to_local_checked(t);
        tuples_[r].insert(loc);
        list1_[deepest_of(loc)].insert({r, loc});
      }
    }
  }

  void build() {
    for (int v : postorder_) {
      refresh_classes(v);
      list2_[v] = assemble(v);
      child_sig_[v] = keyset_sig(list2_[v]);
      ++counters_.build_vertices;
    }
    refresh_classes(virtual_root_);
    global_ = assemble(virtual_root_);
    ++counters_.global_recomputes;
  }

  void refresh_classes(int v) {
    classes_[v].clear();
    for (int c : children_[v]) {
      auto& entry = classes_[v][child_sig_[c]];
      if (entry.children.empty()) entry.keyset = keys_of(list2_[c]);
      entry.children.insert(c);
    }
  }

  // --- updates --------------------------------------------------------------

  void propagate(int from) {
    int v = from;
    while (v != virtual_root_) {
      auto fresh = assemble(v);
      ++counters_.update_vertices;
      ++counters_.update_vertices_total;
      bool changed = !same_keys(fresh, list2_[v]);
      list2_[v] = std::move(fresh);
      if (!changed) return;  // parents see keys only, nothing to propagate
      if (!debug_skip_list3_update) reclassify_child(parent_[v], v);
      v = parent_[v];
    }
    global_ = assemble(virtual_root_);
    ++counters_.global_recomputes;
  }

  void reclassify_child(int parent, int c) {
    auto it = classes_[parent].find(child_sig_[c]);
    if (it != classes_[parent].end()) {
      it->second.children.erase(c);
      if (it->second.children.empty()) classes_[parent].erase(it);
    }
    child_sig_[c] = keyset_sig(list2_[c]);
    auto& entry = classes_[parent][child_sig_[c]];
    if (entry.children.empty()) entry.keyset = keys_of(list2_[c]);
    entry.children.insert(c);
  }

  // --- assembly --------------------------------------------------------------

  std::map<CanonicalKey, Cert> assemble(int v) {
    int d = (v == virtual_root_) ? 0 : depth_[v];
    std::string sig = assembly_sig(v, d);
    auto hit = cache_->assembly.find(sig);
    if (hit != cache_->assembly.end()) {
      counters_.build_work += hit->second.second;
      return {hit->second.first.begin(), hit->second.first.end()};
    }
    long long work = 0;
    std::map<CanonicalKey, Cert> result;
    run_assembly(v, d, work, result);
    std::vector<std::pair<CanonicalKey, Cert>> flat(result.begin(), result.end());
    cache_->assembly.emplace(std::move(sig), std::make_pair(std::move(flat), work));
    counters_.build_work += work;
    return result;
  }

  // tuples of list1 with elements renamed to their depths; on a root path
  // the element at each depth is unique, so this loses nothing
  std::vector<std::pair<int, std::vector<int>>> depth_tuples(int v) const {
    std::vector<std::pair<int, std::vector<int>>> out;
    if (v == virtual_root_) return out;
    for (const auto& [rel, t] : list1_[v]) {
      std::vector<int> dt(t.size());
      for (size_t i = 0; i < t.size(); ++i) dt[i] = depth_[t[i]];
      out.emplace_back(rel, std::move(dt));
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  std::string assembly_sig(int v, int d) const {
    std::string sig;
    detail::encode_int(sig, d);
    detail::encode_int(sig, d0_);
    auto dts = depth_tuples(v);
    detail::encode_int(sig, static_cast<int>(dts.size()));
    for (const auto& [rel, dt] : dts) {
      detail::encode_int(sig, rel);
      detail::encode_int(sig, static_cast<int>(dt.size()));
      for (int x : dt) detail::encode_int(sig, x);
    }
    detail::encode_int(sig, static_cast<int>(classes_[v].size()));
    for (const auto& [csig, entry] : classes_[v]) {
      detail::encode_int(sig, static_cast<int>(entry.children.size()));
      sig += csig;
      sig.push_back('\1');
    }
    return sig;
  }

  void run_assembly(int v, int d, long long& work,
                    std::map<CanonicalKey, Cert>& out) {
    std::vector<const ClassEntry*> cls;
    for (const auto& [csig, entry] : classes_[v]) cls.push_back(&entry);

    std::map<CanonicalKey, Piece> piece_map;
    for (size_t ci = 0; ci < cls.size(); ++ci) {
      for (const auto& key : cls[ci]->keyset) {
        auto it = piece_map.find(key);
        if (it == piece_map.end()) {
          const LStruct& ls = cache_->intern.at(key);
          Piece p;
          p.key = key;
          p.extra = ls.unlabelled_count();
          for (int l : ls.labels)
            if (l > 0) p.dom |= (1ull << l);
          it = piece_map.emplace(key, std::move(p)).first;
        }
        it->second.class_ids.push_back(static_cast<int>(ci));
      }
    }

    auto dts = depth_tuples(v);
    std::vector<uint64_t> dmasks;
    enumerate_subsets(d >= 1 ? d - 1 : 0, std::min(d0_, std::max(0, d - 1)), dmasks);

    for (uint64_t dmask : dmasks) {
      int base = __builtin_popcountll(dmask);
      for (int vu = 0; vu <= (d >= 1 ? 1 : 0); ++vu) {
        if (base + vu > d0_) continue;
        uint64_t piece_dom = dmask | (vu ? (1ull << d) : 0);
        std::vector<std::pair<int, std::vector<int>>> path_tuples;
        if (vu) {
          uint64_t allowed = piece_dom;
          for (const auto& [rel, dt] : dts) {
            bool ok = true;
            for (int x : dt)
              if (!(allowed >> x & 1)) {
                ok = false;
                break;
              }
            if (ok) path_tuples.emplace_back(rel, dt);
          }
        }
        std::vector<const Piece*> avail;
        for (const auto& [key, p] : piece_map)
          if (p.dom == piece_dom && p.extra >= 1 && p.extra + base + vu <= d0_)
            avail.push_back(&p);
        std::vector<const Piece*> chosen;
        assemble_rec(d, dmask, vu, path_tuples, avail, 0, d0_ - base - vu, chosen,
                     cls, work, out);
      }
    }
  }

  void assemble_rec(int d, uint64_t dmask, int vu,
                    const std::vector<std::pair<int, std::vector<int>>>& path_tuples,
                    const std::vector<const Piece*>& avail, size_t from, int budget,
                    std::vector<const Piece*>& chosen,
                    const std::vector<const ClassEntry*>& cls, long long& work,
                    std::map<CanonicalKey, Cert>& out) {
    ++work;
    if (pieces_matchable(chosen, cls)) {
      LStruct assembled = assemble_structure(d, dmask, vu, path_tuples, chosen);
      CanonicalKey key = canonical_key(assembled);
      if (!out.count(key)) {
        Cert cert;
        cert.dmask = dmask;
        cert.v_used = vu != 0;
        for (const auto* p : chosen) cert.pieces.push_back(p->key);
        cache_->intern.emplace(key, std::move(assembled));
        out.emplace(std::move(key), std::move(cert));
      }
    }
    for (size_t i = from; i < avail.size(); ++i) {
      if (avail[i]->extra > budget) continue;
      chosen.push_back(avail[i]);
      assemble_rec(d, dmask, vu, path_tuples, avail, i, budget - avail[i]->extra,
                   chosen, cls, work, out);
      chosen.pop_back();
    }
  }

  // Distinct children must realize the chosen pieces. Children with equal
  // key sets are interchangeable, so the test runs on classes with capacity
  // min(|class|, m) -- the usual capped-candidate argument.
  bool pieces_matchable(const std::vector<const Piece*>& chosen,
                        const std::vector<const ClassEntry*>& cls) const {
    int m = static_cast<int>(chosen.size());
    if (m == 0) return true;
    // right side: per class, min(count, m) slots
    std::vector<int> slot_class;
    std::vector<int> class_slot_start(cls.size() + 1, 0);
    for (size_t ci = 0; ci < cls.size(); ++ci) {
      int cap = std::min(static_cast<int>(cls[ci]->children.size()), m);
      class_slot_start[ci] = static_cast<int>(slot_class.size());
      for (int k = 0; k < cap; ++k) slot_class.push_back(static_cast<int>(ci));
    }
    class_slot_start[cls.size()] = static_cast<int>(slot_class.size());
    BipartiteMatcher matcher(m, static_cast<int>(slot_class.size()));
    for (int i = 0; i < m; ++i)
      for (int ci : chosen[i]->class_ids) {
        int cap = std::min(static_cast<int>(cls[ci]->children.size()), m);
        for (int k = 0; k < cap; ++k)
          matcher.add_edge(i, class_slot_start[ci] + k);
      }
    return matcher.max_matching() == m;
  }

  LStruct assemble_structure(int d, uint64_t dmask, int vu,
                             const std::vector<std::pair<int, std::vector<int>>>& path_tuples,
                             const std::vector<const Piece*>& chosen) const {
    LStruct s;
    s.rels.resize(lang_.relation_count());
    int depth_elem[64];
    for (int i = 0; i < 64; ++i) depth_elem[i] = -1;
    for (int dep = 1; dep < d; ++dep)
      if (dmask >> dep & 1) {
        depth_elem[dep] = s.m++;
        s.labels.push_back(dep);
      }
    if (vu) {
      depth_elem[d] = s.m++;
      s.labels.push_back(0);  // the vertex itself is unlabelled at this level
    }
    for (const auto& [rel, dt] : path_tuples) {
      std::vector<int> t(dt.size());
      for (size_t i = 0; i < dt.size(); ++i) t[i] = depth_elem[dt[i]];
      s.rels[rel].push_back(std::move(t));
    }
    for (const Piece* p : chosen) {
      const LStruct& ls = cache_->intern.at(p->key);
      std::vector<int> map(ls.m, -1);
      for (int i = 0; i < ls.m; ++i) {
        if (ls.labels[i] > 0) {
          map[i] = depth_elem[ls.labels[i]];
        } else {
          map[i] = s.m++;
          s.labels.push_back(0);
        }
      }
      for (int r = 0; r < static_cast<int>(ls.rels.size()); ++r)
        for (const auto& t : ls.rels[r]) {
          std::vector<int> mt(t.size());
          for (size_t i = 0; i < t.size(); ++i) mt[i] = map[t[i]];
          s.rels[r].push_back(std::move(mt));
        }
    }
    return s;
  }

  // --- witnesses --------------------------------------------------------------

  void decode_elements(int v, const Cert& cert, std::vector<int>& out) const {
    if (v != virtual_root_) {
      // ancestors of v at the occupied depths
      int w = v;
      uint64_t want = cert.dmask;
      if (cert.v_used) out.push_back(v);
      while (w != virtual_root_ && want) {
        if (want >> depth_[w] & 1) {
          out.push_back(w);
          want &= ~(1ull << depth_[w]);
        }
        w = parent_[w];
      }
      if (want) throw std::logic_error("certificate depth set above the root");
    }
    if (cert.pieces.empty()) return;
    int m = static_cast<int>(cert.pieces.size());
    // candidates per piece: children realizing the key, capped at m per the
    // usual argument; matching must succeed for a live certificate
    std::vector<std::vector<int>> cand(m);
    for (int i = 0; i < m; ++i) {
      for (const auto& [csig, entry] : classes_[v]) {
        if (!std::binary_search(entry.keyset.begin(), entry.keyset.end(),
                                cert.pieces[i]))
          continue;
        for (int c : entry.children) {
          cand[i].push_back(c);
          if (static_cast<int>(cand[i].size()) >= m) break;
        }
        if (static_cast<int>(cand[i].size()) >= m) break;
      }
      std::sort(cand[i].begin(), cand[i].end());
    }
    std::vector<int> pool;
    for (const auto& cs : cand) pool.insert(pool.end(), cs.begin(), cs.end());
    std::sort(pool.begin(), pool.end());
    pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
    BipartiteMatcher matcher(m, static_cast<int>(pool.size()));
    for (int i = 0; i < m; ++i)
      for (int c : cand[i]) {
        int slot = static_cast<int>(std::lower_bound(pool.begin(), pool.end(), c) -
                                    pool.begin());
        matcher.add_edge(i, slot);
      }
    if (matcher.max_matching() != m)
      throw std::logic_error("certificate pieces no longer matchable");
    for (int i = 0; i < m; ++i) {
      int child = pool[matcher.match_left()[i]];
      decode_elements(child, list2_[child].at(cert.pieces[i]), out);
    }
  }

  bool candidate_satisfies(const std::string& query_signature,
                           const CanonicalKey& key, const FormulaPtr& phi) {
    std::string memo_key = query_signature;
    memo_key.push_back('\0');
    memo_key += key;
    auto it = cache_->sat.find(memo_key);
    if (it != cache_->sat.end()) return it->second != 0;
    const LStruct& ls = cache_->intern.at(key);
    Structure tiny(lang_, ls.m);
    for (int r = 0; r < static_cast<int>(ls.rels.size()); ++r)
      for (const auto& t : ls.rels[r]) tiny.add_tuple(r, t);
    for (int r : nullary_) tiny.add_tuple(r, {});
    bool sat = eval_oracle(tiny, phi);
    cache_->sat.emplace(std::move(memo_key), sat ? 1 : 0);
    return sat;
  }

  bool find_assignment(const FormulaPtr& matrix, const std::vector<std::string>& vars,
                       const std::vector<int>& elems, size_t at,
                       std::map<std::string, int>& env) {
    if (at == vars.size()) {
      ++counters_.query_work_total;
      return eval_matrix(matrix, env);
    }
    if (env.count(vars[at])) return find_assignment(matrix, vars, elems, at + 1, env);
    for (int e : elems) {
      env[vars[at]] = e;
      if (find_assignment(matrix, vars, elems, at + 1, env)) return true;
    }
    env.erase(vars[at]);
    return false;
  }

  // quantifier-free evaluation against the live tuple sets (local ids)
  bool eval_matrix(const FormulaPtr& f, const std::map<std::string, int>& env) const {
    switch (f->kind) {
      case FormulaKind::Top:
        return true;
      case FormulaKind::Bottom:
        return false;
      case FormulaKind::Atom: {
        if (lang_.arity(f->rel) == 0) return nullary_.count(f->rel) > 0;
        std::vector<int> t(f->terms.size());
        for (size_t i = 0; i < f->terms.size(); ++i) t[i] = env.at(f->terms[i].var);
        return tuples_[f->rel].count(t) > 0;
      }
      case FormulaKind::Eq:
        return env.at(f->terms[0].var) == env.at(f->terms[1].var);
      case FormulaKind::Not:
        return !eval_matrix(f->left, env);
      case FormulaKind::And:
        return eval_matrix(f->left, env) && eval_matrix(f->right, env);
      case FormulaKind::Or:
        return eval_matrix(f->left, env) || eval_matrix(f->right, env);
      default:
        throw input_error("matrix must be quantifier-free");
    }
  }

  FormulaPtr strip_sigma1(const FormulaPtr& phi, std::vector<std::string>& vars) const {
    FormulaPtr f = phi;
    while (f->kind == FormulaKind::Exists) {
      if (std::find(vars.begin(), vars.end(), f->var) == vars.end())
        vars.push_back(f->var);
      f = f->left;
    }
    if (!is_quantifier_free(f))
      throw input_error("query must be a Sigma_1 sentence");
    std::set<Term> terms;
    collect_terms(f, terms);
    for (const auto& t : terms)
      if (!t.fns.empty()) throw input_error("function symbols in a Sigma_1 query");
    if (!free_vars(phi).empty()) throw input_error("query must be a sentence");
    if (static_cast<int>(vars.size()) > d0_)
      throw input_error("query has more than d0 variables");
    return f;
  }

  std::string query_sig(const FormulaPtr& phi) const {
    std::string sig = print_formula(phi, lang_);
    sig += "|";
    for (int r : nullary_) {
      sig += std::to_string(r);
      sig.push_back(',');
    }
    return sig;
  }

  // --- small helpers -----------------------------------------------------------

  int local(int g) const {
    auto it = std::lower_bound(local_of_.begin(), local_of_.end(),
                               std::make_pair(g, -1));
    if (it == local_of_.end() || it->first != g)
      throw guard_error("element " + std::to_string(g) + " is not in the forest");
    return it->second;
  }

  std::vector<int> to_local_checked(const std::vector<int>& t) const {
    std::vector<int> loc(t.size());
    for (size_t i = 0; i < t.size(); ++i) loc[i] = local(t[i]);
    int deepest = deepest_of(loc);
    for (int e : loc)
      if (!is_ancestor(e, deepest))
        throw guard_error("tuple elements do not lie on one root path");
    return loc;
  }

  bool is_ancestor(int a, int b) const {
    while (depth_[b] > depth_[a]) b = parent_[b];
    return a == b;
  }

  int deepest_of(const std::vector<int>& loc) const {
    int deepest = loc[0];
    for (int e : loc)
      if (depth_[e] > depth_[deepest]) deepest = e;
    return deepest;
  }

  void check_arity(int rel, const std::vector<int>& t) const {
    if (rel < 0 || rel >= lang_.relation_count())
      throw input_error("unknown relation id");
    if (static_cast<int>(t.size()) != lang_.arity(rel))
      throw input_error("tuple arity mismatch");
  }

  static std::vector<CanonicalKey> keys_of(const std::map<CanonicalKey, Cert>& m) {
    std::vector<CanonicalKey> out;
    out.reserve(m.size());
    for (const auto& [k, c] : m) out.push_back(k);
    return out;
  }

  static std::string keyset_sig(const std::map<CanonicalKey, Cert>& m) {
    std::string sig;
    for (const auto& [k, c] : m) {
      sig += k;
      sig.push_back('\0');
    }
    return sig;
  }

  static bool same_keys(const std::map<CanonicalKey, Cert>& a,
                        const std::map<CanonicalKey, Cert>& b) {
    if (a.size() != b.size()) return false;
    auto it = b.begin();
    for (const auto& [k, c] : a) {
      if (it->first != k) return false;
      ++it;
    }
    return true;
  }

  // subsets of {1..universe} of size <= maxsize, sizes ascending then lex
  static void enumerate_subsets(int universe, int maxsize, std::vector<uint64_t>& out) {
    out.push_back(0);
    std::vector<int> pick;
    for (int size = 1; size <= maxsize && size <= universe; ++size) {
      pick.resize(size);
      for (int i = 0; i < size; ++i) pick[i] = i + 1;
      while (true) {
        uint64_t m = 0;
        for (int x : pick) m |= (1ull << x);
        out.push_back(m);
        int i = size - 1;
        while (i >= 0 && pick[i] == universe - (size - 1 - i)) --i;
        if (i < 0) break;
        ++pick[i];
        for (int j = i + 1; j < size; ++j) pick[j] = pick[j - 1] + 1;
      }
    }
  }

  static std::string hex(const std::string& s) {
    static const char* digits = "0123456789abcdef";
    std::string out;
    out.reserve(s.size() * 2);
    for (unsigned char c : s) {
      out.push_back(digits[c >> 4]);
      out.push_back(digits[c & 15]);
    }
    return out;
  }

  std::map<CanonicalKey, std::vector<int>> derived_list3(int v) const {
    std::map<CanonicalKey, std::vector<int>> out;
    for (const auto& [csig, entry] : classes_[v])
      for (const auto& key : entry.keyset)
        for (int c : entry.children) out[key].push_back(c);
    for (auto& [k, kids] : out) std::sort(kids.begin(), kids.end());
    return out;
  }

  int d0_;
  std::shared_ptr<IndexCache> cache_;
  Language lang_;

  int m_ = 0;
  int virtual_root_ = 0;
  int max_depth_ = 0;
  std::vector<int> global_id_;                 // ascending
  std::vector<std::pair<int, int>> local_of_;  // sorted (global, local)
  std::vector<int> parent_, depth_;
  std::vector<std::vector<int>> children_;
  std::vector<int> postorder_;

  std::vector<std::set<std::vector<int>>> tuples_;
  std::set<int> nullary_;
  std::vector<std::set<std::pair<int, std::vector<int>>>> list1_;
  std::vector<std::map<CanonicalKey, Cert>> list2_;
  std::vector<std::map<std::string, ClassEntry>> classes_;
  std::vector<std::string> child_sig_;
  std::map<CanonicalKey, Cert> global_;

  IndexCounters counters_;
};

}  // namespace sparsefo
