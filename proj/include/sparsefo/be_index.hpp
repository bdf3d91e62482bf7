// Sigma_1 index for structures guarded by an arbitrary sparse graph: a low
// tree-depth coloring of order d0 splits the structure into one induced
// substructure per d0-subset of colors, each guarded by the closure of a
// depth-certifying forest and indexed by a ForestIndex. A sentence holds iff
// it holds in one of the pieces; an update touches exactly the subsets
// containing the colors of the tuple.
#pragma once

#include "sparsefo/forest_index.hpp"

namespace sparsefo {

struct BEIndexOptions {
  AugmentOptions augment;
  long long max_subsets = 2'000'000;  // cap on |X| = C(K, d0)
  // When positive, overrides the 3(d0+1)^2 augmentation round count. Only
  // benchmarks use this; the default follows the low tree-depth recipe.
  int k_override = -1;
};

class BEIndex {
public:
  BEIndex(const Graph& guard, const Structure& s, int d0,
          const BEIndexOptions& opt = {})
      : guard_(guard), d0_(d0) {
    if (s.language().function_count() > 0)
      throw input_error("be index: language must be function-free");
    if (s.n() != guard.n())
      throw input_error("be index: guard and structure sizes differ");
    if (!is_guarded(s, guard_)) throw guard_error("structure is not guarded");
    lang_ = s.language();
    cache_ = std::make_shared<IndexCache>();

    int k = opt.k_override >= 0 ? opt.k_override : 3 * (d0 + 1) * (d0 + 1);
    chain_ = kth_augmentation(guard_, k, opt.augment);
    coloring_ = greedy_color(chain_.augmented, degeneracy_order(chain_.augmented));
    colors_used_ = std::max(coloring_.count, d0);  // pad with virtual colors

    // all d0-subsets of colors
    long long subsets = 1;
    for (int i = 0; i < d0_; ++i) {
      subsets = subsets * (colors_used_ - i) / (i + 1);
      if (subsets > opt.max_subsets)
        throw cap_error("be index: C(" + std::to_string(colors_used_) + "," +
                        std::to_string(d0_) + ") color subsets exceed the cap");
    }

    std::vector<int> pick(d0_);
    for (int i = 0; i < d0_; ++i) pick[i] = i + 1;
    while (true) {
      add_subset(pick, s);
      int i = d0_ - 1;
      while (i >= 0 && pick[i] == colors_used_ - (d0_ - 1 - i)) --i;
      if (i < 0) break;
      ++pick[i];
      for (int j = i + 1; j < d0_; ++j) pick[j] = pick[j - 1] + 1;
    }
    for (int r = 0; r < lang_.relation_count(); ++r)
      if (lang_.arity(r) == 0 && !s.tuples(r).empty()) nullary_.insert(r);
  }

  int d0() const { return d0_; }
  int color_count() const { return colors_used_; }
  int subset_count() const { return static_cast<int>(forests_.size()); }
  const Coloring& coloring() const { return coloring_; }
  const AugmentationChain& chain() const { return chain_; }
  const std::shared_ptr<IndexCache>& cache() const { return cache_; }

  struct UpdateStats {
    int forests_touched = 0;
    long long vertices_recomputed = 0;
  };

  UpdateStats insert_tuple(int rel, const std::vector<int>& tuple) {
    return update(rel, tuple, true);
  }

  UpdateStats remove_tuple(int rel, const std::vector<int>& tuple) {
    return update(rel, tuple, false);
  }

  struct BEQueryResult {
    bool sat = false;
    Bindings witness;
    long long keys_inspected = 0;
  };

  BEQueryResult query(const FormulaPtr& phi) {
    BEQueryResult out;
    for (auto& fi : forests_) {
      QueryResult r = fi->query(phi);
      out.keys_inspected += fi->counters().query_keys;
      if (r.sat) {
        out.sat = true;
        out.witness = std::move(r.witness);
        return out;
      }
    }
    return out;
  }

  long long build_work() const {
    long long w = 0;
    for (const auto& fi : forests_) w += fi->counters().build_work;
    return w;
  }

  std::string snapshot() const {
    std::ostringstream os;
    for (size_t i = 0; i < forests_.size(); ++i) {
      os << "subset";
      for (int c : subsets_[i]) os << " " << c;
      os << "\n" << forests_[i]->snapshot();
    }
    return os.str();
  }

  ForestIndex& forest(int i) { return *forests_[i]; }
  const std::vector<int>& subset(int i) const { return subsets_[i]; }

private:
  void add_subset(const std::vector<int>& colors, const Structure& s) {
    std::vector<int> members;
    for (int v = 0; v < guard_.n(); ++v)
      if (std::find(colors.begin(), colors.end(), coloring_.color[v]) != colors.end())
        members.push_back(v);
    RootedForest f = depth_certifying_forest(guard_, members);
    Structure sx(lang_, s.n());
    for (int r = 0; r < lang_.relation_count(); ++r) {
      if (lang_.arity(r) == 0) continue;  // nullary facts are kept globally
      for (const auto& t : s.tuples(r)) {
        bool inside = true;
        for (int e : t)
          if (std::find(colors.begin(), colors.end(), coloring_.color[e]) ==
              colors.end()) {
            inside = false;
            break;
          }
        if (inside) sx.add_tuple(r, t);
      }
    }
    subsets_.push_back(colors);
    forests_.push_back(std::make_unique<ForestIndex>(f, sx, d0_, cache_));
  }

  UpdateStats update(int rel, const std::vector<int>& tuple, bool insert) {
    UpdateStats stats;
    if (lang_.arity(rel) == 0) {
      // a nullary fact belongs to every piece
      for (auto& fi : forests_) {
        if (insert)
          fi->insert_tuple(rel, tuple);
        else
          fi->remove_tuple(rel, tuple);
      }
      if (insert)
        nullary_.insert(rel);
      else if (!nullary_.erase(rel))
        throw input_error("removing an absent tuple");
      return stats;
    }
    // guardedness first: elements must be pairwise adjacent or equal
    for (size_t i = 0; i < tuple.size(); ++i) {
      if (tuple[i] < 0 || tuple[i] >= guard_.n())
        throw guard_error("tuple element out of universe");
      for (size_t j = i + 1; j < tuple.size(); ++j)
        if (tuple[i] != tuple[j] && !guard_.has_edge(tuple[i], tuple[j]))
          throw guard_error("tuple is not guarded by the graph");
    }
    std::set<int> colors;
    for (int e : tuple) colors.insert(coloring_.color[e]);
    for (size_t i = 0; i < forests_.size(); ++i) {
      bool contains = true;
      for (int c : colors)
        if (std::find(subsets_[i].begin(), subsets_[i].end(), c) ==
            subsets_[i].end()) {
          contains = false;
          break;
        }
      if (!contains) continue;
      ++stats.forests_touched;
      if (insert)
        forests_[i]->insert_tuple(rel, tuple);
      else
        forests_[i]->remove_tuple(rel, tuple);
      stats.vertices_recomputed += forests_[i]->counters().update_vertices;
    }
    return stats;
  }

  Graph guard_;
  int d0_;
  Language lang_;
  std::shared_ptr<IndexCache> cache_;
  AugmentationChain chain_;
  Coloring coloring_;
  int colors_used_ = 0;
  std::vector<std::vector<int>> subsets_;
  std::vector<std::unique_ptr<ForestIndex>> forests_;
  std::set<int> nullary_;
};

}  // namespace sparsefo
