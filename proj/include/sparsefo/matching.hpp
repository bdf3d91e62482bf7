// Maximum bipartite matching by augmenting paths, for the tiny graphs that
// arise when assigning labelled substructure pieces to forest children.
#pragma once

#include <vector>

namespace sparsefo {

class BipartiteMatcher {
public:
  // left vertices 0..nl-1, right vertices 0..nr-1
  BipartiteMatcher(int nl, int nr) : adj_(nl), nr_(nr) {}

  void add_edge(int l, int r) { adj_[l].push_back(r); }

  // match_left()[l] = matched right vertex or -1
  int max_matching() {
    match_left_.assign(adj_.size(), -1);
    match_right_.assign(nr_, -1);
    int size = 0;
    for (size_t l = 0; l < adj_.size(); ++l) {
      visited_.assign(nr_, 0);
      if (try_augment(static_cast<int>(l))) ++size;
    }
    return size;
  }

  const std::vector<int>& match_left() const { return match_left_; }

private:
  bool try_augment(int l) {
    for (int r : adj_[l]) {
      if (visited_[r]) continue;
      visited_[r] = 1;
      if (match_right_[r] < 0 || try_augment(match_right_[r])) {
        match_left_[l] = r;
        match_right_[r] = l;
        return true;
      }
    }
    return false;
  }

  std::vector<std::vector<int>> adj_;
  int nr_;
  std::vector<int> match_left_, match_right_;
  std::vector<char> visited_;
};

}  // namespace sparsefo
