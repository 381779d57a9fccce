#pragma once

#include <cstddef>
#include <numeric>
#include <utility>
#include <vector>

namespace ctree {

/// Disjoint-set forest with path halving and union by size.
///
/// The representative returned by find() is an internal root, not a stable
/// label. Callers that need the "minimum member index" convention track it
/// through label().
class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n), size_(n, 1), label_(n) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
    std::iota(label_.begin(), label_.end(), std::size_t{0});
  }

  std::size_t size() const { return parent_.size(); }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  bool same(std::size_t a, std::size_t b) { return find(a) == find(b); }

  /// Smallest element index in the set containing x.
  std::size_t label(std::size_t x) { return label_[find(x)]; }

  /// Returns false when a and b were already joined.
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    if (label_[b] < label_[a]) label_[a] = label_[b];
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> size_;
  std::vector<std::size_t> label_;
};

}  // namespace ctree
