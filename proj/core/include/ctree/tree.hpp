#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "ctree/union_find.hpp"

namespace ctree {

/// Vertex i enters the filtration.
struct Birth {
  std::size_t point = 0;
  friend bool operator==(const Birth&, const Birth&) = default;
};

/// Components labelled `a` and `b` (a < b) join; the result keeps label `a`.
/// A component's label is the smallest point index it contains.
struct Merge {
  std::size_t a = 0;
  std::size_t b = 0;
  friend bool operator==(const Merge&, const Merge&) = default;
};

struct Event {
  double radius = 0.0;
  std::variant<Birth, Merge> what;

  bool is_birth() const { return std::holds_alternative<Birth>(what); }
  friend bool operator==(const Event&, const Event&) = default;
};

/// A partition of a subset of {0..n-1}. Blocks are sorted ascending and
/// ordered by their smallest member.
using Subpartition = std::vector<std::vector<std::size_t>>;

/// Identifies one cluster of the tree: the component labelled `id` once
/// every event at `radius` has been applied.
struct ClusterRef {
  std::size_t id = 0;
  double radius = 0.0;
  friend bool operator==(const ClusterRef&, const ClusterRef&) = default;
};

/// Where a tree came from. Optional fields are only set when the producer
/// knew them.
struct Provenance {
  std::optional<double> c_delta;
  std::optional<double> delta;
  std::optional<double> eps_tilde;
  std::optional<std::uint64_t> seed;
  friend bool operator==(const Provenance&, const Provenance&) = default;
};

struct TreeMeta {
  std::size_t d = 0;
  std::size_t k = 0;
  double alpha = 1.0;
  std::string rule;  // "rsl", "knn", "mknn", "single-linkage", ...
  Provenance provenance;
  friend bool operator==(const TreeMeta&, const TreeMeta&) = default;
};

/// Merge filtration over n sample points: births and merges sorted by radius.
/// Within one radius all births come first (ascending point index), then the
/// merges of that level in canonical order (see TreeBuilder).
///
/// Immutable once constructed; queries replay the event list.
class ClusterTree {
 public:
  ClusterTree() = default;

  /// Validates ordering and component bookkeeping; throws DataError.
  ClusterTree(std::size_t n, std::vector<Event> events, TreeMeta meta = {});

  std::size_t size() const { return n_; }
  const std::vector<Event>& events() const { return events_; }
  const TreeMeta& meta() const { return meta_; }

  /// Partition of the vertices born at radius <= r induced by all merges at
  /// radius <= r. Throws ParameterError for negative or NaN r.
  Subpartition components_at(double r) const;

  /// Component label of every point at level r; nullopt for unborn points.
  std::vector<std::optional<std::size_t>> labels_at(double r) const;

  /// The lowest cluster holding every index in s, or nullopt when the
  /// indices never share a component (possible for k-NN forests).
  std::optional<ClusterRef> smallest_cluster_containing(std::span<const std::size_t> s) const;

  /// Whether the smallest clusters containing s1 and s2 are disjoint as
  /// point sets. Returns false when either cluster does not exist.
  /// Throws ParameterError when s1 and s2 overlap or either is empty.
  bool disjoint_at(std::span<const std::size_t> s1, std::span<const std::size_t> s2) const;

  /// Distinct event radii in increasing order.
  std::vector<double> event_radii() const;

  std::size_t birth_count() const;
  std::size_t merge_count() const;

  friend bool operator==(const ClusterTree&, const ClusterTree&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<Event> events_;
  TreeMeta meta_;
};

/// Assembles a ClusterTree from births and links fed in nondecreasing radius.
///
/// Links are buffered per radius. When a level closes, births are emitted in
/// ascending index order, then every group of pre-level components that the
/// level's links join is emitted as merges (min, other) for each other member
/// in ascending order, groups ordered by their minimum. Any two link sets that
/// induce the same partitions therefore produce identical events.
class TreeBuilder {
 public:
  explicit TreeBuilder(std::size_t n);

  void birth(double radius, std::size_t point);
  /// Both endpoints must be born by the end of this radius level.
  void link(double radius, std::size_t a, std::size_t b);

  ClusterTree finish(TreeMeta meta = {});

 private:
  void advance(double radius);
  void flush();

  std::size_t n_;
  std::vector<Event> events_;
  std::vector<bool> born_;
  UnionFind components_;
  std::optional<double> level_;
  std::vector<std::size_t> level_births_;
  std::vector<std::pair<std::size_t, std::size_t>> level_links_;
};

}  // namespace ctree
