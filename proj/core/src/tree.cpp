#include "ctree/tree.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "ctree/error.hpp"

namespace ctree {

namespace {

void check_level(double r) {
  if (std::isnan(r) || r < 0.0) throw ParameterError("level must be a nonnegative radius");
}

// Replays events with radius <= r into (born, components).
struct Replay {
  std::vector<bool> born;
  UnionFind components;

  explicit Replay(std::size_t n) : born(n, false), components(n) {}

  void apply(const Event& e) {
    if (const auto* b = std::get_if<Birth>(&e.what)) {
      born[b->point] = true;
    } else {
      const auto& m = std::get<Merge>(e.what);
      components.unite(m.a, m.b);
    }
  }
};

void check_indices(std::span<const std::size_t> s, std::size_t n) {
  if (s.empty()) throw ParameterError("index set must be nonempty");
  for (std::size_t i : s) {
    if (i >= n)
      throw ParameterError("index " + std::to_string(i) + " out of range for " +
                           std::to_string(n) + " points");
  }
}

}  // namespace

ClusterTree::ClusterTree(std::size_t n, std::vector<Event> events, TreeMeta meta)
    : n_(n), events_(std::move(events)), meta_(std::move(meta)) {
  Replay state(n_);
  double level = -1.0;
  bool merges_started = false;
  std::size_t last_birth = 0;
  bool level_has_birth = false;
  for (std::size_t idx = 0; idx < events_.size(); ++idx) {
    const Event& e = events_[idx];
    const std::string where = "event " + std::to_string(idx) + ": ";
    if (!std::isfinite(e.radius) || e.radius < 0.0)
      throw DataError(where + "radius must be finite and nonnegative");
    if (e.radius < level) throw DataError(where + "radii must be nondecreasing");
    if (e.radius > level) {
      level = e.radius;
      merges_started = false;
      level_has_birth = false;
    }
    if (const auto* b = std::get_if<Birth>(&e.what)) {
      if (merges_started) throw DataError(where + "birth after a merge at the same radius");
      if (b->point >= n_) throw DataError(where + "birth index out of range");
      if (state.born[b->point]) throw DataError(where + "point born twice");
      if (level_has_birth && b->point < last_birth)
        throw DataError(where + "births at one radius must be in ascending index order");
      level_has_birth = true;
      last_birth = b->point;
    } else {
      const auto& m = std::get<Merge>(e.what);
      merges_started = true;
      if (m.a >= n_ || m.b >= n_) throw DataError(where + "merge label out of range");
      if (m.a >= m.b) throw DataError(where + "merge labels must satisfy a < b");
      if (!state.born[m.a] || !state.born[m.b])
        throw DataError(where + "merge references an unborn vertex");
      if (state.components.label(m.a) != m.a || state.components.label(m.b) != m.b)
        throw DataError(where + "merge label is not a live component");
      if (state.components.same(m.a, m.b)) throw DataError(where + "merge of a component with itself");
    }
    state.apply(e);
  }
}

Subpartition ClusterTree::components_at(double r) const {
  Subpartition out;
  const auto labels = labels_at(r);
  std::map<std::size_t, std::size_t> block_of;
  for (std::size_t i = 0; i < n_; ++i) {
    if (!labels[i]) continue;
    auto [it, inserted] = block_of.try_emplace(*labels[i], out.size());
    if (inserted) out.emplace_back();
    out[it->second].push_back(i);
  }
  return out;
}

std::vector<std::optional<std::size_t>> ClusterTree::labels_at(double r) const {
  check_level(r);
  Replay state(n_);
  for (const Event& e : events_) {
    if (e.radius > r) break;
    state.apply(e);
  }
  std::vector<std::optional<std::size_t>> labels(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    if (state.born[i]) labels[i] = state.components.label(i);
  }
  return labels;
}

std::optional<ClusterRef> ClusterTree::smallest_cluster_containing(
    std::span<const std::size_t> s) const {
  check_indices(s, n_);
  Replay state(n_);
  std::size_t idx = 0;
  while (idx < events_.size()) {
    const double level = events_[idx].radius;
    while (idx < events_.size() && events_[idx].radius == level) state.apply(events_[idx++]);
    const bool together = std::all_of(s.begin(), s.end(), [&](std::size_t i) {
      return state.born[i] && state.components.same(i, s.front());
    });
    if (together) return ClusterRef{state.components.label(s.front()), level};
  }
  return std::nullopt;
}

bool ClusterTree::disjoint_at(std::span<const std::size_t> s1,
                              std::span<const std::size_t> s2) const {
  check_indices(s1, n_);
  check_indices(s2, n_);
  for (std::size_t i : s1) {
    if (std::find(s2.begin(), s2.end(), i) != s2.end())
      throw ParameterError("index sets overlap; disjointness query is ill-posed");
  }
  const auto c1 = smallest_cluster_containing(s1);
  const auto c2 = smallest_cluster_containing(s2);
  if (!c1 || !c2) return false;
  // Clusters of a hierarchy are nested or disjoint; compare at the higher level.
  const auto labels = labels_at(std::max(c1->radius, c2->radius));
  return labels[s1.front()] != labels[s2.front()];
}

std::vector<double> ClusterTree::event_radii() const {
  std::vector<double> radii;
  for (const Event& e : events_) {
    if (radii.empty() || radii.back() != e.radius) radii.push_back(e.radius);
  }
  return radii;
}

std::size_t ClusterTree::birth_count() const {
  return static_cast<std::size_t>(
      std::count_if(events_.begin(), events_.end(), [](const Event& e) { return e.is_birth(); }));
}

std::size_t ClusterTree::merge_count() const { return events_.size() - birth_count(); }

TreeBuilder::TreeBuilder(std::size_t n) : n_(n), born_(n, false), components_(n) {}

void TreeBuilder::advance(double radius) {
  if (!std::isfinite(radius) || radius < 0.0)
    throw ParameterError("event radius must be finite and nonnegative");
  if (level_ && radius < *level_) throw ParameterError("events must arrive in nondecreasing radius");
  if (level_ && radius > *level_) flush();
  level_ = radius;
}

void TreeBuilder::birth(double radius, std::size_t point) {
  if (point >= n_) throw ParameterError("birth index out of range");
  advance(radius);
  level_births_.push_back(point);
}

void TreeBuilder::link(double radius, std::size_t a, std::size_t b) {
  if (a >= n_ || b >= n_) throw ParameterError("link index out of range");
  advance(radius);
  if (a != b) level_links_.emplace_back(a, b);
}

void TreeBuilder::flush() {
  if (!level_) return;
  const double r = *level_;

  std::sort(level_births_.begin(), level_births_.end());
  for (std::size_t p : level_births_) {
    if (born_[p]) throw ParameterError("point " + std::to_string(p) + " born twice");
    born_[p] = true;
    events_.push_back({r, Birth{p}});
  }

  // Group the pre-level components touched by this level's links.
  std::map<std::size_t, std::size_t> slot;  // pre-level label -> local index
  std::vector<std::size_t> slot_label;
  std::vector<std::pair<std::size_t, std::size_t>> joins;
  for (auto [a, b] : level_links_) {
    if (!born_[a] || !born_[b]) throw ParameterError("link endpoint not born by its radius");
    const std::size_t la = components_.label(a);
    const std::size_t lb = components_.label(b);
    if (la == lb) continue;
    for (std::size_t l : {la, lb}) {
      if (slot.try_emplace(l, slot_label.size()).second) slot_label.push_back(l);
    }
    joins.emplace_back(slot[la], slot[lb]);
  }
  UnionFind local(slot_label.size());
  for (auto [a, b] : joins) local.unite(a, b);

  std::map<std::size_t, std::vector<std::size_t>> by_root;
  for (std::size_t s = 0; s < slot_label.size(); ++s) by_root[local.find(s)].push_back(slot_label[s]);
  std::map<std::size_t, std::vector<std::size_t>> groups;  // keyed by smallest label
  for (auto& [unused, members] : by_root) {
    std::sort(members.begin(), members.end());
    groups[members.front()] = std::move(members);
  }
  for (const auto& [root, members] : groups) {
    for (std::size_t j = 1; j < members.size(); ++j) {
      events_.push_back({r, Merge{root, members[j]}});
      components_.unite(root, members[j]);
    }
  }

  level_births_.clear();
  level_links_.clear();
}

ClusterTree TreeBuilder::finish(TreeMeta meta) {
  flush();
  level_.reset();
  return ClusterTree(n_, std::move(events_), std::move(meta));
}

}  // namespace ctree
