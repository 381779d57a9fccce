#include "ctree/pruning.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "ctree/error.hpp"
#include "ctree/geometry.hpp"
#include "ctree/union_find.hpp"

namespace ctree {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double root_d(double x, std::size_t d) {
  return d == 1 ? x : std::pow(x, 1.0 / static_cast<double>(d));
}

// Smallest radius whose lookup reaches at least `target`, refined in ulps so
// that lookup_radius itself agrees. Returns nullopt when no positive radius
// qualifies.
std::optional<double> preimage(double target, const ScaleParams& p, const PruneOptions& options) {
  const double lower = lower_mass_threshold(p);
  if (lower <= 0.0) return std::nullopt;  // every positive radius looks up the root
  const double v = unit_ball_volume(static_cast<int>(p.d));
  const double upper = upper_mass_threshold(p);
  const double td = std::pow(target, static_cast<double>(p.d));
  double r = root_d(lower / (upper / td + v * p.eps_tilde), p.d);
  if (!(r > 0.0) || !std::isfinite(r)) return std::nullopt;
  for (int i = 0; i < 64 && lookup_radius(r, p, options) < target; ++i) r = std::nextafter(r, kInf);
  for (int i = 0; i < 64; ++i) {
    const double below = std::nextafter(r, 0.0);
    if (below <= 0.0 || lookup_radius(below, p, options) < target) break;
    r = below;
  }
  return r;
}

double clamp_radius_of(const ScaleParams& p) {
  const double lower = lower_mass_threshold(p);
  if (lower <= 0.0) return 0.0;
  if (p.eps_tilde == 0.0) return kInf;
  double r = root_d(lower / (unit_ball_volume(static_cast<int>(p.d)) * p.eps_tilde), p.d);
  for (int i = 0; i < 64 && lambda_tilde(r, p) > 0.0; ++i) r = std::nextafter(r, kInf);
  for (int i = 0; i < 64; ++i) {
    const double below = std::nextafter(r, 0.0);
    if (below <= 0.0 || lambda_tilde(below, p) > 0.0) break;
    r = below;
  }
  return r;
}

}  // namespace

double lookup_radius(double r, const ScaleParams& p, const PruneOptions& options) {
  if (std::isnan(r) || r < 0.0) throw ParameterError("level must be a nonnegative radius");
  if (r == 0.0) return 0.0;
  if (std::isinf(r)) return kInf;
  if (options.prune_low_levels && r > low_level_cutoff(p)) return kInf;
  // Without slack the two thresholds coincide and the lookup is r itself;
  // going through the inversion would round up by an ulp.
  if (p.c_delta == 0.0 && p.eps_tilde == 0.0) return r;
  const double lt = lambda_tilde(r, p);
  if (!(lt > 0.0)) return kInf;
  return std::max(r, r_of_lambda(lt, p));
}

PrunedTree prune(const ClusterTree& tree, const ScaleParams& p, const PruneOptions& options) {
  p.validate();
  const auto& meta = tree.meta();
  if (tree.size() != p.n)
    throw ParameterError("tree has n = " + std::to_string(tree.size()) + " but parameters say n = " +
                         std::to_string(p.n));
  if (meta.k != 0 && meta.k != p.k)
    throw ParameterError("tree was built with k = " + std::to_string(meta.k) +
                         " but parameters say k = " + std::to_string(p.k));
  if (meta.d != 0 && meta.d != p.d)
    throw ParameterError("tree has dimension " + std::to_string(meta.d) +
                         " but parameters say d = " + std::to_string(p.d));

  PrunedTree out;
  out.base = tree;
  out.params = p;
  out.options = options;
  out.clamp_radius = clamp_radius_of(p);
  out.low_cutoff = options.prune_low_levels ? low_level_cutoff(p) : kInf;

  const auto& events = tree.events();
  const auto base_radii = tree.event_radii();

  std::vector<double> levels = base_radii;
  for (double e : base_radii) {
    if (e <= 0.0) continue;
    if (auto r = preimage(e, p, options)) levels.push_back(*r);
  }
  if (out.clamp_radius > 0.0 && std::isfinite(out.clamp_radius)) levels.push_back(out.clamp_radius);
  if (std::isfinite(out.low_cutoff)) levels.push_back(std::nextafter(out.low_cutoff, kInf));
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

  const std::size_t n = tree.size();
  UnionFind lookup(n);
  // For each lookup root: some vertex of that set already born in the
  // pruned filtration, if any.
  std::vector<std::optional<std::size_t>> born_rep(n);
  TreeBuilder builder(n);

  std::size_t look_pos = 0;   // next base event to apply to `lookup`
  std::size_t birth_pos = 0;  // next base event to scan for births
  for (double r : levels) {
    const double look = lookup_radius(r, p, options);
    for (; look_pos < events.size() && events[look_pos].radius <= look; ++look_pos) {
      const auto* m = std::get_if<Merge>(&events[look_pos].what);
      if (!m) continue;
      const std::size_t ra = lookup.find(m->a);
      const std::size_t rb = lookup.find(m->b);
      if (ra == rb) continue;
      const auto rep_a = born_rep[ra];
      const auto rep_b = born_rep[rb];
      if (rep_a && rep_b) builder.link(r, *rep_a, *rep_b);
      lookup.unite(ra, rb);
      born_rep[lookup.find(ra)] = rep_a ? rep_a : rep_b;
    }
    for (; birth_pos < events.size() && events[birth_pos].radius <= r; ++birth_pos) {
      const auto* b = std::get_if<Birth>(&events[birth_pos].what);
      if (!b) continue;
      builder.birth(r, b->point);
      const std::size_t root = lookup.find(b->point);
      if (born_rep[root]) {
        builder.link(r, *born_rep[root], b->point);
      } else {
        born_rep[root] = b->point;
      }
    }
  }

  TreeMeta pruned_meta = meta;
  pruned_meta.provenance.c_delta = p.c_delta;
  pruned_meta.provenance.delta = p.delta;
  pruned_meta.provenance.eps_tilde = p.eps_tilde;
  out.pruned = builder.finish(std::move(pruned_meta));
  return out;
}

Subpartition pruned_components_at(const PrunedTree& pt, double r) {
  return pt.pruned.components_at(r);
}

}  // namespace ctree
