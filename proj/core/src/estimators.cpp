#include "ctree/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <limits>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "ctree/error.hpp"
#include "ctree/union_find.hpp"

namespace ctree {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Smallest double c with d <= alpha * c under the machine's rounding, so the
// sweep and the literal predicate in edge_present agree bit for bit.
double min_scaled_radius(double d, double alpha) {
  if (d == 0.0) return 0.0;
  double c = d / alpha;
  while (alpha * c < d) c = std::nextafter(c, kInf);
  while (c > 0.0) {
    const double lower = std::nextafter(c, 0.0);
    if (alpha * lower < d) break;
    c = lower;
  }
  return c;
}

void check_rule(const EdgeRule& rule) {
  if (!(rule.alpha > 0.0) || !std::isfinite(rule.alpha))
    throw ParameterError("alpha must be a positive finite number");
}

}  // namespace

std::string_view to_string(Variant v) {
  switch (v) {
    case Variant::RobustSingleLinkage: return "rsl";
    case Variant::Knn: return "knn";
    case Variant::MutualKnn: return "mknn";
  }
  return "unknown";
}

Variant parse_variant(std::string_view name) {
  if (name == "rsl") return Variant::RobustSingleLinkage;
  if (name == "knn") return Variant::Knn;
  if (name == "mknn") return Variant::MutualKnn;
  throw ParameterError("unknown rule '" + std::string(name) + "' (expected rsl, knn or mknn)");
}

double edge_activation(const EdgeRule& rule, double dij, double rki, double rkj) {
  check_rule(rule);
  if (!(dij >= 0.0) || !(rki >= 0.0) || !(rkj >= 0.0))
    throw ParameterError("edge activation inputs must be nonnegative");
  const double both_active = std::max(rki, rkj);
  switch (rule.variant) {
    case Variant::RobustSingleLinkage:
      return std::max(both_active, min_scaled_radius(dij, rule.alpha));
    case Variant::Knn:
      return dij <= rule.alpha * std::max(rki, rkj) ? both_active : kInf;
    case Variant::MutualKnn:
      return dij <= rule.alpha * std::min(rki, rkj) ? both_active : kInf;
  }
  return kInf;
}

bool edge_present(const EdgeRule& rule, double dij, double rki, double rkj, double r) {
  switch (rule.variant) {
    case Variant::RobustSingleLinkage: return dij <= rule.alpha * r;
    case Variant::Knn: return dij <= rule.alpha * std::max(rki, rkj);
    case Variant::MutualKnn: return dij <= rule.alpha * std::min(rki, rkj);
  }
  return false;
}

ClusterTree build_tree(const PointSet& points, std::size_t k, const EdgeRule& rule) {
  return build_tree(points, knn_radii(points, k), rule);
}

namespace {

using WeightedEdge = std::tuple<double, std::size_t, std::size_t>;

// activation() without argument checks, for the inner loops.
double activation_unchecked(const EdgeRule& rule, double dij, double rki, double rkj) {
  const double both_active = std::max(rki, rkj);
  switch (rule.variant) {
    case Variant::RobustSingleLinkage:
      // d / alpha is within an ulp of the exact infimum.
      if (both_active > dij / rule.alpha * (1.0 + 1e-12)) return both_active;
      return std::max(both_active, min_scaled_radius(dij, rule.alpha));
    case Variant::Knn:
      return dij <= rule.alpha * std::max(rki, rkj) ? both_active : kInf;
    case Variant::MutualKnn:
      return dij <= rule.alpha * std::min(rki, rkj) ? both_active : kInf;
  }
  return kInf;
}

std::vector<std::size_t> birth_order(const std::vector<double>& rk) {
  std::vector<std::size_t> order(rk.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::tie(rk[a], a) < std::tie(rk[b], b);
  });
  return order;
}

std::vector<WeightedEdge> kruskal(std::vector<WeightedEdge> edges, std::size_t n) {
  std::sort(edges.begin(), edges.end());
  std::vector<WeightedEdge> forest;
  UnionFind uf(n);
  for (const auto& e : edges) {
    if (uf.unite(std::get<1>(e), std::get<2>(e))) forest.push_back(e);
  }
  return forest;
}

// Dense Prim over the complete graph weighted by activation radius.
// Vertices unreachable through finite weights start a new tree.
std::vector<WeightedEdge> prim_forest(const PointSet& points, const std::vector<double>& rk,
                                      const EdgeRule& rule) {
  const std::size_t n = points.size();
  std::vector<WeightedEdge> forest;
  forest.reserve(n);
  std::vector<bool> in_tree(n, false);
  std::vector<double> key(n, kInf);
  std::vector<std::size_t> via(n, 0);
  std::size_t remaining = n;
  while (remaining > 0) {
    std::size_t next = n;
    double best = kInf;
    for (std::size_t v = 0; v < n; ++v) {
      if (in_tree[v]) continue;
      if (next == n || key[v] < best) {
        best = key[v];
        next = v;
      }
    }
    in_tree[next] = true;
    --remaining;
    if (best < kInf) forest.emplace_back(best, via[next], next);
    const auto p = points[next];
    for (std::size_t v = 0; v < n; ++v) {
      if (in_tree[v]) continue;
      const double w = activation_unchecked(rule, distance(p, points[v]), rk[next], rk[v]);
      if (w < key[v]) {
        key[v] = w;
        via[v] = next;
      }
    }
  }
  return forest;
}

// On the line, G_r is connected exactly through consecutive active vertices,
// so it suffices to link each newborn vertex to its active neighbours.
std::vector<WeightedEdge> rsl_line_forest(const PointSet& points, const std::vector<double>& rk,
                                          double alpha) {
  const std::size_t n = points.size();
  std::vector<WeightedEdge> edges;
  edges.reserve(2 * n);
  std::set<std::pair<double, std::size_t>> active;
  for (std::size_t v : birth_order(rk)) {
    const std::pair<double, std::size_t> key{points[v][0], v};
    const auto it = active.insert(key).first;
    auto link = [&](std::size_t u) {
      const double d = distance(points[u], points[v]);
      edges.emplace_back(std::max(rk[v], min_scaled_radius(d, alpha)), std::min(u, v),
                         std::max(u, v));
    };
    if (it != active.begin()) link(std::prev(it)->second);
    if (std::next(it) != active.end()) link(std::next(it)->second);
  }
  return kruskal(std::move(edges), n);
}

// Every k-NN edge has an endpoint whose alpha * r_k ball holds the other, and
// on the line those balls are windows of the sorted order.
std::vector<WeightedEdge> nn_line_forest(const PointSet& points, const std::vector<double>& rk,
                                         const EdgeRule& rule) {
  const std::size_t n = points.size();
  std::vector<std::size_t> sorted(n);
  for (std::size_t i = 0; i < n; ++i) sorted[i] = i;
  std::sort(sorted.begin(), sorted.end(), [&](std::size_t a, std::size_t b) {
    return std::tie(points[a][0], a) < std::tie(points[b][0], b);
  });
  const bool mutual = rule.variant == Variant::MutualKnn;
  std::vector<WeightedEdge> edges;
  for (std::size_t pos = 0; pos < n; ++pos) {
    const std::size_t i = sorted[pos];
    const double reach = rule.alpha * rk[i];
    auto consider = [&](std::size_t j) {
      const double d = distance(points[i], points[j]);
      if (!(d <= reach)) return false;
      const bool j_reaches = d <= rule.alpha * rk[j];
      // Emit each pair once: from i when only i reaches, else from the smaller index.
      const bool emit = mutual ? (j_reaches && i < j) : (!j_reaches || i < j);
      if (emit) edges.emplace_back(std::max(rk[i], rk[j]), std::min(i, j), std::max(i, j));
      return true;
    };
    for (std::size_t q = pos + 1; q < n && consider(sorted[q]); ++q) {
    }
    for (std::size_t q = pos; q-- > 0 && consider(sorted[q]);) {
    }
  }
  return kruskal(std::move(edges), n);
}

}  // namespace

ClusterTree build_tree(const PointSet& points, const KnnRadii& radii, const EdgeRule& rule) {
  check_rule(rule);
  const std::size_t n = points.size();
  if (radii.radii.size() != n) throw ParameterError("radii do not match the point set");
  const auto& rk = radii.radii;

  std::vector<WeightedEdge> forest;
  if (points.dimension() > 1) {
    forest = prim_forest(points, rk, rule);
  } else if (rule.variant == Variant::RobustSingleLinkage) {
    forest = rsl_line_forest(points, rk, rule.alpha);
  } else {
    forest = nn_line_forest(points, rk, rule);
  }
  std::sort(forest.begin(), forest.end());

  const std::vector<std::size_t> order = birth_order(rk);

  TreeBuilder builder(n);
  std::size_t bi = 0;
  std::size_t ei = 0;
  while (bi < n || ei < forest.size()) {
    const double rb = bi < n ? rk[order[bi]] : kInf;
    const double re = ei < forest.size() ? std::get<0>(forest[ei]) : kInf;
    if (rb <= re) {
      builder.birth(rb, order[bi++]);
    } else {
      const auto& [w, a, b] = forest[ei++];
      builder.link(w, a, b);
    }
  }

  TreeMeta meta;
  meta.d = points.dimension();
  meta.k = radii.k;
  meta.alpha = rule.alpha;
  meta.rule = std::string(to_string(rule.variant));
  return builder.finish(std::move(meta));
}

}  // namespace ctree
