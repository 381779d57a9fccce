#pragma once

#include <cstddef>
#include <string>
#include <string_view>

#include "ctree/geometry.hpp"
#include "ctree/tree.hpp"

namespace ctree {

enum class Variant {
  RobustSingleLinkage,  // G_r: edge when ||xi - xj|| <= alpha * r
  Knn,                  // G^NN_r with alpha * max(r_k(xi), r_k(xj))
  MutualKnn,            // G^NN_r with alpha * min(r_k(xi), r_k(xj))
};

struct EdgeRule {
  Variant variant = Variant::RobustSingleLinkage;
  double alpha = 1.0;
};

/// "rsl", "knn", "mknn".
std::string_view to_string(Variant v);
/// Throws ParameterError for unknown names.
Variant parse_variant(std::string_view name);

/// Smallest radius at which edge (i, j) is present, given their distance and
/// k-NN radii; +infinity when the rule never admits the edge. The result is
/// never below max(rki, rkj). Throws ParameterError for negative inputs or
/// alpha <= 0.
double edge_activation(const EdgeRule& rule, double dij, double rki, double rkj);

/// Literal edge test used by the oracles: is (i, j) an edge of the graph at
/// level r, assuming both endpoints are active.
bool edge_present(const EdgeRule& rule, double dij, double rki, double rkj, double r);

/// Cluster tree of robust single linkage or of the k-NN graphs (Knn,
/// MutualKnn). Vertex i is born at r_k(x_i); components merge at the exact
/// infimum radius where the level graphs join them.
///
/// The level graphs are nested, so their components at every r coincide with
/// those of a minimum spanning forest under activation weights. For d > 1 the
/// forest is found with dense Prim in O(n^2 d) time and O(n) memory. On the
/// line, RSL links each newborn vertex to its active neighbours (O(n log n))
/// and the k-NN rules only scan alpha * r_k windows (O(n k log n)).
ClusterTree build_tree(const PointSet& points, std::size_t k, const EdgeRule& rule);

/// Same, reusing precomputed radii (radii.k must equal the intended k).
ClusterTree build_tree(const PointSet& points, const KnnRadii& radii, const EdgeRule& rule);

}  // namespace ctree
