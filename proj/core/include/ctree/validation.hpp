#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ctree/estimators.hpp"
#include "ctree/geometry.hpp"
#include "ctree/pruning.hpp"
#include "ctree/scales.hpp"
#include "ctree/synthetic.hpp"
#include "ctree/tree.hpp"

namespace ctree {

enum class Traversal { BreadthFirst, DepthFirst };

/// Literal construction of the level graph at radius r: vertices with
/// r_k(x_i) <= r, edges by the rule's distance test, components by graph
/// search. Shares no code with build_tree beyond the distance function.
Subpartition brute_force_components(const PointSet& points, std::size_t k, const EdgeRule& rule,
                                    double r, Traversal traversal = Traversal::BreadthFirst);

/// Classical single linkage: vertex i appears at its nearest-neighbour
/// distance and components merge along a minimum spanning tree found by
/// Kruskal over every pairwise distance. Requires n >= 2.
ClusterTree single_linkage_oracle(const PointSet& points);

struct TrialRecord {
  std::uint64_t seed = 0;
  bool skipped = false;
  bool success = false;
  std::map<std::string, double> values;
};

struct ExperimentReport {
  std::string name;
  std::string density;  // human-readable density descriptor
  std::uint64_t seed = 0;
  std::size_t trials = 0;
  std::size_t successes = 0;
  std::size_t skipped = 0;
  std::map<std::string, double> parameters;
  std::vector<TrialRecord> records;

  std::size_t evaluated() const { return trials - skipped; }
  /// successes / evaluated trials; 0 when nothing was evaluated.
  double success_rate() const;
};

/// Repeatedly samples n = p.n points and checks, at r(lambda_inf) of the
/// certificate for level `lambda`, that samples in A and A' are in different
/// components and that each side is one component. One report per variant;
/// every variant sees the same samples. Trials where A or A' receives no
/// sample are skipped.
///
/// Throws ParameterError when {f >= lambda} has fewer than two components.
std::vector<ExperimentReport> check_separation_connectedness(const PiecewiseConstant1D& f,
                                                             double lambda, const ScaleParams& p,
                                                             const std::vector<Variant>& variants,
                                                             std::size_t trials,
                                                             std::uint64_t seed);

/// Samples two_bump(lambda, Lambda) and counts trials whose mutual k-NN
/// graph (all vertices) has no edge between the first dense region and the
/// rest. Here k counts neighbours other than the point itself, so the graph
/// uses r_{k+1} in this library's convention. Requires Lambda > 32 lambda, 1 <= k <= Lambda / (64 lambda),
/// 1 <= alpha <= 2 and n >= Lambda / lambda; violations throw ParameterError
/// naming every failed bound.
ExperimentReport knn_disconnection_experiment(double lambda, double Lambda, std::size_t k,
                                              double alpha, std::size_t n, std::size_t trials,
                                              std::uint64_t seed);

/// A set of at least two disjoint components of one tree level that lie in a
/// single connected component of {f >= lambda}, where lambda is the smallest
/// density over the points of at least one pair among them.
struct FalseCluster {
  double radius = 0.0;
  double lambda = 0.0;
  Interval true_component;
  std::vector<std::size_t> components;  // component labels at `radius`
};

/// False clusters of `tree` for sample `points` drawn from f. Every level of
/// the tree is inspected; a group is reported when it first appears or its
/// membership changes. Pairs whose minimum density is below min_level are
/// ignored (min_level = 0 checks every pair).
///
/// Throws ParameterError if a point lies outside the support or the tree and
/// point set sizes differ.
std::vector<FalseCluster> false_cluster_audit(const ClusterTree& tree, const PiecewiseConstant1D& f,
                                              const PointSet& points, double min_level = 0.0);

struct HartiganSetup {
  EdgeRule rule{Variant::RobustSingleLinkage, 1.4142135623730951};
  double k_factor = 2.0;     // k(n) = max(k_min, ceil(k_factor * d * log n))
  std::size_t k_min = 2;
};

std::size_t hartigan_k(const HartiganSetup& setup, std::size_t n, std::size_t d);

struct ConsistencyPoint {
  std::size_t n = 0;
  std::size_t k = 0;
  ExperimentReport report;  // success = smallest clusters are disjoint
};

/// For each n in n_grid, the empirical probability that the smallest
/// clusters containing the samples of the first two components of
/// {f >= lambda} are disjoint.
std::vector<ConsistencyPoint> hartigan_consistency_curve(const PiecewiseConstant1D& f,
                                                         const HartiganSetup& setup, double lambda,
                                                         const std::vector<std::size_t>& n_grid,
                                                         std::size_t trials, std::uint64_t seed);

struct PruningSetup {
  ScaleParams params;  // n, k, d, alpha, delta, c_delta, eps_tilde
  Variant variant = Variant::RobustSingleLinkage;
  double eps = 0.1;    // salience slack used in the separator condition
};

struct PruningReport {
  double lambda = 0.0;        // inf of f over A_sigma u A'_sigma
  double lambda_floor = 0.0;  // audit threshold (pruning_lambda_floor)
  double separator_sup = 0.0;
  ExperimentReport recovery;        // A, A' separate after pruning at r(lambda)
  ExperimentReport pruned_clean;    // audit of the pruned tree is empty
  ExperimentReport unpruned_clean;  // audit of the base tree is empty
};

/// Pruning recovery and false-cluster removal on samples of f. Requires the
/// separator condition sup_{S_sigma} f < (1 - 2 eps) lambda - eps_tilde for
/// the certificate at `level`; throws ParameterError otherwise.
PruningReport pruning_experiment(const PiecewiseConstant1D& f, double level,
                                 const PruningSetup& setup, std::size_t trials,
                                 std::uint64_t seed);

}  // namespace ctree
