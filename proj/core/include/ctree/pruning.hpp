#pragma once

#include "ctree/scales.hpp"
#include "ctree/tree.hpp"

namespace ctree {

struct PruneOptions {
  /// Also reconnect everything at radii above low_level_cutoff(params).
  bool prune_low_levels = false;
};

/// A base tree together with its pruned filtration.
struct PrunedTree {
  ClusterTree base;
  ScaleParams params;
  PruneOptions options;
  /// Radius from which lambda_tilde <= 0 and the lookup jumps to the root
  /// level (+infinity if never, 0 if at every positive radius).
  double clamp_radius = 0.0;
  /// low_level_cutoff(params) when prune_low_levels is set, else +infinity.
  double low_cutoff = 0.0;
  ClusterTree pruned;
};

/// Base-tree level consulted when pruning level r:
/// r(max(lambda_tilde_r, 0)), with lambda_tilde_r <= 0 mapped to +infinity,
/// never below r itself. r = 0 maps to 0.
double lookup_radius(double r, const ScaleParams& p, const PruneOptions& options = {});

/// At every level r, joins base components at r that share a component of
/// the base tree at lookup_radius(r). Never removes vertices. The result is
/// an exact filtration: it has events at base event radii and at the radii
/// where the lookup level crosses a base event radius.
///
/// Throws ParameterError when the tree's n, k or d disagree with p.
PrunedTree prune(const ClusterTree& tree, const ScaleParams& p, const PruneOptions& options = {});

/// Post-pruning partition at level r.
Subpartition pruned_components_at(const PrunedTree& pt, double r);

}  // namespace ctree
