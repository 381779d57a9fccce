#pragma once

#include <cstddef>
#include <string>

#include "ctree/tree.hpp"

namespace ctree::cli {

struct DendrogramStyle {
  double leaf_spacing = 12.0;
  double height = 400.0;
  double margin = 40.0;
  std::size_t max_points = 2000;
};

/// Static SVG: leaves on x in merge order, radius on y (growing upward).
/// Each vertex is a stem from its birth radius to the radius where it
/// merges; each merge is a bracket. Throws ParameterError above max_points.
std::string dendrogram_svg(const ClusterTree& tree, const DendrogramStyle& style = {});

}  // namespace ctree::cli
