#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ctree/geometry.hpp"
#include "ctree/pruning.hpp"
#include "ctree/synthetic.hpp"
#include "ctree/tree.hpp"
#include "ctree/validation.hpp"

namespace ctree {

inline constexpr const char* kTreeSchemaVersion = "1.0";

/// Comma-separated rows of numbers, one point per row. A first row that does
/// not parse as numbers is treated as a header. Blank lines are skipped.
/// Throws DataError naming the offending line, or for an empty input.
PointSet read_csv(std::istream& in);
PointSet read_csv_file(const std::string& path);
void write_csv(std::ostream& out, const PointSet& points);

/// Tree JSON with radii printed to 17 significant digits, so reading back
/// gives bit-identical events. Output is byte-deterministic.
std::string tree_to_json(const ClusterTree& tree);
/// Also records clamp radius, low cutoff and the prune_low_levels flag.
std::string pruned_tree_to_json(const PrunedTree& pt);
/// Throws DataError on malformed input or an unknown major version.
ClusterTree tree_from_json(const std::string& text);
ClusterTree read_tree_file(const std::string& path);

/// "point,label" rows; the label is the component id or "unborn".
std::string labels_to_csv(const std::vector<std::optional<std::size_t>>& labels);

/// Density descriptions:
///   {"kind": "two_bump", "lambda": 1, "Lambda": 4}
///   {"kind": "piecewise", "origin": 0, "segments": [[width, density], ...]}
///   {"kind": "blobs", "d": 2, "blobs": [{"center": [..], "radius": r, "density": v}],
///    "bridge": {"lo": [..], "hi": [..], "density": v}}
/// Throws DataError for malformed JSON and ParameterError for invalid
/// densities.
Density density_from_json(const std::string& text);

std::string report_to_json(const ExperimentReport& report);
std::string reports_to_json(const std::vector<ExperimentReport>& reports);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace ctree
