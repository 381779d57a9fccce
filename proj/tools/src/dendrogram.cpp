#include "ctree_cli/dendrogram.hpp"

#include <algorithm>
#include <cstdio>
#include <optional>
#include <sstream>
#include <vector>

#include "ctree/error.hpp"

namespace ctree::cli {

namespace {

struct Node {
  double radius = 0.0;
  std::optional<std::size_t> left;
  std::optional<std::size_t> right;
  std::optional<std::size_t> parent;
  double x = 0.0;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string line(double x1, double y1, double x2, double y2) {
  return "<line x1=\"" + fmt(x1) + "\" y1=\"" + fmt(y1) + "\" x2=\"" + fmt(x2) + "\" y2=\"" +
         fmt(y2) + "\"/>\n";
}

}  // namespace

std::string dendrogram_svg(const ClusterTree& tree, const DendrogramStyle& style) {
  const std::size_t n = tree.size();
  if (n > style.max_points)
    throw ParameterError("tree has " + std::to_string(n) + " points, above the render cap of " +
                         std::to_string(style.max_points) + "; subsample the input or raise --max-points");

  std::vector<Node> nodes;
  std::vector<std::optional<std::size_t>> current(n);
  double rmax = 0.0;
  for (const auto& e : tree.events()) {
    rmax = std::max(rmax, e.radius);
    if (const auto* b = std::get_if<Birth>(&e.what)) {
      current[b->point] = nodes.size();
      nodes.push_back({e.radius, {}, {}, {}, 0.0});
    } else {
      const auto& m = std::get<Merge>(e.what);
      const std::size_t id = nodes.size();
      nodes.push_back({e.radius, current[m.a], current[m.b], {}, 0.0});
      nodes[*current[m.a]].parent = id;
      nodes[*current[m.b]].parent = id;
      current[m.a] = id;
      current[m.b].reset();
    }
  }
  if (rmax <= 0.0) rmax = 1.0;
  const double top = rmax * 1.05;

  // Leaves left to right by depth-first order from each root, roots by label.
  std::size_t leaves = 0;
  for (const auto& root : current) {
    if (!root) continue;
    std::vector<std::size_t> stack{*root};
    while (!stack.empty()) {
      const std::size_t v = stack.back();
      stack.pop_back();
      if (!nodes[v].left) {
        nodes[v].x = style.margin + (static_cast<double>(leaves) + 0.5) * style.leaf_spacing;
        ++leaves;
        continue;
      }
      stack.push_back(*nodes[v].right);
      stack.push_back(*nodes[v].left);
    }
  }
  for (auto& node : nodes) {
    if (node.left) node.x = (nodes[*node.left].x + nodes[*node.right].x) / 2.0;
  }

  auto y = [&](double r) { return style.margin + style.height * (1.0 - r / top); };
  const double width = 2.0 * style.margin + static_cast<double>(std::max<std::size_t>(leaves, 1)) *
                                                style.leaf_spacing;
  const double total_height = style.height + 2.0 * style.margin;

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(width) << "\" height=\""
     << fmt(total_height) << "\" viewBox=\"0 0 " << fmt(width) << " " << fmt(total_height)
     << "\">\n";
  os << "<g stroke=\"#888\" stroke-width=\"1\" font-family=\"sans-serif\" font-size=\"10\">\n";
  const double axis_x = style.margin / 2.0;
  os << line(axis_x, y(0.0), axis_x, y(top));
  for (int i = 0; i <= 4; ++i) {
    const double r = rmax * i / 4.0;
    os << line(axis_x - 3.0, y(r), axis_x, y(r));
    char label[32];
    std::snprintf(label, sizeof label, "%.3g", r);
    os << "<text x=\"" << fmt(axis_x + 2.0) << "\" y=\"" << fmt(y(r) - 2.0)
       << "\" stroke=\"none\" fill=\"#444\">" << label << "</text>\n";
  }
  os << "</g>\n<g stroke=\"#000\" stroke-width=\"1\">\n";
  for (const auto& node : nodes) {
    const double upper = node.parent ? nodes[*node.parent].radius : top;
    os << line(node.x, y(node.radius), node.x, y(upper));
    if (node.left) os << line(nodes[*node.left].x, y(node.radius), nodes[*node.right].x, y(node.radius));
  }
  os << "</g>\n</svg>\n";
  return os.str();
}

}  // namespace ctree::cli
