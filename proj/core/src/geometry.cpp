#include "ctree/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "ctree/error.hpp"

namespace ctree {

PointSet::PointSet(std::size_t dimension, std::vector<double> coords)
    : d_(dimension), coords_(std::move(coords)) {
  if (d_ == 0) throw DataError("point set dimension must be >= 1");
  if (coords_.empty()) throw DataError("point set must contain at least one point");
  if (coords_.size() % d_ != 0)
    throw DataError("coordinate count " + std::to_string(coords_.size()) +
                    " is not a multiple of dimension " + std::to_string(d_));
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    if (!std::isfinite(coords_[i]))
      throw DataError("non-finite coordinate in point " + std::to_string(i / d_));
  }
  n_ = coords_.size() / d_;
}

PointSet PointSet::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) throw DataError("point set must contain at least one point");
  const std::size_t d = rows.front().size();
  std::vector<double> coords;
  coords.reserve(rows.size() * d);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != d)
      throw DataError("row " + std::to_string(i) + " has " + std::to_string(rows[i].size()) +
                      " coordinates, expected " + std::to_string(d));
    coords.insert(coords.end(), rows[i].begin(), rows[i].end());
  }
  return PointSet(d, std::move(coords));
}

PointSet PointSet::permuted(std::span<const std::size_t> order) const {
  if (order.size() != n_) throw ParameterError("permutation length does not match point count");
  std::vector<double> coords;
  coords.reserve(coords_.size());
  for (std::size_t i : order) {
    if (i >= n_) throw ParameterError("permutation index out of range");
    auto p = (*this)[i];
    coords.insert(coords.end(), p.begin(), p.end());
  }
  return PointSet(d_, std::move(coords));
}

double distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size())
    throw ParameterError("dimension mismatch: " + std::to_string(a.size()) + " vs " +
                         std::to_string(b.size()));
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double diff = a[i] - b[i];
    sum += diff * diff;
  }
  return std::sqrt(sum);
}

double unit_ball_volume(int d) {
  if (d < 1) throw ParameterError("unit ball volume needs d >= 1, got " + std::to_string(d));
  const double half = 0.5 * d;
  return std::pow(std::numbers::pi, half) / std::tgamma(half + 1.0);
}

namespace {

std::vector<double> radii_by_scan(const PointSet& points, std::size_t k) {
  const std::size_t n = points.size();
  std::vector<double> radii(n);
  std::vector<double> row(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) row[j] = distance(points[i], points[j]);
    std::nth_element(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(k - 1), row.end());
    radii[i] = row[k - 1];
  }
  return radii;
}

// In one dimension the k nearest points (self included) form a contiguous
// window of the sorted order; grow it greedily from the point itself.
std::vector<double> radii_sorted_line(const PointSet& points, std::size_t k) {
  const std::size_t n = points.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return points[a][0] < points[b][0]; });

  std::vector<double> radii(n, 0.0);
  for (std::size_t pos = 0; pos < n; ++pos) {
    const auto self = points[order[pos]];
    std::size_t left = pos;       // next candidate is left - 1
    std::size_t right = pos + 1;  // next candidate is right
    double kth = 0.0;
    for (std::size_t taken = 1; taken < k; ++taken) {
      const bool has_left = left > 0;
      const bool has_right = right < n;
      const double dl = has_left ? distance(self, points[order[left - 1]]) : 0.0;
      const double dr = has_right ? distance(self, points[order[right]]) : 0.0;
      if (has_left && (!has_right || dl <= dr)) {
        kth = dl;
        --left;
      } else {
        kth = dr;
        ++right;
      }
    }
    radii[order[pos]] = kth;
  }
  return radii;
}

}  // namespace

KnnRadii knn_radii(const PointSet& points, std::size_t k) {
  if (k < 1) throw ParameterError("k must be >= 1");
  if (k > points.size())
    throw ParameterError("k = " + std::to_string(k) + " exceeds point count " +
                         std::to_string(points.size()));
  KnnRadii out;
  out.k = k;
  out.radii = points.dimension() == 1 ? radii_sorted_line(points, k) : radii_by_scan(points, k);
  return out;
}

}  // namespace ctree
