#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace ctree {

/// n points in R^d stored row-major. Every coordinate is finite and all
/// points share the same dimension d >= 1.
class PointSet {
 public:
  PointSet() = default;

  /// Throws DataError unless coords.size() == n * d with n >= 1, d >= 1 and
  /// every coordinate finite.
  PointSet(std::size_t dimension, std::vector<double> coords);

  /// Convenience for hand-written point lists; each row must have the same
  /// length.
  static PointSet from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t size() const { return n_; }
  std::size_t dimension() const { return d_; }

  std::span<const double> operator[](std::size_t i) const {
    return {coords_.data() + i * d_, d_};
  }

  std::span<const double> coords() const { return coords_; }

  /// The same points in a different order: result[i] = (*this)[order[i]].
  PointSet permuted(std::span<const std::size_t> order) const;

 private:
  std::size_t n_ = 0;
  std::size_t d_ = 0;
  std::vector<double> coords_;
};

/// Euclidean distance. Throws ParameterError on dimension mismatch.
double distance(std::span<const double> a, std::span<const double> b);

/// Volume of the unit ball in R^d: pi^{d/2} / Gamma(d/2 + 1).
double unit_ball_volume(int d);

/// radii[i] = r_k(x_i): the k-th smallest distance from x_i to the sample,
/// counting x_i itself, so the closed ball B(x_i, radii[i]) holds at least k
/// points and no smaller closed ball does.
struct KnnRadii {
  std::size_t k = 0;
  std::vector<double> radii;
};

/// Exact k-NN radii. Requires 1 <= k <= n (ParameterError otherwise).
/// One-dimensional inputs use a sorted sweep; other dimensions use a full
/// scan per point. Both produce identical values.
KnnRadii knn_radii(const PointSet& points, std::size_t k);

}  // namespace ctree
