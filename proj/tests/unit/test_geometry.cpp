#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "ctree/error.hpp"
#include "ctree/geometry.hpp"
#include "ctree/random.hpp"

using namespace ctree;

namespace {

PointSet line(std::vector<double> xs) { return PointSet(1, std::move(xs)); }

PointSet random_points(std::size_t n, std::size_t d, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> coords(n * d);
  for (auto& c : coords) c = rng.uniform(-1.0, 1.0);
  return PointSet(d, std::move(coords));
}

// r_k straight from the definition: sort every distance row.
std::vector<double> sorted_row_radii(const PointSet& ps, std::size_t k) {
  std::vector<double> out;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    std::vector<double> row;
    for (std::size_t j = 0; j < ps.size(); ++j) row.push_back(distance(ps[i], ps[j]));
    std::sort(row.begin(), row.end());
    out.push_back(row[k - 1]);
  }
  return out;
}

}  // namespace

TEST(Distance, Examples) {
  EXPECT_EQ(distance(std::vector<double>{0.0}, std::vector<double>{3.0}), 3.0);
  EXPECT_EQ(distance(std::vector<double>{0.0, 0.0}, std::vector<double>{3.0, 4.0}), 5.0);
  const std::vector<double> a{1.5, -2.0};
  EXPECT_EQ(distance(a, a), 0.0);
}

TEST(Distance, DimensionMismatchThrows) {
  EXPECT_THROW(distance(std::vector<double>{0.0}, std::vector<double>{1.0, 2.0}), ParameterError);
}

TEST(UnitBallVolume, KnownValues) {
  EXPECT_DOUBLE_EQ(unit_ball_volume(1), 2.0);
  EXPECT_DOUBLE_EQ(unit_ball_volume(2), std::numbers::pi);
  EXPECT_DOUBLE_EQ(unit_ball_volume(3), 4.0 * std::numbers::pi / 3.0);
  EXPECT_THROW(unit_ball_volume(0), ParameterError);
  EXPECT_THROW(unit_ball_volume(-2), ParameterError);
}

TEST(PointSet, RejectsBadInput) {
  EXPECT_THROW(PointSet(1, std::vector<double>{}), DataError);
  EXPECT_THROW(PointSet(2, {1.0, 2.0, 3.0}), DataError);
  EXPECT_THROW(PointSet(1, {std::nan("")}), DataError);
  EXPECT_THROW(PointSet(1, {INFINITY}), DataError);
  EXPECT_THROW(PointSet::from_rows({{1.0, 2.0}, {3.0}}), DataError);
}

TEST(KnnRadii, Examples) {
  const auto ps = line({0.0, 1.0, 3.0});
  EXPECT_EQ(knn_radii(ps, 2).radii, (std::vector<double>{1.0, 1.0, 2.0}));
  EXPECT_EQ(knn_radii(ps, 3).radii, (std::vector<double>{3.0, 2.0, 3.0}));
  EXPECT_EQ(knn_radii(ps, 1).radii, (std::vector<double>{0.0, 0.0, 0.0}));
}

TEST(KnnRadii, RangeErrors) {
  const auto ps = line({0.0, 1.0, 3.0});
  EXPECT_THROW(knn_radii(ps, 0), ParameterError);
  EXPECT_THROW(knn_radii(ps, 4), ParameterError);
}

TEST(KnnRadii, DuplicatesGiveZeroRadius) {
  const auto ps = line({2.0, 2.0, 5.0});
  const auto r = knn_radii(ps, 2).radii;
  EXPECT_EQ(r[0], 0.0);
  EXPECT_EQ(r[1], 0.0);
  EXPECT_EQ(r[2], 3.0);
}

TEST(KnnRadii, MatchesSortedRowsInEveryDimension) {
  for (std::size_t d = 1; d <= 3; ++d) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const auto ps = random_points(5 + seed * 3, d, seed * 31 + d);
      for (std::size_t k : {std::size_t{1}, std::size_t{2}, std::size_t{4}, ps.size()}) {
        EXPECT_EQ(knn_radii(ps, k).radii, sorted_row_radii(ps, k)) << "d=" << d << " k=" << k;
      }
    }
  }
}

TEST(KnnRadii, LineSweepHandlesTies) {
  const auto ps = line({0.0, 1.0, 2.0, 3.0, 3.0, 4.0, 6.0, 6.0, 6.0});
  for (std::size_t k = 1; k <= ps.size(); ++k)
    EXPECT_EQ(knn_radii(ps, k).radii, sorted_row_radii(ps, k)) << "k=" << k;
}

TEST(KnnRadii, PermutationEquivariant) {
  const auto ps = random_points(30, 2, 9);
  std::vector<std::size_t> order(ps.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::reverse(order.begin(), order.end());
  std::rotate(order.begin(), order.begin() + 7, order.end());
  const auto base = knn_radii(ps, 5).radii;
  const auto perm = knn_radii(ps.permuted(order), 5).radii;
  for (std::size_t i = 0; i < order.size(); ++i) EXPECT_EQ(perm[i], base[order[i]]);
}

TEST(KnnRadii, MonotoneInK) {
  const auto ps = random_points(25, 3, 4);
  auto prev = knn_radii(ps, 1).radii;
  for (std::size_t k = 2; k <= ps.size(); ++k) {
    const auto cur = knn_radii(ps, k).radii;
    for (std::size_t i = 0; i < cur.size(); ++i) EXPECT_LE(prev[i], cur[i]);
    prev = cur;
  }
}

TEST(KnnRadii, ScalesWithCoordinates) {
  const auto ps = random_points(20, 2, 5);
  std::vector<double> scaled(ps.coords().begin(), ps.coords().end());
  for (auto& c : scaled) c *= 4.0;  // power of two keeps the arithmetic exact
  const auto a = knn_radii(ps, 3).radii;
  const auto b = knn_radii(PointSet(2, scaled), 3).radii;
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(b[i], 4.0 * a[i]);
}

TEST(KnnRadii, BallCountProperty) {
  const auto ps = random_points(40, 2, 12);
  const std::size_t k = 6;
  const auto r = knn_radii(ps, k).radii;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    std::size_t inside = 0;
    std::size_t strictly = 0;
    for (std::size_t j = 0; j < ps.size(); ++j) {
      const double d = distance(ps[i], ps[j]);
      inside += d <= r[i];
      strictly += d < r[i];
    }
    EXPECT_GE(inside, k);
    EXPECT_LT(strictly, k);
  }
}
