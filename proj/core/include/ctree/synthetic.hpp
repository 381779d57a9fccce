#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "ctree/geometry.hpp"

namespace ctree {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool contains(double x) const { return lo <= x && x <= hi; }
  double width() const { return hi - lo; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

struct Segment {
  double width = 0.0;
  double density = 0.0;
};

/// Density on [origin, origin + sum of widths] that is constant on each
/// segment. Segments are half-open [start, end) except the last, which is
/// closed, so every point of the support has exactly one density value.
class PiecewiseConstant1D {
 public:
  /// Throws ParameterError for nonpositive widths, negative densities, or
  /// total mass further than 1e-9 from 1.
  PiecewiseConstant1D(std::vector<Segment> segments, double origin = 0.0);

  const std::vector<Segment>& segments() const { return segments_; }
  double origin() const { return origin_; }
  double support_end() const { return bounds_.back(); }
  Interval segment_interval(std::size_t i) const { return {bounds_[i], bounds_[i + 1]}; }
  double segment_mass(std::size_t i) const { return segments_[i].width * segments_[i].density; }

  bool in_support(double x) const { return origin_ <= x && x <= support_end(); }
  /// Index of the segment holding x; throws ParameterError outside the support.
  std::size_t segment_of(double x) const;
  double density_at(double x) const { return segments_[segment_of(x)].density; }
  double max_density() const;

 private:
  std::vector<Segment> segments_;
  double origin_ = 0.0;
  std::vector<double> bounds_;  // segment boundaries, size segments+1
};

/// Three segments of width L = 1/(lambda + 2 Lambda) with densities
/// (Lambda, lambda, Lambda). Requires Lambda > lambda > 0.
PiecewiseConstant1D two_bump(double lambda, double Lambda);

/// Connected components of {x : f(x) >= lambda}: maximal runs of adjacent
/// segments with density >= lambda, as closed intervals.
std::vector<Interval> true_level_components(const PiecewiseConstant1D& f, double lambda);

/// (sigma, eps)-separation witness for the first two components of
/// {f >= lambda}.
struct SeparationCertificate {
  Interval component_a;   // first component of the level set
  Interval component_b;   // second component
  Interval a;             // A = component_a shrunk by sigma on both sides
  Interval a_prime;       // A' likewise
  double separator = 0.0; // S = {midpoint of the gap between the components}
  double sigma = 0.0;
  double eps = 0.0;
  double sigma_sup = 0.0;   // supremum of admissible sigma
  double eps_sup = 0.0;     // supremum of admissible eps at this sigma
  double lambda_inf = 0.0;  // inf of f over A_sigma union A'_sigma
  double separator_sup = 0.0;  // sup of f over S_sigma
};

/// Separation witness computed from segment geometry.
///
/// A and A' are the two components shrunk by sigma so that A_sigma and
/// A'_sigma are exactly the components. sigma is the largest value that keeps
/// S_sigma strictly inside the gap and A, A' at least half of their
/// component's width: min(gap/2, |comp_a|/4, |comp_b|/4), with gap/2 pulled
/// in by one part in 1e9 because S_sigma must not touch the components.
/// eps is eps_sup = 1 - sup_{S_sigma} f / inf_{A_sigma u A'_sigma} f pulled in
/// by one part in 1e9, so the defining inequality is strict.
///
/// Returns nullopt when {f >= lambda} has fewer than two components.
std::optional<SeparationCertificate> separation_certificate(const PiecewiseConstant1D& f,
                                                            double lambda);

struct Ball {
  std::vector<double> center;
  double radius = 0.0;
  double density = 0.0;
};

/// Axis-aligned box of constant density; used as an optional bridge between
/// blobs.
struct Box {
  std::vector<double> lo;
  std::vector<double> hi;
  double density = 0.0;
};

/// Mixture of uniform balls (plus an optional box bridge) in R^d. The density
/// at a point is the sum of the densities of the pieces covering it.
struct SeparatedBlobs {
  std::size_t d = 2;
  std::vector<Ball> blobs;
  std::optional<Box> bridge;

  /// Throws ParameterError on dimension mismatches, nonpositive sizes,
  /// overlapping balls, or total mass further than 1e-9 from 1.
  void validate() const;
  double density_at(std::span<const double> x) const;
};

using Density = std::variant<PiecewiseConstant1D, SeparatedBlobs>;

/// n i.i.d. draws. Inverse CDF on segments in 1D; composition over pieces
/// plus rejection from the bounding cube for balls. Deterministic in seed.
PointSet sample(const PiecewiseConstant1D& f, std::size_t n, std::uint64_t seed);
PointSet sample(const SeparatedBlobs& f, std::size_t n, std::uint64_t seed);
PointSet sample(const Density& f, std::size_t n, std::uint64_t seed);

}  // namespace ctree
