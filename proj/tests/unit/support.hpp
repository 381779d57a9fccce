#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

#include "ctree/geometry.hpp"
#include "ctree/random.hpp"
#include "ctree/tree.hpp"

namespace ctree::testing {

inline PointSet random_points(std::size_t n, std::size_t d, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> coords(n * d);
  for (auto& c : coords) c = rng.uniform(-1.0, 1.0);
  return PointSet(d, std::move(coords));
}

// Small integer coordinates, so distances tie often.
inline PointSet lattice_points(std::size_t n, std::size_t d, std::uint64_t seed, int span = 6) {
  Rng rng(seed);
  std::vector<double> coords(n * d);
  for (auto& c : coords) c = std::floor(rng.uniform(0.0, static_cast<double>(span)));
  return PointSet(d, std::move(coords));
}

// Every event radius, the midpoints between consecutive ones, a point below
// the first and one far above the last.
inline std::vector<double> probe_radii(const ClusterTree& t) {
  const auto radii = t.event_radii();
  std::vector<double> out{0.0};
  for (std::size_t i = 0; i < radii.size(); ++i) {
    out.push_back(radii[i]);
    out.push_back(std::nextafter(radii[i], 0.0));
    if (i + 1 < radii.size()) out.push_back((radii[i] + radii[i + 1]) / 2.0);
  }
  if (!radii.empty()) out.push_back(radii.back() * 2.0 + 1.0);
  return out;
}

// Every block of `fine` lies inside one block of `coarse`, and both cover
// the same vertices.
inline bool refines(const Subpartition& fine, const Subpartition& coarse) {
  std::map<std::size_t, std::size_t> block;
  for (std::size_t b = 0; b < coarse.size(); ++b)
    for (std::size_t i : coarse[b]) block[i] = b;
  std::size_t covered = 0;
  for (const auto& f : fine) {
    covered += f.size();
    for (std::size_t i : f) {
      const auto it = block.find(i);
      if (it == block.end() || it->second != block[f.front()]) return false;
    }
  }
  return covered == block.size();
}

// Vertices of `inner` appear in `outer`, and each block of `inner` lies in
// one block of `outer`.
inline bool nested(const Subpartition& inner, const Subpartition& outer) {
  std::map<std::size_t, std::size_t> block;
  for (std::size_t b = 0; b < outer.size(); ++b)
    for (std::size_t i : outer[b]) block[i] = b;
  for (const auto& f : inner) {
    for (std::size_t i : f) {
      const auto it = block.find(i);
      if (it == block.end() || it->second != block.at(f.front())) return false;
    }
  }
  return true;
}

}  // namespace ctree::testing
