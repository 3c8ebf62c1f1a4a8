// Copyright 2026 The ellipsoid-repr Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef ELLIPSOID_SPATIAL_INDEX_HPP
#define ELLIPSOID_SPATIAL_INDEX_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "ellipsoid/types.hpp"

namespace ellipsoid {

struct Neighbor {
  std::size_t index = 0;
  double distance = 0.0;
};

/// Exact Euclidean nearest-neighbour search over an immutable point list.
///
/// k-d tree split on the widest axis at the median. Equidistant candidates
/// resolve to the smallest original index, so results always agree with
/// nearest_bruteforce(). Concurrent queries are safe.
class NNIndex {
 public:
  /// Throws Error on empty or non-finite input.
  explicit NNIndex(std::span<const Vec3> points);

  Neighbor nearest(Vec3 query) const;
  std::size_t size() const { return points_.size(); }

 private:
  struct Node {
    double split = 0.0;
    std::uint32_t begin = 0;
    std::uint32_t end = 0;
    std::uint32_t left = 0;
    std::uint32_t right = 0;
    std::int8_t axis = -1;  // -1 for leaves
  };

  std::uint32_t build(std::uint32_t begin, std::uint32_t end);
  void search(std::uint32_t node, Vec3 query, double& best_d2, std::uint32_t& best_id) const;

  std::vector<Vec3> points_;       // permuted into tree order
  std::vector<std::uint32_t> ids_;  // original index of each permuted point
  std::vector<Node> nodes_;
};

inline NNIndex build_index(std::span<const Vec3> points) { return NNIndex(points); }

inline Neighbor nearest(const NNIndex& index, Vec3 query) { return index.nearest(query); }

/// Linear scan with the same tie-break rule as NNIndex. Throws on empty input.
Neighbor nearest_bruteforce(std::span<const Vec3> points, Vec3 query);

}  // namespace ellipsoid

#endif  // ELLIPSOID_SPATIAL_INDEX_HPP
