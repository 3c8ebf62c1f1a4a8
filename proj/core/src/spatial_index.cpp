// Copyright 2026 The ellipsoid-repr Authors
// SPDX-License-Identifier: Apache-2.0

#include "ellipsoid/spatial_index.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace ellipsoid {
namespace {
constexpr std::uint32_t kLeafSize = 8;
}

NNIndex::NNIndex(std::span<const Vec3> points) {
  if (points.empty()) throw Error("empty point cloud");
  if (points.size() >= std::numeric_limits<std::uint32_t>::max()) throw Error("point cloud too large");
  for (const Vec3& p : points)
    if (!is_finite(p)) throw Error("non-finite input");

  ids_.resize(points.size());
  std::iota(ids_.begin(), ids_.end(), 0u);
  points_.assign(points.begin(), points.end());
  nodes_.reserve(2 * points.size() / kLeafSize + 1);
  build(0, static_cast<std::uint32_t>(points.size()));

  std::vector<Vec3> permuted(points.size());
  for (std::size_t i = 0; i < ids_.size(); ++i) permuted[i] = points[ids_[i]];
  points_ = std::move(permuted);
}

std::uint32_t NNIndex::build(std::uint32_t begin, std::uint32_t end) {
  const auto id = static_cast<std::uint32_t>(nodes_.size());
  nodes_.push_back({});
  nodes_[id].begin = begin;
  nodes_[id].end = end;
  if (end - begin <= kLeafSize) return id;

  // points_ is still in original order here; ids_ is being permuted.
  Vec3 lo = points_[ids_[begin]];
  Vec3 hi = lo;
  for (std::uint32_t i = begin; i < end; ++i) {
    const Vec3& p = points_[ids_[i]];
    for (int a = 0; a < 3; ++a) {
      lo[a] = std::min(lo[a], p[a]);
      hi[a] = std::max(hi[a], p[a]);
    }
  }
  int axis = 0;
  for (int a = 1; a < 3; ++a)
    if (hi[a] - lo[a] > hi[axis] - lo[axis]) axis = a;

  const std::uint32_t mid = begin + (end - begin) / 2;
  std::nth_element(ids_.begin() + begin, ids_.begin() + mid, ids_.begin() + end,
                   [&](std::uint32_t i, std::uint32_t j) {
                     const double ci = points_[i][axis];
                     const double cj = points_[j][axis];
                     return ci < cj || (ci == cj && i < j);
                   });
  const double split = points_[ids_[mid]][axis];

  const std::uint32_t left = build(begin, mid);
  const std::uint32_t right = build(mid, end);
  Node& node = nodes_[id];
  node.axis = static_cast<std::int8_t>(axis);
  node.split = split;
  node.left = left;
  node.right = right;
  return id;
}

void NNIndex::search(std::uint32_t node_id, Vec3 query, double& best_d2, std::uint32_t& best_id) const {
  const Node& node = nodes_[node_id];
  if (node.axis < 0) {
    for (std::uint32_t i = node.begin; i < node.end; ++i) {
      const double d2 = squared_distance(query, points_[i]);
      if (d2 < best_d2 || (d2 == best_d2 && ids_[i] < best_id)) {
        best_d2 = d2;
        best_id = ids_[i];
      }
    }
    return;
  }
  const double diff = query[node.axis] - node.split;
  const std::uint32_t near_child = diff < 0.0 ? node.left : node.right;
  const std::uint32_t far_child = diff < 0.0 ? node.right : node.left;
  search(near_child, query, best_d2, best_id);
  // <= keeps equidistant candidates on the far side reachable for the tie-break.
  if (diff * diff <= best_d2) search(far_child, query, best_d2, best_id);
}

Neighbor NNIndex::nearest(Vec3 query) const {
  double best_d2 = std::numeric_limits<double>::infinity();
  std::uint32_t best_id = std::numeric_limits<std::uint32_t>::max();
  search(0, query, best_d2, best_id);
  return {best_id, std::sqrt(best_d2)};
}

Neighbor nearest_bruteforce(std::span<const Vec3> points, Vec3 query) {
  if (points.empty()) throw Error("empty point cloud");
  std::size_t best = 0;
  double best_d2 = squared_distance(query, points[0]);
  for (std::size_t i = 1; i < points.size(); ++i) {
    const double d2 = squared_distance(query, points[i]);
    if (d2 < best_d2) {
      best_d2 = d2;
      best = i;
    }
  }
  return {best, std::sqrt(best_d2)};
}

}  // namespace ellipsoid
