// Copyright 2026 The ellipsoid-repr Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef ELLIPSOID_DECOMPOSITION_HPP
#define ELLIPSOID_DECOMPOSITION_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "ellipsoid/types.hpp"

namespace ellipsoid {

/// Per-point cluster labels from k-means. Every partition is non-empty.
struct PartitionAssignment {
  std::vector<std::uint32_t> labels;
  std::vector<Vec3> centroids;
  int n_partitions = 0;
  int iterations = 0;
  bool converged = false;
};

/// One materialised partition with the original index of each member.
struct Partition {
  std::vector<Vec3> points;
  std::vector<std::uint32_t> indices;
};

/// Seeded k-means++ followed by Lloyd iterations until no label changes or
/// 100 iterations. Empty clusters are repaired by moving in the point farthest
/// from its centroid (taken from a cluster with more than one member).
///
/// Deterministic for fixed (points, k, seed).
PartitionAssignment kmeans_partition(std::span<const Vec3> points, int k, std::uint64_t seed);

/// Splits points by label, preserving original order inside each partition.
std::vector<Partition> partition_points(std::span<const Vec3> points, const PartitionAssignment& assignment);

/// Sum of squared distances from each point to its assigned centroid.
double within_cluster_ss(std::span<const Vec3> points, std::span<const std::uint32_t> labels,
                         std::span<const Vec3> centroids);

}  // namespace ellipsoid

#endif  // ELLIPSOID_DECOMPOSITION_HPP
