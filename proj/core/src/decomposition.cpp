// Copyright 2026 The ellipsoid-repr Authors
// SPDX-License-Identifier: Apache-2.0

#include "ellipsoid/decomposition.hpp"

#include <algorithm>
#include <cassert>
#include <limits>

#include "ellipsoid/random.hpp"

namespace ellipsoid {
namespace {

constexpr int kMaxIterations = 100;

std::vector<std::uint32_t> assign(std::span<const Vec3> points, std::span<const Vec3> centroids) {
  std::vector<std::uint32_t> labels(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    std::uint32_t best = 0;
    double best_d2 = squared_distance(points[i], centroids[0]);
    for (std::uint32_t c = 1; c < centroids.size(); ++c) {
      const double d2 = squared_distance(points[i], centroids[c]);
      if (d2 < best_d2) {
        best_d2 = d2;
        best = c;
      }
    }
    labels[i] = best;
  }
  return labels;
}

std::vector<std::size_t> cluster_sizes(std::span<const std::uint32_t> labels, std::size_t k) {
  std::vector<std::size_t> sizes(k, 0);
  for (std::uint32_t l : labels) ++sizes[l];
  return sizes;
}

// Gives every empty cluster the point farthest from its current centroid.
void repair_empty(std::span<const Vec3> points, std::vector<std::uint32_t>& labels, std::vector<Vec3>& centroids) {
  std::vector<std::size_t> sizes = cluster_sizes(labels, centroids.size());
  for (std::uint32_t c = 0; c < centroids.size(); ++c) {
    if (sizes[c] != 0) continue;
    std::size_t donor = points.size();
    double worst = -1.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (sizes[labels[i]] < 2) continue;
      const double d2 = squared_distance(points[i], centroids[labels[i]]);
      if (d2 > worst) {
        worst = d2;
        donor = i;
      }
    }
    // k <= n guarantees some cluster holds at least two points.
    assert(donor < points.size());
    --sizes[labels[donor]];
    labels[donor] = c;
    sizes[c] = 1;
    centroids[c] = points[donor];
  }
}

std::vector<Vec3> means(std::span<const Vec3> points, std::span<const std::uint32_t> labels, std::size_t k) {
  std::vector<Vec3> sums(k);
  std::vector<std::size_t> counts(k, 0);
  for (std::size_t i = 0; i < points.size(); ++i) {
    sums[labels[i]] = sums[labels[i]] + points[i];
    ++counts[labels[i]];
  }
  for (std::size_t c = 0; c < k; ++c) sums[c] = sums[c] * (1.0 / static_cast<double>(counts[c]));
  return sums;
}

std::vector<Vec3> kmeans_plus_plus(std::span<const Vec3> points, std::size_t k, SplitMix64& rng) {
  const std::size_t n = points.size();
  std::vector<Vec3> centroids;
  centroids.reserve(k);
  centroids.push_back(points[rng.below(n)]);

  std::vector<double> d2(n);
  for (std::size_t i = 0; i < n; ++i) d2[i] = squared_distance(points[i], centroids[0]);

  while (centroids.size() < k) {
    double total = 0.0;
    for (double d : d2) total += d;

    std::size_t pick = n;
    if (total > 0.0) {
      const double target = rng.uniform() * total;
      double acc = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (d2[i] == 0.0) continue;
        pick = i;
        acc += d2[i];
        if (acc > target) break;
      }
    } else {
      pick = rng.below(n);
    }
    centroids.push_back(points[pick]);
    for (std::size_t i = 0; i < n; ++i)
      d2[i] = std::min(d2[i], squared_distance(points[i], centroids.back()));
  }
  return centroids;
}

}  // namespace

double within_cluster_ss(std::span<const Vec3> points, std::span<const std::uint32_t> labels,
                         std::span<const Vec3> centroids) {
  double total = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) total += squared_distance(points[i], centroids[labels[i]]);
  return total;
}

PartitionAssignment kmeans_partition(std::span<const Vec3> points, int k, std::uint64_t seed) {
  if (k <= 0) throw Error("partition count must be positive");
  if (points.size() < static_cast<std::size_t>(k)) throw Error("more partitions than points");
  for (const Vec3& p : points)
    if (!is_finite(p)) throw Error("non-finite input");

  const auto kk = static_cast<std::size_t>(k);
  SplitMix64 rng(seed);
  PartitionAssignment out;
  out.n_partitions = k;

  std::vector<Vec3> centroids = kmeans_plus_plus(points, kk, rng);
  std::vector<std::uint32_t> labels = assign(points, centroids);
  repair_empty(points, labels, centroids);
  centroids = means(points, labels, kk);

  for (int iter = 1; iter <= kMaxIterations; ++iter) {
#ifndef NDEBUG
    const double before = within_cluster_ss(points, labels, centroids);
#endif
    std::vector<std::uint32_t> next = assign(points, centroids);
    repair_empty(points, next, centroids);
    out.iterations = iter;
    if (next == labels) {
      out.converged = true;
      break;
    }
    labels = std::move(next);
    centroids = means(points, labels, kk);
#ifndef NDEBUG
    const double after = within_cluster_ss(points, labels, centroids);
    assert(after <= before * (1.0 + 1e-12) + 1e-300);
#endif
  }

  out.labels = std::move(labels);
  out.centroids = std::move(centroids);
  return out;
}

std::vector<Partition> partition_points(std::span<const Vec3> points, const PartitionAssignment& assignment) {
  if (assignment.labels.size() != points.size()) throw Error("assignment length does not match point count");
  std::vector<Partition> parts(static_cast<std::size_t>(assignment.n_partitions));
  for (std::size_t i = 0; i < points.size(); ++i) {
    const std::uint32_t l = assignment.labels[i];
    if (l >= parts.size()) throw Error("partition label out of range");
    parts[l].points.push_back(points[i]);
    parts[l].indices.push_back(static_cast<std::uint32_t>(i));
  }
  return parts;
}

}  // namespace ellipsoid
