// Copyright 2026 The ellipsoid-repr Authors
// SPDX-License-Identifier: Apache-2.0

#include "ellipsoid/representation.hpp"

#include <algorithm>
#include <string>

#include "ellipsoid/decomposition.hpp"
#include "ellipsoid/parallel.hpp"
#include "ellipsoid/spatial_index.hpp"

namespace ellipsoid {

void ChannelLayout::validate() const {
  constexpr std::uint8_t known = kWorldPosition | kLocalPosition | kSphereAnchor | kPixelCoords;
  if (flags == 0) throw Error("channel layout has no groups enabled");
  if ((flags & ~known) != 0) throw Error("channel layout has unknown flags");
}

int RepresentationConfig::partitions_at(int level) const {
  if (level < 1 || partitions.empty()) throw Error("no partition count for level " + std::to_string(level));
  const auto i = std::min(static_cast<std::size_t>(level - 1), partitions.size() - 1);
  return partitions[i];
}

void RepresentationConfig::validate() const {
  if (levels < 1) throw Error("levels must be at least 1");
  if (resolution < 1) throw Error("resolution must be at least 1");
  layout.validate();
  if (levels > 1) {
    if (partitions.empty()) throw Error("partition count required for multi-level representation");
    for (int k : partitions)
      if (k < 1) throw Error("partition count must be positive");
  }
}

std::vector<std::size_t> HierarchicalRepresentation::metric_nodes() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (nodes[i].level == levels - 1 && nodes[i].map) out.push_back(i);
  return out;
}

FeatureMap fill_feature_map(const EllipsoidFrame& frame, std::span<const Vec3> points,
                            std::span<const std::uint32_t> global_indices, int m, ChannelLayout layout,
                            AnchorMode mode) {
  if (m < 1) throw Error("resolution must be at least 1");
  if (global_indices.size() != points.size()) throw Error("global index count does not match point count");
  layout.validate();

  const NNIndex index(points);
  const auto channels = static_cast<std::size_t>(layout.channels());
  const auto pixels = static_cast<std::size_t>(m) * static_cast<std::size_t>(m);

  FeatureMap map;
  map.m = m;
  map.layout = layout;
  map.data.resize(pixels * channels);
  map.point_index.resize(pixels);

  for (int v = 0; v < m; ++v) {
    for (int u = 0; u < m; ++u) {
      const Vec3 unit = sphere_anchor(u, v, m, mode);
      const Neighbor nn = index.nearest(anchor_world(frame, unit));
      const Vec3& p = points[nn.index];
      const std::size_t pixel = map.pixel_offset(u, v);
      map.point_index[pixel] = global_indices[nn.index];

      double* out = map.data.data() + pixel * channels;
      auto put = [&out](Vec3 x) {
        *out++ = x.x;
        *out++ = x.y;
        *out++ = x.z;
      };
      if (layout.has(kWorldPosition)) put(p);
      if (layout.has(kLocalPosition)) put(to_local(frame, p));
      if (layout.has(kSphereAnchor)) put(unit);
      if (layout.has(kPixelCoords)) {
        *out++ = static_cast<double>(u) / m;
        *out++ = static_cast<double>(v) / m;
      }
    }
  }
  return map;
}

SingleRepresentation represent_single(std::span<const Vec3> points, std::span<const std::uint32_t> global_indices,
                                      int m, ChannelLayout layout, AnchorMode mode, bool spherical) {
  SingleRepresentation out;
  out.frame = spherical ? circumsphere_frame(points) : pca_frame(points);
  out.feature = ellipsoid_feature(out.frame);
  out.map = fill_feature_map(out.frame, points, global_indices, m, layout, mode);
  return out;
}

namespace {

std::vector<Vec3> gather(std::span<const Vec3> points, std::span<const std::uint32_t> indices) {
  std::vector<Vec3> out;
  out.reserve(indices.size());
  for (std::uint32_t i : indices) out.push_back(points[i]);
  return out;
}

}  // namespace

HierarchicalRepresentation represent_hierarchical(std::span<const Vec3> points, const RepresentationConfig& config) {
  config.validate();
  if (points.empty()) throw Error("empty point cloud");
  if (points.size() >= 0xFFFFFFFFu) throw Error("point cloud too large");
  for (const Vec3& p : points)
    if (!is_finite(p)) throw Error("non-finite input");

  const int threads = resolve_threads(config.threads);

  HierarchicalRepresentation rep;
  rep.n_points = static_cast<std::uint32_t>(points.size());
  rep.levels = config.levels;
  rep.layout = config.layout;
  rep.anchor = config.anchor;

  EllipsoidNode root;
  root.level = 0;
  root.members.resize(points.size());
  for (std::uint32_t i = 0; i < rep.n_points; ++i) root.members[i] = i;
  rep.nodes.push_back(std::move(root));

  std::size_t level_begin = 0;
  for (int level = 1; level < config.levels; ++level) {
    const std::size_t level_end = rep.nodes.size();
    const int k = config.partitions_at(level);
    for (std::size_t p = level_begin; p < level_end; ++p)
      if (rep.nodes[p].members.size() < static_cast<std::size_t>(k)) throw Error("cloud too small for partition count");

    std::vector<PartitionAssignment> splits(level_end - level_begin);
    parallel_for(splits.size(), threads, [&](std::size_t i) {
      const std::size_t parent = level_begin + i;
      const std::vector<Vec3> sub = gather(points, rep.nodes[parent].members);
      splits[i] = kmeans_partition(sub, k, config.seed + parent);
    });

    for (std::size_t i = 0; i < splits.size(); ++i) {
      const std::size_t parent = level_begin + i;
      std::vector<EllipsoidNode> children(static_cast<std::size_t>(k));
      for (std::size_t j = 0; j < splits[i].labels.size(); ++j)
        children[splits[i].labels[j]].members.push_back(rep.nodes[parent].members[j]);
      for (EllipsoidNode& child : children) {
        child.level = level;
        child.parent = static_cast<std::uint32_t>(parent);
        rep.nodes.push_back(std::move(child));
      }
    }
    level_begin = level_end;
  }

  parallel_for(rep.nodes.size(), threads, [&](std::size_t i) {
    EllipsoidNode& node = rep.nodes[i];
    const std::vector<Vec3> sub = gather(points, node.members);
    const bool wants_map = node.level > 0 || config.levels == 1 || config.root_map;
    if (wants_map) {
      SingleRepresentation single =
          represent_single(sub, node.members, config.resolution, config.layout, config.anchor, config.spherical_baseline);
      node.frame = single.frame;
      node.feature = single.feature;
      node.map = std::move(single.map);
    } else {
      node.frame = config.spherical_baseline ? circumsphere_frame(sub) : pca_frame(sub);
      node.feature = ellipsoid_feature(node.frame);
    }
  });
  return rep;
}

std::vector<bool> usage_mask(const HierarchicalRepresentation& rep) {
  std::vector<bool> used(rep.n_points, false);
  for (std::size_t n : rep.metric_nodes())
    for (std::uint32_t i : rep.nodes[n].map->point_index) used[i] = true;
  return used;
}

}  // namespace ellipsoid
