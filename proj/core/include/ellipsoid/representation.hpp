// Copyright 2026 The ellipsoid-repr Authors
// SPDX-License-Identifier: Apache-2.0
//
// Ellipsoid feature maps and the multi-level hierarchy built from them.
//
// A feature map is filled from the map side: every pixel owns an anchor on
// the fitted ellipsoid surface and takes the cloud point nearest to it, so no
// pixel is ever left empty.

#ifndef ELLIPSOID_REPRESENTATION_HPP
#define ELLIPSOID_REPRESENTATION_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ellipsoid/geometry.hpp"
#include "ellipsoid/types.hpp"

namespace ellipsoid {

enum ChannelGroup : std::uint8_t {
  kWorldPosition = 1u << 0,  // 3 channels: point position in world space
  kLocalPosition = 1u << 1,  // 3 channels: to_local(frame, point)
  kSphereAnchor = 1u << 2,   // 3 channels: unit-sphere direction of the pixel
  kPixelCoords = 1u << 3,    // 2 channels: u/m, v/m
};

/// Enabled channel groups. Channels are laid out in the group order above.
struct ChannelLayout {
  std::uint8_t flags = kLocalPosition;

  static constexpr ChannelLayout local_only() { return {kLocalPosition}; }
  static constexpr ChannelLayout full() {
    return {static_cast<std::uint8_t>(kWorldPosition | kLocalPosition | kSphereAnchor | kPixelCoords)};
  }

  constexpr bool has(ChannelGroup g) const { return (flags & g) != 0; }
  constexpr int channels() const {
    return (has(kWorldPosition) ? 3 : 0) + (has(kLocalPosition) ? 3 : 0) + (has(kSphereAnchor) ? 3 : 0) +
           (has(kPixelCoords) ? 2 : 0);
  }
  /// Throws unless at least one known group is set and no unknown bits are.
  void validate() const;

  friend constexpr bool operator==(ChannelLayout, ChannelLayout) = default;
};

/// Dense m x m x C map. Pixel (u, v) lives at row v, column u; channel values
/// are stored contiguously per pixel.
struct FeatureMap {
  int m = 0;
  ChannelLayout layout;
  std::vector<double> data;                // m * m * C
  std::vector<std::uint32_t> point_index;  // m * m, global point indices

  std::size_t pixel_offset(int u, int v) const { return static_cast<std::size_t>(v) * static_cast<std::size_t>(m) + static_cast<std::size_t>(u); }
  std::uint32_t index_at(int u, int v) const { return point_index[pixel_offset(u, v)]; }
  std::span<const double> features_at(int u, int v) const {
    const auto c = static_cast<std::size_t>(layout.channels());
    return std::span<const double>(data).subspan(pixel_offset(u, v) * c, c);
  }

  friend bool operator==(const FeatureMap&, const FeatureMap&) = default;
};

struct EllipsoidNode {
  int level = 0;
  std::optional<std::uint32_t> parent;  // index into HierarchicalRepresentation::nodes
  std::vector<std::uint32_t> members;   // global indices, ascending
  /// Working frame. Derived from `feature` and excluded from equality, since
  /// serialized nodes carry only the feature.
  EllipsoidFrame frame;
  EllipsoidFeature feature;
  std::optional<FeatureMap> map;

  friend bool operator==(const EllipsoidNode& a, const EllipsoidNode& b) {
    return a.level == b.level && a.parent == b.parent && a.members == b.members && a.feature == b.feature &&
           a.map == b.map;
  }
};

struct RepresentationConfig {
  int levels = 2;
  /// Partition count for level l >= 1 is partitions[min(l - 1, size - 1)].
  std::vector<int> partitions{36};
  int resolution = 32;
  ChannelLayout layout = ChannelLayout::local_only();
  AnchorMode anchor = AnchorMode::centered;
  std::uint64_t seed = 0;
  /// Emit the level-0 map when the hierarchy is deeper than one level. It is
  /// kept out of usage and IoU accounting either way.
  bool root_map = true;
  /// Replace every PCA frame by the circumsphere frame.
  bool spherical_baseline = false;
  /// Worker count for per-partition work; 0 resolves via resolve_threads().
  int threads = 0;

  int partitions_at(int level) const;
  void validate() const;
};

/// Nodes in breadth-first order: the root, then each level's children grouped
/// by parent and ordered by partition id.
struct HierarchicalRepresentation {
  std::uint32_t n_points = 0;
  int levels = 1;
  ChannelLayout layout;
  AnchorMode anchor = AnchorMode::centered;
  std::vector<EllipsoidNode> nodes;

  /// Nodes whose maps count towards usage and IoU: the deepest level's nodes
  /// that carry a map, in node order.
  std::vector<std::size_t> metric_nodes() const;

  friend bool operator==(const HierarchicalRepresentation&, const HierarchicalRepresentation&) = default;
};

struct SingleRepresentation {
  EllipsoidFrame frame;
  EllipsoidFeature feature;
  FeatureMap map;
};

/// Fills an m x m map for `points` inside an already fitted frame.
/// `global_indices[i]` is stored for pixels filled with `points[i]`.
FeatureMap fill_feature_map(const EllipsoidFrame& frame, std::span<const Vec3> points,
                            std::span<const std::uint32_t> global_indices, int m, ChannelLayout layout,
                            AnchorMode mode);

/// Fits a frame (PCA, or circumsphere when `spherical` is set) and fills its map.
SingleRepresentation represent_single(std::span<const Vec3> points, std::span<const std::uint32_t> global_indices,
                                      int m, ChannelLayout layout, AnchorMode mode, bool spherical = false);

/// Builds the hierarchy: the whole cloud at level 0, then each node of level
/// l - 1 split by k-means into partitions_at(l) children. The k-means seed for
/// a parent is config.seed + parent node index.
///
/// Output is identical for any thread count.
HierarchicalRepresentation represent_hierarchical(std::span<const Vec3> points, const RepresentationConfig& config);

/// Entry i is true iff point i fills some pixel of a metric node.
std::vector<bool> usage_mask(const HierarchicalRepresentation& rep);

}  // namespace ellipsoid

#endif  // ELLIPSOID_REPRESENTATION_HPP
