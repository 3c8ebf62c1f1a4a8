// Copyright 2026 The ellipsoid-repr Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef ELLIPSOID_BACKPROJECTION_HPP
#define ELLIPSOID_BACKPROJECTION_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "ellipsoid/representation.hpp"

namespace ellipsoid {

/// Per-pixel predictions for the metric nodes of a representation, in
/// HierarchicalRepresentation::metric_nodes() order. Exactly one of `labels`
/// (m*m per node) or `scores` (m*m*num_classes per node) is populated.
struct PixelLabelMap {
  int num_classes = 0;
  std::vector<std::vector<std::int32_t>> labels;
  std::vector<std::vector<double>> scores;

  bool has_scores() const { return !scores.empty(); }
};

enum class Provenance : std::uint8_t { mapped = 0, nn_filled = 1 };

struct SegmentationResult {
  std::vector<std::int32_t> labels;
  std::vector<Provenance> provenance;
};

/// Per-point labels from per-pixel predictions.
///
/// Each mapped point averages the scores (one-hot for hard labels) of every
/// pixel it fills and takes the argmax, lowest class on ties. Points that fill
/// no pixel copy the label of the nearest mapped point, lowest index on ties.
SegmentationResult backproject_labels(const HierarchicalRepresentation& rep, const PixelLabelMap& pixels,
                                      std::span<const Vec3> points);

/// Hard pixel labels equal to the ground-truth label of each pixel's point.
PixelLabelMap ground_truth_pixel_labels(const HierarchicalRepresentation& rep, std::span<const std::int32_t> gt);

/// Fraction of points that fill at least one metric-node pixel.
double point_usage_rate(const HierarchicalRepresentation& rep);

/// Mean IoU over `part_classes`; a class absent from both prediction and
/// ground truth scores 1. An empty `part_classes` means every class present
/// in either input.
double instance_miou(std::span<const std::int32_t> pred, std::span<const std::int32_t> gt,
                     std::span<const std::int32_t> part_classes = {});

/// Instance mIoU reached when every pixel carries its point's true label.
double max_segmentation_iou(const HierarchicalRepresentation& rep, std::span<const Vec3> points,
                            std::span<const std::int32_t> gt, std::span<const std::int32_t> part_classes = {});

}  // namespace ellipsoid

#endif  // ELLIPSOID_BACKPROJECTION_HPP
