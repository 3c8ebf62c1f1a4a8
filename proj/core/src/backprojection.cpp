// Copyright 2026 The ellipsoid-repr Authors
// SPDX-License-Identifier: Apache-2.0

#include "ellipsoid/backprojection.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ellipsoid/spatial_index.hpp"

namespace ellipsoid {
namespace {

void check_shapes(const HierarchicalRepresentation& rep, const PixelLabelMap& pixels, std::size_t n_points) {
  if (n_points != rep.n_points) throw Error("point count does not match representation");
  if (pixels.num_classes < 1) throw Error("pixel label map needs at least one class");
  const std::vector<std::size_t> nodes = rep.metric_nodes();
  const bool scores = pixels.has_scores();
  if (scores && !pixels.labels.empty()) throw Error("pixel label map holds both labels and scores");
  const std::size_t entries = scores ? pixels.scores.size() : pixels.labels.size();
  if (entries != nodes.size())
    throw Error("pixel label map has " + std::to_string(entries) + " nodes, representation has " +
                std::to_string(nodes.size()));

  const auto k = static_cast<std::size_t>(pixels.num_classes);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const std::size_t pix = rep.nodes[nodes[i]].map->point_index.size();
    if (scores) {
      if (pixels.scores[i].size() != pix * k)
        throw Error("score map size mismatch at metric node " + std::to_string(i));
      for (double s : pixels.scores[i])
        if (!std::isfinite(s)) throw Error("non-finite score at metric node " + std::to_string(i));
    } else {
      if (pixels.labels[i].size() != pix) throw Error("label map size mismatch at metric node " + std::to_string(i));
      for (std::int32_t l : pixels.labels[i])
        if (l < 0 || l >= pixels.num_classes) throw Error("pixel label out of range at metric node " + std::to_string(i));
    }
  }
}

}  // namespace

SegmentationResult backproject_labels(const HierarchicalRepresentation& rep, const PixelLabelMap& pixels,
                                      std::span<const Vec3> points) {
  check_shapes(rep, pixels, points.size());
  const std::size_t n = points.size();
  const auto k = static_cast<std::size_t>(pixels.num_classes);
  const std::vector<std::size_t> nodes = rep.metric_nodes();

  std::vector<double> sums(n * k, 0.0);
  std::vector<std::uint32_t> hits(n, 0);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const std::vector<std::uint32_t>& index = rep.nodes[nodes[i]].map->point_index;
    for (std::size_t px = 0; px < index.size(); ++px) {
      const std::uint32_t p = index[px];
      ++hits[p];
      double* row = sums.data() + p * k;
      if (pixels.has_scores()) {
        const double* s = pixels.scores[i].data() + px * k;
        for (std::size_t c = 0; c < k; ++c) row[c] += s[c];
      } else {
        row[static_cast<std::size_t>(pixels.labels[i][px])] += 1.0;
      }
    }
  }

  SegmentationResult out;
  out.labels.assign(n, 0);
  out.provenance.assign(n, Provenance::nn_filled);

  std::vector<Vec3> mapped_points;
  std::vector<std::uint32_t> mapped_ids;
  for (std::size_t p = 0; p < n; ++p) {
    if (hits[p] == 0) continue;
    const double inv = 1.0 / static_cast<double>(hits[p]);
    std::size_t best = 0;
    double best_mean = sums[p * k] * inv;
    for (std::size_t c = 1; c < k; ++c) {
      const double mean = sums[p * k + c] * inv;
      if (mean > best_mean) {
        best_mean = mean;
        best = c;
      }
    }
    out.labels[p] = static_cast<std::int32_t>(best);
    out.provenance[p] = Provenance::mapped;
    mapped_points.push_back(points[p]);
    mapped_ids.push_back(static_cast<std::uint32_t>(p));
  }

  if (mapped_ids.size() < n) {
    // Dense maps always contribute at least one mapped point.
    const NNIndex index(mapped_points);
    for (std::size_t p = 0; p < n; ++p) {
      if (hits[p] != 0) continue;
      out.labels[p] = out.labels[mapped_ids[index.nearest(points[p]).index]];
    }
  }
  return out;
}

PixelLabelMap ground_truth_pixel_labels(const HierarchicalRepresentation& rep, std::span<const std::int32_t> gt) {
  if (gt.size() != rep.n_points) throw Error("label count does not match representation");
  std::int32_t max_label = 0;
  for (std::int32_t l : gt) {
    if (l < 0) throw Error("negative ground-truth label");
    max_label = std::max(max_label, l);
  }
  PixelLabelMap out;
  out.num_classes = max_label + 1;
  for (std::size_t n : rep.metric_nodes()) {
    const std::vector<std::uint32_t>& index = rep.nodes[n].map->point_index;
    std::vector<std::int32_t> labels(index.size());
    for (std::size_t px = 0; px < index.size(); ++px) labels[px] = gt[index[px]];
    out.labels.push_back(std::move(labels));
  }
  return out;
}

double point_usage_rate(const HierarchicalRepresentation& rep) {
  if (rep.n_points == 0) return 0.0;
  const std::vector<bool> used = usage_mask(rep);
  const auto count = static_cast<double>(std::count(used.begin(), used.end(), true));
  return count / static_cast<double>(rep.n_points);
}

double instance_miou(std::span<const std::int32_t> pred, std::span<const std::int32_t> gt,
                     std::span<const std::int32_t> part_classes) {
  if (pred.size() != gt.size()) throw Error("prediction and ground-truth lengths differ");

  std::vector<std::int32_t> classes(part_classes.begin(), part_classes.end());
  if (classes.empty()) {
    classes.assign(pred.begin(), pred.end());
    classes.insert(classes.end(), gt.begin(), gt.end());
    std::sort(classes.begin(), classes.end());
    classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
  }
  if (classes.empty()) return 1.0;

  double total = 0.0;
  for (std::int32_t c : classes) {
    std::size_t inter = 0;
    std::size_t uni = 0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
      const bool p = pred[i] == c;
      const bool g = gt[i] == c;
      inter += (p && g) ? 1 : 0;
      uni += (p || g) ? 1 : 0;
    }
    total += uni == 0 ? 1.0 : static_cast<double>(inter) / static_cast<double>(uni);
  }
  return total / static_cast<double>(classes.size());
}

double max_segmentation_iou(const HierarchicalRepresentation& rep, std::span<const Vec3> points,
                            std::span<const std::int32_t> gt, std::span<const std::int32_t> part_classes) {
  const PixelLabelMap pixels = ground_truth_pixel_labels(rep, gt);
  const SegmentationResult seg = backproject_labels(rep, pixels, points);
  return instance_miou(seg.labels, gt, part_classes);
}

}  // namespace ellipsoid
