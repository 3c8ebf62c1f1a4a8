// Copyright 2026 The ellipsoid-repr Authors
// SPDX-License-Identifier: Apache-2.0
//
// Dataset manifests and the representation-quality metric sweep.
//
// Manifest (JSON):
//   {
//     "root": "clouds",                       // optional, relative to the manifest
//     "categories": {"airplane": [0, 1, 2, 3], ...},
//     "entries": [
//       {"cloud": "a.xyz", "category": "airplane"},                  // labels in column 4
//       {"cloud": "b.xyz", "labels": "b.seg", "category": "airplane"} // one label per line
//     ]
//   }

#ifndef ELLIPSOID_DATASET_HPP
#define ELLIPSOID_DATASET_HPP

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ellipsoid/representation.hpp"
#include "ellipsoid/types.hpp"

namespace ellipsoid {

struct ManifestEntry {
  std::filesystem::path cloud;
  std::optional<std::filesystem::path> labels;
  std::string category;
};

struct DatasetManifest {
  std::filesystem::path root;
  std::map<std::string, std::vector<std::int32_t>> categories;
  std::vector<ManifestEntry> entries;
};

/// Parses manifest JSON; relative paths resolve against `base_dir`. Checks
/// that every referenced file exists and every category is declared.
DatasetManifest parse_manifest(std::string_view json_text, const std::filesystem::path& base_dir);
DatasetManifest load_manifest(const std::filesystem::path& path);

/// A labeled cloud plus the part classes of its category.
struct LabeledObject {
  PointCloud cloud;
  std::vector<std::int32_t> part_classes;
};

/// Loads one entry. Labels must exist and belong to the category's part classes.
LabeledObject load_object(const DatasetManifest& manifest, std::size_t entry);

struct ObjectMetrics {
  double usage = 0.0;
  double max_iou = 0.0;
};

ObjectMetrics measure_object(const LabeledObject& object, const RepresentationConfig& config);

/// Cartesian sweep. Level counts of 1 ignore the partition list.
struct SweepConfig {
  std::vector<int> levels{2};
  std::vector<int> partitions{36};
  std::vector<int> resolutions{32};
  RepresentationConfig base;
};

struct MetricsRow {
  int levels = 0;
  int partitions = 0;  // 0 for single-level rows
  int resolution = 0;
  bool spherical = false;
  std::size_t objects = 0;
  double usage = 0.0;    // mean point usage rate over objects
  double max_iou = 0.0;  // mean instance mIoU upper bound over objects
};

/// Objects are processed on `threads` workers; means are reduced in input
/// order so the result does not depend on scheduling.
std::vector<MetricsRow> run_metrics(std::span<const LabeledObject> objects, const SweepConfig& sweep, int threads);

std::string format_metrics_tsv(std::span<const MetricsRow> rows);

}  // namespace ellipsoid

#endif  // ELLIPSOID_DATASET_HPP
