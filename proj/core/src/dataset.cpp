// Copyright 2026 The ellipsoid-repr Authors
// SPDX-License-Identifier: Apache-2.0

#include "ellipsoid/dataset.hpp"

#include <algorithm>
#include <iterator>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "ellipsoid/backprojection.hpp"
#include "ellipsoid/io.hpp"
#include "ellipsoid/parallel.hpp"

namespace ellipsoid {
namespace {

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  const std::filesystem::path path(p);
  return path.is_absolute() ? path : base / path;
}

void require_file(const std::filesystem::path& p) {
  if (!std::filesystem::is_regular_file(p)) throw Error("manifest references missing file " + p.string());
}

}  // namespace

DatasetManifest parse_manifest(std::string_view json_text, const std::filesystem::path& base_dir) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(std::string("manifest: ") + e.what());
  }

  DatasetManifest manifest;
  try {
    manifest.root = base_dir;
    if (doc.contains("root")) manifest.root = resolve(base_dir, doc.at("root").get<std::string>());

    for (const auto& [name, parts] : doc.at("categories").items())
      manifest.categories[name] = parts.get<std::vector<std::int32_t>>();

    for (const auto& item : doc.at("entries")) {
      ManifestEntry entry;
      entry.cloud = resolve(manifest.root, item.at("cloud").get<std::string>());
      if (item.contains("labels")) entry.labels = resolve(manifest.root, item.at("labels").get<std::string>());
      entry.category = item.at("category").get<std::string>();
      manifest.entries.push_back(std::move(entry));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("manifest: ") + e.what());
  }

  for (const ManifestEntry& entry : manifest.entries) {
    if (!manifest.categories.contains(entry.category))
      throw Error("manifest entry " + entry.cloud.string() + " has undeclared category '" + entry.category + "'");
    require_file(entry.cloud);
    if (entry.labels) require_file(*entry.labels);
  }
  return manifest;
}

DatasetManifest load_manifest(const std::filesystem::path& path) {
  return parse_manifest(read_text_file(path), path.parent_path());
}

LabeledObject load_object(const DatasetManifest& manifest, std::size_t entry) {
  const ManifestEntry& e = manifest.entries.at(entry);
  LabeledObject object;
  object.cloud = load_xyz(e.cloud);
  if (e.labels) object.cloud.labels = load_labels(*e.labels);
  if (!object.cloud.has_labels()) throw Error(e.cloud.string() + ": no labels");
  if (object.cloud.labels.size() != object.cloud.size())
    throw Error(e.cloud.string() + ": label count does not match point count");

  object.part_classes = manifest.categories.at(e.category);
  for (std::int32_t l : object.cloud.labels)
    if (std::find(object.part_classes.begin(), object.part_classes.end(), l) == object.part_classes.end())
      throw Error(fmt::format("{}: label {} is not a part of category '{}'", e.cloud.string(), l, e.category));
  return object;
}

ObjectMetrics measure_object(const LabeledObject& object, const RepresentationConfig& config) {
  const HierarchicalRepresentation rep = represent_hierarchical(object.cloud.points, config);
  ObjectMetrics m;
  m.usage = point_usage_rate(rep);
  m.max_iou = max_segmentation_iou(rep, object.cloud.points, object.cloud.labels, object.part_classes);
  return m;
}

std::vector<MetricsRow> run_metrics(std::span<const LabeledObject> objects, const SweepConfig& sweep, int threads) {
  std::vector<MetricsRow> rows;
  for (int levels : sweep.levels) {
    const std::vector<int> partitions = levels > 1 ? sweep.partitions : std::vector<int>{0};
    for (int k : partitions) {
      for (int m : sweep.resolutions) {
        RepresentationConfig config = sweep.base;
        config.levels = levels;
        config.resolution = m;
        config.threads = 1;
        if (levels > 1) config.partitions = {k};

        std::vector<ObjectMetrics> per_object(objects.size());
        parallel_for(objects.size(), threads, [&](std::size_t i) { per_object[i] = measure_object(objects[i], config); });

        MetricsRow row;
        row.levels = levels;
        row.partitions = k;
        row.resolution = m;
        row.spherical = config.spherical_baseline;
        row.objects = objects.size();
        for (const ObjectMetrics& om : per_object) {
          row.usage += om.usage;
          row.max_iou += om.max_iou;
        }
        if (!objects.empty()) {
          row.usage /= static_cast<double>(objects.size());
          row.max_iou /= static_cast<double>(objects.size());
        }
        rows.push_back(row);
      }
    }
  }
  return rows;
}

std::string format_metrics_tsv(std::span<const MetricsRow> rows) {
  fmt::memory_buffer out;
  fmt::format_to(std::back_inserter(out), "levels\tpartitions\tresolution\trepresentation\tobjects\tpoint_usage_rate\tmax_seg_iou\n");
  for (const MetricsRow& r : rows) {
    fmt::format_to(std::back_inserter(out), "{}\t{}\t{}\t{}\t{}\t{:.6f}\t{:.6f}\n", r.levels, r.partitions, r.resolution,
                   r.spherical ? "spherical" : "ellipsoid", r.objects, r.usage, r.max_iou);
  }
  return fmt::to_string(out);
}

}  // namespace ellipsoid
