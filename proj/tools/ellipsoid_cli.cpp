// Copyright 2026 The ellipsoid-repr Authors
// SPDX-License-Identifier: Apache-2.0
//
// ellipsoid: command-line front end.
//
//   repr        point cloud -> .efm representation
//   metrics     usage rate / max segmentation IoU sweep as TSV
//   backproject per-pixel predictions -> per-point labels
//   bench       wall time of represent_hierarchical
//   plotdata    per-pixel TSV dump for figures
//
// Exit codes: 0 ok, 1 internal error, 2 usage, 3 bad input, 4 bad .efm file.
// Errors go to stderr as "error<TAB>kind<TAB>message".

#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "ellipsoid/augment.hpp"
#include "ellipsoid/backprojection.hpp"
#include "ellipsoid/dataset.hpp"
#include "ellipsoid/efm.hpp"
#include "ellipsoid/io.hpp"
#include "ellipsoid/synthetic.hpp"

namespace {

using namespace ellipsoid;

enum Exit { kOk = 0, kInternal = 1, kUsage = 2, kInput = 3, kFormat = 4 };

struct ReprArgs {
  std::string input;
  std::string output;
  int levels = 2;
  std::vector<int> partitions{36};
  int resolution = 32;
  std::string channels = "local";
  std::string anchor = "centered";
  std::uint64_t seed = 0;
  bool spherical = false;
  bool no_root_map = false;
  bool augment = false;
  std::string rotation = "up_axis";
  double jitter_sigma = 0.01;
  double jitter_clip = 0.05;
  int threads = 0;
};

struct MetricsArgs {
  std::string manifest;
  std::string output;
  std::vector<int> levels{1, 2};
  std::vector<int> partitions{16, 25, 36};
  std::vector<int> resolutions{16, 32, 64};
  std::string anchor = "centered";
  std::uint64_t seed = 0;
  bool spherical = false;
  std::size_t objects = 20;
  std::size_t points = 2048;
  std::uint64_t suite_seed = 2026;
  int threads = 0;
};

struct BackprojectArgs {
  std::string efm;
  std::string pixel_labels;
  std::string input;
  std::string output;
};

struct BenchArgs {
  std::string input;
  int repeat = 20;
  int warmup = 2;
  int levels = 2;
  int partitions = 36;
  int resolution = 32;
  int threads = 1;
};

struct PlotArgs {
  std::string efm;
  std::string input;
  std::string output;
};

ChannelLayout parse_channels(const std::string& s) {
  if (s == "local") return ChannelLayout::local_only();
  if (s == "full") return ChannelLayout::full();
  throw Error("unknown channel set '" + s + "'");
}

AnchorMode parse_anchor(const std::string& s) {
  if (s == "centered") return AnchorMode::centered;
  if (s == "paper") return AnchorMode::paper;
  throw Error("unknown anchor mode '" + s + "'");
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::fwrite(text.data(), 1, text.size(), stdout);
    return;
  }
  write_file_atomic(path, text);
}

int run_repr(const ReprArgs& a) {
  PointCloud cloud = load_xyz(a.input);
  if (a.augment) cloud = augment(cloud, a.seed, {parse_rotation_mode(a.rotation), a.jitter_sigma, a.jitter_clip});

  RepresentationConfig config;
  config.levels = a.levels;
  config.partitions = a.partitions;
  config.resolution = a.resolution;
  config.layout = parse_channels(a.channels);
  config.anchor = parse_anchor(a.anchor);
  config.seed = a.seed;
  config.spherical_baseline = a.spherical;
  config.root_map = !a.no_root_map;
  config.threads = a.threads;

  const HierarchicalRepresentation rep = represent_hierarchical(cloud.points, config);
  write_efm(rep, a.output);
  fmt::print(stderr, "wrote {} nodes, usage {:.4f}\n", rep.nodes.size(), point_usage_rate(rep));
  return kOk;
}

int run_metrics(const MetricsArgs& a) {
  std::vector<LabeledObject> objects;
  if (!a.manifest.empty()) {
    const DatasetManifest manifest = load_manifest(a.manifest);
    for (std::size_t i = 0; i < manifest.entries.size(); ++i) objects.push_back(load_object(manifest, i));
  } else {
    for (PointCloud& cloud : synthetic_suite(a.objects, a.points, a.suite_seed)) objects.push_back({std::move(cloud), {}});
  }
  if (objects.empty()) throw Error("no objects to measure");

  SweepConfig sweep;
  sweep.levels = a.levels;
  sweep.partitions = a.partitions;
  sweep.resolutions = a.resolutions;
  sweep.base.anchor = parse_anchor(a.anchor);
  sweep.base.seed = a.seed;
  sweep.base.spherical_baseline = a.spherical;
  sweep.base.threads = 1;
  emit(a.output, format_metrics_tsv(ellipsoid::run_metrics(objects, sweep, a.threads)));
  return kOk;
}

int run_backproject(const BackprojectArgs& a) {
  const HierarchicalRepresentation rep = read_efm(a.efm);
  const PixelLabelMap pixels = load_pixel_labels(a.pixel_labels);
  const PointCloud cloud = load_xyz(a.input);
  const SegmentationResult seg = backproject_labels(rep, pixels, cloud.points);
  std::string out;
  for (std::int32_t l : seg.labels) out += fmt::format("{}\n", l);
  emit(a.output, out);
  return kOk;
}

int run_bench(const BenchArgs& a) {
  const PointCloud cloud = load_xyz(a.input);
  RepresentationConfig config;
  config.levels = a.levels;
  config.partitions = {a.partitions};
  config.resolution = a.resolution;
  config.threads = a.threads;
  if (a.repeat < 1) throw Error("repeat must be at least 1");

  for (int i = 0; i < a.warmup; ++i) represent_hierarchical(cloud.points, config);
  std::vector<double> ms;
  for (int i = 0; i < a.repeat; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    const HierarchicalRepresentation rep = represent_hierarchical(cloud.points, config);
    const auto t1 = std::chrono::steady_clock::now();
    ms.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  double mean = 0.0;
  for (double t : ms) mean += t;
  mean /= static_cast<double>(ms.size());
  double var = 0.0;
  for (double t : ms) var += (t - mean) * (t - mean);
  const double sd = ms.size() > 1 ? std::sqrt(var / static_cast<double>(ms.size() - 1)) : 0.0;
  fmt::print("points\tlevels\tpartitions\tresolution\tthreads\trepeat\tmean_ms\tstddev_ms\n");
  fmt::print("{}\t{}\t{}\t{}\t{}\t{}\t{:.3f}\t{:.3f}\n", cloud.size(), a.levels, a.partitions, a.resolution, a.threads,
             a.repeat, mean, sd);
  return kOk;
}

int run_plotdata(const PlotArgs& a) {
  const HierarchicalRepresentation rep = read_efm(a.efm);
  std::vector<Vec3> points;
  if (!a.input.empty()) {
    points = load_xyz(a.input).points;
    if (points.size() != rep.n_points) throw Error("point count does not match representation");
  }
  const std::vector<std::size_t> metric = rep.metric_nodes();

  std::string out = "# pixels\nnode\tlevel\tmetric\tu\tv\tanchor_x\tanchor_y\tanchor_z\tpoint";
  if (!points.empty()) out += "\tpoint_x\tpoint_y\tpoint_z";
  out += "\n";
  for (std::size_t n = 0; n < rep.nodes.size(); ++n) {
    const EllipsoidNode& node = rep.nodes[n];
    if (!node.map) continue;
    const bool is_metric = std::find(metric.begin(), metric.end(), n) != metric.end();
    for (int v = 0; v < node.map->m; ++v) {
      for (int u = 0; u < node.map->m; ++u) {
        const Vec3 anchor = anchor_world(node.frame, sphere_anchor(u, v, node.map->m, rep.anchor));
        const std::uint32_t p = node.map->index_at(u, v);
        out += fmt::format("{}\t{}\t{}\t{}\t{}\t{:.9g}\t{:.9g}\t{:.9g}\t{}", n, node.level, is_metric ? 1 : 0, u, v,
                           anchor.x, anchor.y, anchor.z, p);
        if (!points.empty()) out += fmt::format("\t{:.9g}\t{:.9g}\t{:.9g}", points[p].x, points[p].y, points[p].z);
        out += "\n";
      }
    }
  }

  out += "# usage\npoint\tused\n";
  const std::vector<bool> used = usage_mask(rep);
  for (std::size_t i = 0; i < used.size(); ++i) out += fmt::format("{}\t{}\n", i, used[i] ? 1 : 0);
  emit(a.output, out);
  return kOk;
}

void report(const char* kind, const std::string& message) { fmt::print(stderr, "error\t{}\t{}\n", kind, message); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ellipsoid point-cloud representation tool", "ellipsoid"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "0.1.0");

  ReprArgs repr;
  auto* c_repr = app.add_subcommand("repr", "Build a hierarchical representation and write it as .efm");
  c_repr->add_option("--input", repr.input, "Point cloud (.xyz)")->required()->check(CLI::ExistingFile);
  c_repr->add_option("--output", repr.output, "Output .efm path")->required();
  c_repr->add_option("--levels", repr.levels, "Hierarchy depth")->capture_default_str();
  c_repr->add_option("--partitions", repr.partitions, "Partitions per level (last value repeats)")
      ->capture_default_str()->delimiter(',');
  c_repr->add_option("--resolution", repr.resolution, "Feature map size m")->capture_default_str();
  c_repr->add_option("--channels", repr.channels, "local | full")->capture_default_str();
  c_repr->add_option("--anchor", repr.anchor, "centered | paper")->capture_default_str();
  c_repr->add_option("--seed", repr.seed, "Seed for k-means and augmentation")->capture_default_str();
  c_repr->add_flag("--spherical-baseline", repr.spherical, "Use circumsphere frames");
  c_repr->add_flag("--no-root-map", repr.no_root_map, "Skip the level-0 map in multi-level output");
  c_repr->add_flag("--augment", repr.augment, "Rotate and jitter before representing");
  c_repr->add_option("--rotation", repr.rotation, "none | up_axis | so3")->capture_default_str();
  c_repr->add_option("--jitter-sigma", repr.jitter_sigma)->capture_default_str();
  c_repr->add_option("--jitter-clip", repr.jitter_clip)->capture_default_str();
  c_repr->add_option("--threads", repr.threads, "Worker threads (0: ELLIPSOID_THREADS or all cores)");

  MetricsArgs metrics;
  auto* c_metrics = app.add_subcommand("metrics", "Usage rate and max segmentation IoU sweep");
  c_metrics->add_option("--manifest", metrics.manifest, "Dataset manifest (.json); synthetic suite if omitted")
      ->check(CLI::ExistingFile);
  c_metrics->add_option("--output", metrics.output, "TSV path (default stdout)");
  c_metrics->add_option("--levels", metrics.levels)->delimiter(',')->capture_default_str();
  c_metrics->add_option("--partitions", metrics.partitions)->delimiter(',')->capture_default_str();
  c_metrics->add_option("--resolution", metrics.resolutions)->delimiter(',')->capture_default_str();
  c_metrics->add_option("--anchor", metrics.anchor)->capture_default_str();
  c_metrics->add_option("--seed", metrics.seed)->capture_default_str();
  c_metrics->add_flag("--spherical-baseline", metrics.spherical);
  c_metrics->add_option("--objects", metrics.objects, "Synthetic suite size")->capture_default_str();
  c_metrics->add_option("--points", metrics.points, "Points per synthetic object")->capture_default_str();
  c_metrics->add_option("--suite-seed", metrics.suite_seed)->capture_default_str();
  c_metrics->add_option("--threads", metrics.threads);

  BackprojectArgs bp;
  auto* c_bp = app.add_subcommand("backproject", "Per-pixel predictions to per-point labels");
  c_bp->add_option("--efm", bp.efm)->required()->check(CLI::ExistingFile);
  c_bp->add_option("--pixel-labels", bp.pixel_labels)->required()->check(CLI::ExistingFile);
  c_bp->add_option("--input", bp.input, "The represented point cloud")->required()->check(CLI::ExistingFile);
  c_bp->add_option("--output", bp.output, "Labels path (default stdout)");

  BenchArgs bench;
  auto* c_bench = app.add_subcommand("bench", "Time represent_hierarchical");
  c_bench->add_option("--input", bench.input)->required()->check(CLI::ExistingFile);
  c_bench->add_option("--repeat", bench.repeat)->capture_default_str();
  c_bench->add_option("--warmup", bench.warmup)->capture_default_str();
  c_bench->add_option("--levels", bench.levels)->capture_default_str();
  c_bench->add_option("--partitions", bench.partitions)->capture_default_str();
  c_bench->add_option("--resolution", bench.resolution)->capture_default_str();
  c_bench->add_option("--threads", bench.threads)->capture_default_str();

  PlotArgs plot;
  auto* c_plot = app.add_subcommand("plotdata", "Dump anchors, mapped points and usage as TSV");
  c_plot->add_option("--efm", plot.efm)->required()->check(CLI::ExistingFile);
  c_plot->add_option("--input", plot.input, "Point cloud, adds mapped point positions")->check(CLI::ExistingFile);
  c_plot->add_option("--output", plot.output, "TSV path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    report("usage", e.what());
    return kUsage;
  }

  try {
    if (*c_repr) return run_repr(repr);
    if (*c_metrics) return run_metrics(metrics);
    if (*c_bp) return run_backproject(bp);
    if (*c_bench) return run_bench(bench);
    if (*c_plot) return run_plotdata(plot);
  } catch (const EfmError& e) {
    report("format", e.what());
    return kFormat;
  } catch (const Error& e) {
    report("input", e.what());
    return kInput;
  } catch (const std::exception& e) {
    report("internal", e.what());
    return kInternal;
  }
  return kUsage;
}
