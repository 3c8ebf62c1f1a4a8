// Copyright 2026 The ellipsoid-repr Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <cstring>
#include <fstream>

#include "ellipsoid/augment.hpp"
#include "ellipsoid/dataset.hpp"
#include "ellipsoid/efm.hpp"
#include "ellipsoid/io.hpp"
#include "ellipsoid/synthetic.hpp"
#include "test_support.hpp"

using namespace ellipsoid;

namespace {

HierarchicalRepresentation sample_rep(ChannelLayout layout = ChannelLayout::full(), bool root_map = true) {
  RepresentationConfig c;
  c.levels = 2;
  c.partitions = {6};
  c.resolution = 8;
  c.layout = layout;
  c.root_map = root_map;
  c.threads = 1;
  return represent_hierarchical(synthetic_object(3, 400).points, c);
}

void put_u32(std::vector<std::uint8_t>& b, std::size_t at, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) b[at + static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(v >> (8 * i));
}

std::size_t rejected_at(const std::vector<std::uint8_t>& bytes) {
  try {
    decode_efm(bytes);
  } catch (const EfmError& e) {
    return e.offset();
  }
  FAIL("corrupted file was accepted");
  return 0;
}

}  // namespace

TEST_CASE("xyz parsing") {
  const PointCloud a = parse_xyz("# comment\n1 2 3\n  4.5\t-6 7e-1 \n\n");
  REQUIRE(a.size() == 2);
  CHECK_FALSE(a.has_labels());
  CHECK(a.points[1] == Vec3{4.5, -6, 0.7});

  const PointCloud b = parse_xyz("0 0 0 3\r\n1 1 1 -1\r\n");
  CHECK(b.labels == std::vector<std::int32_t>{3, -1});
}

TEST_CASE("xyz errors name the offending line") {
  CHECK_THROWS_WITH_AS(parse_xyz("1 2 3\n1 2\n"), "line 2: expected 3 or 4 columns", Error);
  CHECK_THROWS_WITH_AS(parse_xyz("1 2 3\n1 2 x\n"), "line 2: malformed coordinate", Error);
  CHECK_THROWS_WITH_AS(parse_xyz("1 2 3 0\n1 2 3\n"), "line 2: mixed labeled and unlabeled lines", Error);
  CHECK_THROWS_WITH_AS(parse_xyz("1 2 3 0.5\n"), "line 1: malformed label", Error);
  CHECK_THROWS_WITH_AS(parse_xyz("1 nan 3\n"), "line 1: non-finite coordinate", Error);
  CHECK_THROWS_WITH_AS(parse_xyz("# nothing\n"), "empty point cloud file", Error);
  CHECK_THROWS_AS(load_xyz("/nonexistent/cloud.xyz"), Error);
}

TEST_CASE("xyz round trip is exact") {
  const auto dir = testing::scratch_dir("xyz");
  const PointCloud cloud = synthetic_object(12, 300);
  write_xyz(cloud, dir / "c.xyz");
  const PointCloud back = load_xyz(dir / "c.xyz");
  CHECK(back.points == cloud.points);
  CHECK(back.labels == cloud.labels);
  CHECK(parse_labels("1\n2\n# x\n3\n") == std::vector<std::int32_t>{1, 2, 3});
  CHECK_THROWS_WITH_AS(parse_labels("1\n2 2\n"), "line 2: malformed label", Error);
}

TEST_CASE("augmentation") {
  const PointCloud cloud = synthetic_object(1, 500);

  AugmentOptions none{RotationMode::none, 0.0, 0.05};
  const PointCloud same = augment(cloud, 7, none);
  CHECK(same.points == cloud.points);
  CHECK(same.labels == cloud.labels);

  AugmentOptions up{RotationMode::up_axis, 0.0, 0.05};
  const PointCloud spun = augment(cloud, 7, up);
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    CHECK(spun.points[i].y == cloud.points[i].y);
    CHECK(std::hypot(spun.points[i].x, spun.points[i].z) ==
          doctest::Approx(std::hypot(cloud.points[i].x, cloud.points[i].z)).epsilon(1e-12));
  }

  AugmentOptions so3{RotationMode::so3, 0.0, 0.05};
  const PointCloud turned = augment(cloud, 8, so3);
  for (std::size_t i = 0; i < cloud.size(); ++i)
    CHECK(norm(turned.points[i]) == doctest::Approx(norm(cloud.points[i])).epsilon(1e-12));

  CHECK(augment(cloud, 9).points == augment(cloud, 9).points);
  CHECK(augment(cloud, 9).points != augment(cloud, 10).points);

  CHECK(parse_rotation_mode("so3") == RotationMode::so3);
  CHECK_THROWS_AS(parse_rotation_mode("spin"), Error);
  CHECK_THROWS_AS(augment(cloud, 1, {RotationMode::none, -1.0, 0.05}), Error);
}

TEST_CASE("jitter is clipped and roughly Gaussian") {
  PointCloud zeros;
  zeros.points.assign(100000 / 3 + 1, Vec3{});
  const PointCloud j = augment(zeros, 5, {RotationMode::none, 0.01, 0.05});
  double sum = 0.0;
  double sq = 0.0;
  std::size_t count = 0;
  for (const Vec3& p : j.points)
    for (int a = 0; a < 3; ++a) {
      CHECK(std::abs(p[a]) <= 0.05);
      sum += p[a];
      sq += p[a] * p[a];
      ++count;
    }
  CHECK(std::abs(sum / count) < 3e-4);
  CHECK(std::sqrt(sq / count) == doctest::Approx(0.01).epsilon(0.03));

  // A tight clip saturates most samples.
  const PointCloud c = augment(zeros, 5, {RotationMode::none, 1.0, 0.001});
  for (const Vec3& p : c.points) CHECK(std::abs(p.x) <= 0.001);
}

TEST_CASE("efm round trip") {
  for (ChannelLayout layout : {ChannelLayout::full(), ChannelLayout::local_only()}) {
    for (bool root_map : {true, false}) {
      const HierarchicalRepresentation rep = sample_rep(layout, root_map);
      const std::vector<std::uint8_t> bytes = encode_efm(rep);
      const HierarchicalRepresentation back = decode_efm(bytes);
      CHECK(back == rep);
      CHECK(encode_efm(back) == bytes);
      CHECK(back.nodes[0].map.has_value() == root_map);
    }
  }

  const auto dir = testing::scratch_dir("efm");
  const HierarchicalRepresentation rep = sample_rep();
  write_efm(rep, dir / "r.efm");
  CHECK(read_efm(dir / "r.efm") == rep);
  CHECK(read_binary_file(dir / "r.efm") == encode_efm(rep));
}

TEST_CASE("efm header layout") {
  const HierarchicalRepresentation rep = sample_rep();
  const std::vector<std::uint8_t> b = encode_efm(rep);
  CHECK(std::memcmp(b.data(), "EFM1", 4) == 0);
  CHECK(b[4] == 1);
  CHECK(b[8] == (400 & 0xFF));
  CHECK(b[9] == (400 >> 8));
  CHECK(b[12] == 7);
  CHECK(b[16] == 2);
  CHECK(b[20] == 11);
  CHECK(b[24] == 0);
  CHECK(b[25] == 0x0F);
  CHECK(b.size() > 28);
}

TEST_CASE("corrupted efm files are rejected with positions") {
  const std::vector<std::uint8_t> good = encode_efm(sample_rep());

  auto bad = good;
  bad[0] = 'X';
  CHECK(rejected_at(bad) == 0);

  bad = good;
  put_u32(bad, 4, 2);
  CHECK(rejected_at(bad) == 4);

  bad = good;
  put_u32(bad, 16, 0);
  CHECK(rejected_at(bad) == 16);

  bad = good;
  put_u32(bad, 20, 3);
  CHECK(rejected_at(bad) == 20);

  bad = good;
  bad[24] = 9;
  CHECK(rejected_at(bad) == 24);

  bad = good;
  bad[25] = 0x40;
  CHECK(rejected_at(bad) == 25);

  bad = good;
  bad[26] = 1;
  CHECK(rejected_at(bad) == 26);

  bad = good;
  put_u32(bad, 28, 1);
  CHECK(rejected_at(bad) == 28);

  bad = good;
  put_u32(bad, 12, 1000);
  CHECK(rejected_at(bad) > 0);

  bad = good;
  bad.push_back(0);
  CHECK(rejected_at(bad) == good.size());

  // Root member 0 pushed out of range.
  bad = good;
  put_u32(bad, 40, 400);
  CHECK(rejected_at(bad) == 40);

  for (std::size_t cut : {std::size_t{0}, std::size_t{3}, std::size_t{27}, std::size_t{100}, good.size() / 2,
                          good.size() - 1}) {
    const std::vector<std::uint8_t> truncated(good.begin(), good.begin() + static_cast<std::ptrdiff_t>(cut));
    CHECK_THROWS_AS(decode_efm(truncated), EfmError);
  }

  try {
    decode_efm(std::vector<std::uint8_t>(good.begin(), good.begin() + 10));
  } catch (const EfmError& e) {
    CHECK(std::string(e.what()).find("efm offset") != std::string::npos);
  }

  const auto dir = testing::scratch_dir("efm_bad");
  {
    std::ofstream(dir / "bad.efm", std::ios::binary) << "EFM0";
  }
  CHECK_THROWS_AS(read_efm(dir / "bad.efm"), EfmError);
}

TEST_CASE("manifest parsing") {
  const auto dir = testing::scratch_dir("manifest");
  PointCloud a = synthetic_object(1, 200);
  write_xyz(a, dir / "a.xyz");
  PointCloud b = a;
  b.labels.clear();
  write_xyz(b, dir / "b.xyz");
  std::string labels;
  for (std::int32_t l : a.labels) labels += std::to_string(l) + "\n";
  write_file_atomic(dir / "b.seg", labels);

  std::string parts = "[";
  for (int i = 0; i < 8; ++i) parts += (i ? "," : "") + std::to_string(i);
  parts += "]";
  const std::string text = R"({"categories": {"thing": )" + parts + R"(},
    "entries": [{"cloud": "a.xyz", "category": "thing"},
                {"cloud": "b.xyz", "labels": "b.seg", "category": "thing"}]})";
  write_file_atomic(dir / "m.json", text);

  const DatasetManifest m = load_manifest(dir / "m.json");
  REQUIRE(m.entries.size() == 2);
  const LabeledObject oa = load_object(m, 0);
  const LabeledObject ob = load_object(m, 1);
  CHECK(oa.cloud.labels == ob.cloud.labels);
  CHECK(oa.part_classes.size() == 8);

  CHECK_THROWS_AS(parse_manifest("{", dir), Error);
  CHECK_THROWS_AS(parse_manifest(R"({"categories": {}, "entries": [{"cloud": "a.xyz", "category": "x"}]})", dir),
                  Error);
  CHECK_THROWS_AS(
      parse_manifest(R"({"categories": {"x": [0]}, "entries": [{"cloud": "zz.xyz", "category": "x"}]})", dir), Error);
  const DatasetManifest narrow = parse_manifest(
      R"({"categories": {"x": [0]}, "entries": [{"cloud": "a.xyz", "category": "x"}]})", dir);
  CHECK_THROWS_AS(load_object(narrow, 0), Error);
}

TEST_CASE("metrics sweep report") {
  std::vector<LabeledObject> objects;
  for (std::uint64_t s = 0; s < 3; ++s) objects.push_back({synthetic_object(s, 512), {}});
  SweepConfig sweep;
  sweep.levels = {1, 2};
  sweep.partitions = {4, 9};
  sweep.resolutions = {8};
  const std::vector<MetricsRow> rows = run_metrics(objects, sweep, 2);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].levels == 1);
  CHECK(rows[0].partitions == 0);
  CHECK(rows[2].partitions == 9);
  for (const MetricsRow& r : rows) CHECK(r.objects == 3);
  const std::string tsv = format_metrics_tsv(rows);
  CHECK(tsv.rfind("levels\tpartitions\tresolution\trepresentation\tobjects\tpoint_usage_rate\tmax_seg_iou\n", 0) == 0);
  CHECK(tsv == format_metrics_tsv(run_metrics(objects, sweep, 1)));
}

TEST_CASE("xyz reference inputs") {
  const PointCloud a = parse_xyz("0 0 0\n1 0 0\n");
  CHECK(a.size() == 2);
  CHECK_FALSE(a.has_labels());
  const PointCloud b = parse_xyz("0 0 0 3\n# c\n1 0 0 3\n");
  CHECK(b.labels == std::vector<std::int32_t>{3, 3});
}

TEST_CASE("pixel label text format") {
  const PixelLabelMap labels = parse_pixel_labels("labels 3\n0 1 2 2\n# next node\n1 1 1 0\n");
  CHECK(labels.num_classes == 3);
  CHECK(labels.labels == std::vector<std::vector<std::int32_t>>{{0, 1, 2, 2}, {1, 1, 1, 0}});
  CHECK(parse_pixel_labels(format_pixel_labels(labels)).labels == labels.labels);

  PixelLabelMap scores;
  scores.num_classes = 2;
  scores.scores = {{0.1, 0.9, 1.0 / 3.0, 2.0 / 3.0}};
  const PixelLabelMap back = parse_pixel_labels(format_pixel_labels(scores));
  CHECK(back.has_scores());
  CHECK(back.scores == scores.scores);

  CHECK_THROWS_WITH_AS(parse_pixel_labels("labels 2\n0 2\n"), "line 2: malformed label", Error);
  CHECK_THROWS_WITH_AS(parse_pixel_labels("classes 2\n"), "line 1: expected header 'labels K' or 'scores K'", Error);
  CHECK_THROWS_AS(parse_pixel_labels(""), Error);
}
