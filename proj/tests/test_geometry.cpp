// Copyright 2026 The ellipsoid-repr Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>

#include "ellipsoid/geometry.hpp"
#include "ellipsoid/synthetic.hpp"
#include "oracle/oracles.hpp"
#include "test_support.hpp"

using namespace ellipsoid;
using doctest::Approx;

namespace {

double max_abs_diff(const Mat3& a, const Mat3& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < 9; ++i) d = std::max(d, std::abs(a.m[i] - b.m[i]));
  return d;
}

std::vector<Vec3> box_corners(Vec3 h) {
  std::vector<Vec3> out;
  for (int sx : {-1, 1})
    for (int sy : {-1, 1})
      for (int sz : {-1, 1}) out.push_back({sx * h.x, sy * h.y, sz * h.z});
  return out;
}

}  // namespace

TEST_CASE("eigen_symmetric agrees with Eigen on random symmetric matrices") {
  SplitMix64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    Mat3 a;
    Eigen::Matrix3d e;
    for (int r = 0; r < 3; ++r)
      for (int c = r; c < 3; ++c) {
        a(r, c) = a(c, r) = rng.normal();
        e(r, c) = e(c, r) = a(r, c);
      }
    const SymmetricEigen mine = eigen_symmetric(a);
    const bool proper = is_proper_rotation(mine.vectors, 1e-12) ||
                        is_proper_rotation(Mat3::from_rows(mine.vectors.row(0), mine.vectors.row(1), mine.vectors.row(2) * -1.0), 1e-12);
    CHECK(proper);

    std::array<double, 3> vals{mine.values.x, mine.values.y, mine.values.z};
    std::sort(vals.begin(), vals.end());
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> ref(e);
    for (int i = 0; i < 3; ++i) CHECK(vals[static_cast<std::size_t>(i)] == Approx(ref.eigenvalues()(i)).epsilon(1e-12));

    // A v = lambda v for each returned pair.
    for (int i = 0; i < 3; ++i) {
      const Vec3 v = mine.vectors.row(i);
      const Vec3 av = a * v;
      CHECK(norm(av - v * mine.values[i]) < 1e-12);
    }
  }
}

TEST_CASE("pca_frame on box corners recovers the axes and half-extents") {
  const EllipsoidFrame f = pca_frame(box_corners({1.0, 0.5, 0.25}));
  CHECK(f.radii.x == Approx(1.0).epsilon(1e-12));
  CHECK(f.radii.y == Approx(0.5).epsilon(1e-12));
  CHECK(f.radii.z == Approx(0.25).epsilon(1e-12));
  CHECK(max_abs_diff(f.rotation.matrix, Mat3::identity()) < 1e-12);
  CHECK(norm(f.center) < 1e-12);
}

TEST_CASE("pca_frame floors the radii of a degenerate cloud") {
  const std::vector<Vec3> pts(10, Vec3{2.0, -1.0, 3.0});
  const EllipsoidFrame f = pca_frame(pts);
  CHECK(f.radii == Vec3{1e-9, 1e-9, 1e-9});
  CHECK(f.center == Vec3{2.0, -1.0, 3.0});
  CHECK(is_proper_rotation(f.rotation.matrix));
}

TEST_CASE("pca_frame handles planar and linear clouds") {
  std::vector<Vec3> line;
  for (int i = 0; i < 20; ++i) line.push_back({0.1 * i, 0.2 * i, -0.05 * i});
  const EllipsoidFrame f = pca_frame(line);
  CHECK(is_proper_rotation(f.rotation.matrix));
  CHECK(f.radii.y == f.radii.z);
  CHECK(f.radii.z == Approx(radius_floor(f.radii.x)));

  const std::vector<Vec3> square{{1, 1, 0}, {-1, 1, 0}, {-1, -1, 0}, {1, -1, 0}};
  const EllipsoidFrame g = pca_frame(square);
  CHECK(g.radii.x == Approx(1.0));
  CHECK(g.radii.y == Approx(1.0));
  CHECK(g.radii.z == Approx(1e-6));
}

TEST_CASE("pca_frame rejects empty and non-finite input") {
  CHECK_THROWS_WITH_AS(pca_frame(std::vector<Vec3>{}), "empty point cloud", Error);
  const std::vector<Vec3> bad{{0, 0, 0}, {std::nan(""), 0, 0}};
  CHECK_THROWS_WITH_AS(pca_frame(bad), "non-finite input", Error);
  const std::vector<Vec3> inf{{0, 0, 0}, {0, HUGE_VAL, 0}};
  CHECK_THROWS_AS(pca_frame(inf), Error);
}

TEST_CASE("pca_frame of a rotated ellipsoid surface matches the Eigen reference") {
  const Vec3 h{1.0, 0.6, 0.3};
  SplitMix64 rng(512);
  const Mat3 r0 = testing::random_rotation(rng);
  std::vector<Vec3> pts = sample_ellipsoid_surface(h, 512, 99);
  for (Vec3& p : pts) p = r0 * p;

  const EllipsoidFrame f = pca_frame(pts);
  const EllipsoidFrame ref = oracle::eigen_pca_frame(pts);
  CHECK(max_abs_diff(f.rotation.matrix, ref.rotation.matrix) < 1e-9);
  CHECK(norm(f.radii - ref.radii) < 1e-9);
  CHECK(norm(f.center - ref.center) < 1e-9);

  // Anchors on the fitted frame sit on the sampled surface.
  const Mat3 r0t = r0.transposed();
  for (int i = 0; i < 500; ++i) {
    const Vec3 q = r0t * anchor_world(f, testing::random_unit(rng));
    const double s = norm(Vec3{q.x / h.x, q.y / h.y, q.z / h.z});
    CHECK(std::abs(s - 1.0) < 0.05);
  }
}

TEST_CASE("pca frames are proper rotations with descending floored radii") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    std::vector<Vec3> pts = testing::random_cloud(3 + seed * 7, seed);
    const EllipsoidFrame f = pca_frame(pts);
    CHECK(is_proper_rotation(f.rotation.matrix));
    CHECK(f.radii.x >= f.radii.y);
    CHECK(f.radii.y >= f.radii.z);
    CHECK(f.radii.z >= radius_floor(f.radii.x));
  }
}

TEST_CASE("pca_frame is covariant under rigid motion") {
  SplitMix64 rng(17);
  for (int trial = 0; trial < 25; ++trial) {
    // Box-volume samples with eigenvalue ratios well above 10%.
    const std::vector<Vec3> pts = sample_box_volume({1.0, 0.6, 0.3}, 400, 1000 + static_cast<std::uint64_t>(trial));
    const Mat3 q = testing::random_rotation(rng);
    const Vec3 d = testing::random_vec(rng, 5.0);
    std::vector<Vec3> moved;
    for (const Vec3& p : pts) moved.push_back(q * p + d);

    const EllipsoidFrame a = pca_frame(pts);
    const EllipsoidFrame b = pca_frame(moved);
    CHECK(norm(b.radii - a.radii) < 1e-6);
    CHECK(norm(b.center - (q * a.center + d)) < 1e-6);
  }
}

TEST_CASE("rotation vector conversions") {
  CHECK(rotation_to_rotvec(Rotation3{}) == Vec3{0, 0, 0});

  Rotation3 rz;
  rz.matrix.m = {0, -1, 0, 1, 0, 0, 0, 0, 1};
  const Vec3 v = rotation_to_rotvec(rz);
  CHECK(v.x == Approx(0.0));
  CHECK(v.y == Approx(0.0));
  CHECK(v.z == Approx(std::numbers::pi / 2).epsilon(1e-15));

  CHECK(max_abs_diff(rotvec_to_rotation({0, 0, 0}).matrix, Mat3::identity()) == 0.0);
  Mat3 half_x;
  half_x.m = {1, 0, 0, 0, -1, 0, 0, 0, -1};
  CHECK(max_abs_diff(rotvec_to_rotation({std::numbers::pi, 0, 0}).matrix, half_x) < 1e-15);
  CHECK(norm(rotation_to_rotvec(Rotation3{half_x}) - Vec3{std::numbers::pi, 0, 0}) < 1e-15);
}

TEST_CASE("rotation vector round trips") {
  SplitMix64 rng(100);
  for (int i = 0; i < 100; ++i) {
    const Mat3 r0 = testing::random_rotation(rng);
    const Vec3 v = rotation_to_rotvec(Rotation3{r0});
    CHECK(norm(v) <= std::numbers::pi + 1e-12);
    CHECK(max_abs_diff(rotvec_to_rotation(v).matrix, r0) < 1e-6);
  }
  for (int i = 0; i < 100; ++i) {
    const Vec3 v = testing::random_unit(rng) * ((std::numbers::pi - 1e-3) * rng.uniform());
    CHECK(norm(rotation_to_rotvec(rotvec_to_rotation(v)) - v) < 1e-6);
  }
  // Near the half turn and near zero.
  for (double angle : {std::numbers::pi - 2e-3, std::numbers::pi - 1e-6, 1e-9, 1e-5, 2.0}) {
    const Vec3 v = testing::random_unit(rng) * angle;
    const Mat3 r = rotvec_to_rotation(v).matrix;
    CHECK(is_proper_rotation(r, 1e-12));
    CHECK(max_abs_diff(rotvec_to_rotation(rotation_to_rotvec(Rotation3{r})).matrix, r) < 1e-9);
  }
}

TEST_CASE("sphere_anchor") {
  const Vec3 pole = sphere_anchor(0, 0, 32, AnchorMode::paper);
  CHECK(pole == Vec3{0, 0, 1});
  const Vec3 eq = sphere_anchor(0, 16, 32, AnchorMode::paper);
  CHECK(eq.x == Approx(1.0));
  CHECK(std::abs(eq.y) < 1e-15);
  CHECK(std::abs(eq.z) < 1e-15);

  // Frozen from a direct numpy evaluation of the closed form.
  const Vec3 c = sphere_anchor(3, 5, 16, AnchorMode::centered);
  CHECK(c.x == Approx(0.1720543034545916).epsilon(1e-14));
  CHECK(c.y == Approx(0.8649753945474729).epsilon(1e-14));
  CHECK(c.z == Approx(0.4713967368259978).epsilon(1e-14));

  for (int m : {1, 3, 16})
    for (int v = 0; v < m; ++v)
      for (int u = 0; u < m; ++u)
        for (AnchorMode mode : {AnchorMode::centered, AnchorMode::paper})
          CHECK(norm(sphere_anchor(u, v, m, mode)) == Approx(1.0).epsilon(1e-12));

  CHECK_THROWS_AS(sphere_anchor(-1, 0, 4, AnchorMode::centered), Error);
  CHECK_THROWS_AS(sphere_anchor(0, 4, 4, AnchorMode::centered), Error);
  CHECK_THROWS_AS(sphere_anchor(0, 0, 0, AnchorMode::centered), Error);
}

TEST_CASE("anchor_world and to_local") {
  EllipsoidFrame f;
  CHECK(anchor_world(f, {0, 0, 1}) == Vec3{0, 0, 1});

  f.radii = {2, 1, 1};
  f.center = {5, 0, 0};
  CHECK(anchor_world(f, {1, 0, 0}) == Vec3{7, 0, 0});

  // First principal axis along +y: the frame is rotated a quarter turn about z.
  EllipsoidFrame g;
  g.rotation.matrix.m = {0, 1, 0, -1, 0, 0, 0, 0, 1};
  g.radii = {2, 1, 1};
  const Vec3 a = anchor_world(g, {1, 0, 0});
  CHECK(std::abs(a.x) < 1e-15);
  CHECK(a.y == Approx(2.0));
  CHECK(std::abs(a.z) < 1e-15);

  CHECK(to_local(f, f.center) == Vec3{0, 0, 0});
  EllipsoidFrame h;
  h.radii = {2, 1, 1};
  CHECK(to_local(h, {2, 0, 0}) == Vec3{1, 0, 0});
}

TEST_CASE("to_local inverts anchor_world on the unit sphere") {
  SplitMix64 rng(55);
  for (int i = 0; i < 100; ++i) {
    EllipsoidFrame f;
    f.rotation.matrix = testing::random_rotation(rng);
    f.radii = {0.5 + rng.uniform(), 0.2 + rng.uniform(), 0.05 + rng.uniform()};
    f.center = testing::random_vec(rng, 10.0);
    const Vec3 u = testing::random_unit(rng);
    CHECK(norm(to_local(f, anchor_world(f, u)) - u) < 1e-6);
  }
}

TEST_CASE("ellipsoid_feature packs rotation vector, radii and center") {
  EllipsoidFrame f;
  f.rotation = rotvec_to_rotation({0.1, -0.2, 0.3});
  f.radii = {3, 2, 1};
  f.center = {4, 5, 6};
  const EllipsoidFeature e = ellipsoid_feature(f);
  CHECK(norm(e.rotvec - Vec3{0.1, -0.2, 0.3}) < 1e-12);
  const auto arr = e.to_array();
  CHECK(arr[3] == 3);
  CHECK(arr[8] == 6);
  CHECK(EllipsoidFeature::from_array(arr) == e);
}

TEST_CASE("circumsphere_frame encloses every point") {
  const std::vector<Vec3> pts = testing::random_cloud(300, 8, 2.0);
  const EllipsoidFrame f = circumsphere_frame(pts);
  CHECK(f.rotation.matrix == Mat3::identity());
  CHECK(f.radii.x == f.radii.y);
  CHECK(f.radii.y == f.radii.z);
  for (const Vec3& p : pts) CHECK(norm(p - f.center) <= f.radii.x * (1 + 1e-12));
}
