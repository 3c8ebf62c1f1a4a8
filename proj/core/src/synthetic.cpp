// Copyright 2026 The ellipsoid-repr Authors
// SPDX-License-Identifier: Apache-2.0

#include "ellipsoid/synthetic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "ellipsoid/geometry.hpp"
#include "ellipsoid/random.hpp"

namespace ellipsoid {
namespace {

Vec3 unit_direction(SplitMix64& rng) {
  for (;;) {
    const Vec3 v{rng.normal(), rng.normal(), rng.normal()};
    const double len = norm(v);
    if (len > 1e-12) return v * (1.0 / len);
  }
}

Vec3 ellipsoid_point(Vec3 r, SplitMix64& rng) {
  const double g_max = 1.0 / std::min({r.x, r.y, r.z});
  for (;;) {
    const Vec3 p = hadamard(unit_direction(rng), r);
    const Vec3 grad{p.x / (r.x * r.x), p.y / (r.y * r.y), p.z / (r.z * r.z)};
    if (rng.uniform() * g_max <= norm(grad)) return p;
  }
}

Vec3 box_surface_point(Vec3 r, SplitMix64& rng) {
  const std::array<double, 3> face_area{r.y * r.z, r.x * r.z, r.x * r.y};
  const double total = face_area[0] + face_area[1] + face_area[2];
  double pick = rng.uniform() * total;
  int axis = 0;
  while (axis < 2 && pick >= face_area[static_cast<std::size_t>(axis)]) pick -= face_area[static_cast<std::size_t>(axis++)];
  Vec3 p{(2 * rng.uniform() - 1) * r.x, (2 * rng.uniform() - 1) * r.y, (2 * rng.uniform() - 1) * r.z};
  p[axis] = rng.uniform() < 0.5 ? -r[axis] : r[axis];
  return p;
}

// Cylinder along x; the y/z extents give an elliptic cross-section.
Vec3 cylinder_point(Vec3 r, SplitMix64& rng) {
  const double side = 2.0 * r.x * std::numbers::pi * (r.y + r.z);
  const double caps = 2.0 * std::numbers::pi * r.y * r.z;
  const double angle = 2.0 * std::numbers::pi * rng.uniform();
  if (rng.uniform() * (side + caps) < side)
    return {(2 * rng.uniform() - 1) * r.x, r.y * std::cos(angle), r.z * std::sin(angle)};
  const double rad = std::sqrt(rng.uniform());
  return {rng.uniform() < 0.5 ? -r.x : r.x, rad * r.y * std::cos(angle), rad * r.z * std::sin(angle)};
}

Mat3 random_rotation(SplitMix64& rng) {
  const Vec3 axis = unit_direction(rng);
  const double angle = std::numbers::pi * rng.uniform();
  return rotvec_to_rotation(axis * angle).matrix;
}

double surface_area_estimate(int kind, Vec3 r) {
  switch (kind) {
    case 0: {  // Knud Thomsen's approximation
      constexpr double p = 1.6075;
      const double s = (std::pow(r.x * r.y, p) + std::pow(r.x * r.z, p) + std::pow(r.y * r.z, p)) / 3.0;
      return 4.0 * std::numbers::pi * std::pow(s, 1.0 / p);
    }
    case 1:
      return 8.0 * (r.x * r.y + r.y * r.z + r.x * r.z);
    default:
      return 2.0 * r.x * std::numbers::pi * (r.y + r.z) + 2.0 * std::numbers::pi * r.y * r.z;
  }
}

}  // namespace

std::vector<Vec3> sample_ellipsoid_surface(Vec3 half_extents, std::size_t n, std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<Vec3> out(n);
  for (Vec3& p : out) p = ellipsoid_point(half_extents, rng);
  return out;
}

std::vector<Vec3> sample_box_volume(Vec3 half_extents, std::size_t n, std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<Vec3> out(n);
  for (Vec3& p : out)
    p = {(2 * rng.uniform() - 1) * half_extents.x, (2 * rng.uniform() - 1) * half_extents.y,
         (2 * rng.uniform() - 1) * half_extents.z};
  return out;
}

PointCloud synthetic_object(std::uint64_t seed, std::size_t n_points) {
  SplitMix64 rng(seed * 0x9E3779B97F4A7C15ull + 1);
  const int parts = 2 + static_cast<int>(rng.below(4));

  struct Part {
    int kind;
    Vec3 extents;
    Mat3 rotation;
    Vec3 offset;
    double area;
  };
  std::vector<Part> shape;
  double total_area = 0.0;
  for (int i = 0; i < parts; ++i) {
    Part part;
    part.kind = static_cast<int>(rng.below(3));
    part.extents = {0.3 + 0.7 * rng.uniform(), 0.05 + 0.35 * rng.uniform(), 0.02 + 0.2 * rng.uniform()};
    part.rotation = random_rotation(rng);
    part.offset = {(2 * rng.uniform() - 1) * 0.6, (2 * rng.uniform() - 1) * 0.6, (2 * rng.uniform() - 1) * 0.6};
    part.area = surface_area_estimate(part.kind, part.extents);
    total_area += part.area;
    shape.push_back(part);
  }

  std::vector<std::size_t> counts(shape.size());
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < shape.size(); ++i) {
    counts[i] = std::max<std::size_t>(1, static_cast<std::size_t>(static_cast<double>(n_points) * shape[i].area / total_area));
    assigned += counts[i];
  }
  while (assigned > n_points) {
    const auto it = std::max_element(counts.begin(), counts.end());
    --*it;
    --assigned;
  }
  for (std::size_t i = 0; assigned < n_points; i = (i + 1) % counts.size(), ++assigned) ++counts[i];

  PointCloud cloud;
  cloud.points.reserve(n_points);
  cloud.labels.reserve(n_points);
  for (std::size_t i = 0; i < shape.size(); ++i) {
    const Part& part = shape[i];
    for (std::size_t j = 0; j < counts[i]; ++j) {
      Vec3 p;
      switch (part.kind) {
        case 0: p = ellipsoid_point(part.extents, rng); break;
        case 1: p = box_surface_point(part.extents, rng); break;
        default: p = cylinder_point(part.extents, rng); break;
      }
      cloud.points.push_back(part.rotation * p + part.offset);
      cloud.labels.push_back(static_cast<std::int32_t>(i));
    }
  }

  Vec3 mean;
  for (const Vec3& p : cloud.points) mean = mean + p;
  mean = mean * (1.0 / static_cast<double>(cloud.size()));
  double r2 = 0.0;
  for (Vec3& p : cloud.points) {
    p = p - mean;
    r2 = std::max(r2, dot(p, p));
  }
  const double scale = r2 > 0.0 ? 1.0 / std::sqrt(r2) : 1.0;
  for (Vec3& p : cloud.points) p = p * scale;
  return cloud;
}

std::vector<PointCloud> synthetic_suite(std::size_t count, std::size_t n_points, std::uint64_t seed) {
  std::vector<PointCloud> suite;
  suite.reserve(count);
  for (std::size_t i = 0; i < count; ++i) suite.push_back(synthetic_object(seed + i, n_points));
  return suite;
}

double anisotropy_ratio(std::span<const Vec3> points) {
  const EllipsoidFrame frame = pca_frame(points);
  return frame.radii.x / frame.radii.z;
}

}  // namespace ellipsoid
