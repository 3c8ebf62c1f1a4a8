// Copyright 2026 The ellipsoid-repr Authors
// SPDX-License-Identifier: Apache-2.0

#include "ellipsoid/augment.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "ellipsoid/random.hpp"

namespace ellipsoid {
namespace {

// Shoemake's uniform quaternion, as a rotation matrix.
Mat3 random_rotation(SplitMix64& rng) {
  const double u1 = rng.uniform();
  const double u2 = 2.0 * std::numbers::pi * rng.uniform();
  const double u3 = 2.0 * std::numbers::pi * rng.uniform();
  const double a = std::sqrt(1.0 - u1);
  const double b = std::sqrt(u1);
  const double w = a * std::sin(u2);
  const double x = a * std::cos(u2);
  const double y = b * std::sin(u3);
  const double z = b * std::cos(u3);
  Mat3 r;
  r.m = {1 - 2 * (y * y + z * z), 2 * (x * y - z * w),     2 * (x * z + y * w),
         2 * (x * y + z * w),     1 - 2 * (x * x + z * z), 2 * (y * z - x * w),
         2 * (x * z - y * w),     2 * (y * z + x * w),     1 - 2 * (x * x + y * y)};
  return r;
}

}  // namespace

RotationMode parse_rotation_mode(std::string_view name) {
  if (name == "none") return RotationMode::none;
  if (name == "up_axis" || name == "up-axis") return RotationMode::up_axis;
  if (name == "so3") return RotationMode::so3;
  throw Error("unknown rotation mode '" + std::string(name) + "'");
}

PointCloud augment(const PointCloud& cloud, std::uint64_t seed, const AugmentOptions& options) {
  if (!(options.jitter_sigma >= 0.0) || !(options.jitter_clip >= 0.0))
    throw Error("jitter sigma and clip must be non-negative");

  SplitMix64 rng(seed);
  PointCloud out = cloud;

  switch (options.rotation) {
    case RotationMode::none:
      break;
    case RotationMode::up_axis: {
      const double angle = 2.0 * std::numbers::pi * rng.uniform();
      const double c = std::cos(angle);
      const double s = std::sin(angle);
      for (Vec3& p : out.points) p = {c * p.x + s * p.z, p.y, -s * p.x + c * p.z};
      break;
    }
    case RotationMode::so3: {
      const Mat3 r = random_rotation(rng);
      for (Vec3& p : out.points) p = r * p;
      break;
    }
  }

  if (options.jitter_sigma > 0.0) {
    for (Vec3& p : out.points)
      for (int a = 0; a < 3; ++a)
        p[a] += std::clamp(options.jitter_sigma * rng.normal(), -options.jitter_clip, options.jitter_clip);
  }
  return out;
}

}  // namespace ellipsoid
