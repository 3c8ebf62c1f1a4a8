// Copyright 2026 The ellipsoid-repr Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef ELLIPSOID_AUGMENT_HPP
#define ELLIPSOID_AUGMENT_HPP

#include <cstdint>
#include <string_view>

#include "ellipsoid/types.hpp"

namespace ellipsoid {

enum class RotationMode : std::uint8_t {
  none,
  up_axis,  // uniform angle about +y
  so3,      // uniform random rotation
};

RotationMode parse_rotation_mode(std::string_view name);

struct AugmentOptions {
  RotationMode rotation = RotationMode::up_axis;
  double jitter_sigma = 0.01;
  double jitter_clip = 0.05;
};

/// Rotates (about the origin) then adds per-coordinate Gaussian jitter clipped
/// to +-jitter_clip. Labels are carried over. Deterministic per seed.
PointCloud augment(const PointCloud& cloud, std::uint64_t seed, const AugmentOptions& options = {});

}  // namespace ellipsoid

#endif  // ELLIPSOID_AUGMENT_HPP
