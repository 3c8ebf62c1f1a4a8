// Copyright 2026 The ellipsoid-repr Authors
// SPDX-License-Identifier: Apache-2.0
//
// Seeded synthetic shapes for tests, benchmarks and offline metric runs.

#ifndef ELLIPSOID_SYNTHETIC_HPP
#define ELLIPSOID_SYNTHETIC_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "ellipsoid/types.hpp"

namespace ellipsoid {

/// Area-uniform samples on the axis-aligned ellipsoid surface centred at the
/// origin (rejection sampling against the surface-area element).
std::vector<Vec3> sample_ellipsoid_surface(Vec3 half_extents, std::size_t n, std::uint64_t seed);

/// Uniform samples inside [-1, 1]^3 scaled by `half_extents`.
std::vector<Vec3> sample_box_volume(Vec3 half_extents, std::size_t n, std::uint64_t seed);

/// Multi-part labeled object: 2 to 5 surface-sampled primitives (ellipsoid,
/// box, cylinder) with random anisotropic extents, poses and part labels,
/// normalised into the unit ball.
PointCloud synthetic_object(std::uint64_t seed, std::size_t n_points = 2048);

/// `count` objects from consecutive seeds starting at `seed`.
std::vector<PointCloud> synthetic_suite(std::size_t count = 20, std::size_t n_points = 2048, std::uint64_t seed = 2026);

/// Largest over smallest PCA radius.
double anisotropy_ratio(std::span<const Vec3> points);

}  // namespace ellipsoid

#endif  // ELLIPSOID_SYNTHETIC_HPP
