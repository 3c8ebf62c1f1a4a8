// Copyright 2026 The ellipsoid-repr Authors
// SPDX-License-Identifier: Apache-2.0
//
// Ellipsoid frame fitting and the transforms between world space, the
// ellipsoid frame and the unit sphere.

#ifndef ELLIPSOID_GEOMETRY_HPP
#define ELLIPSOID_GEOMETRY_HPP

#include <array>
#include <span>

#include "ellipsoid/types.hpp"

namespace ellipsoid {

/// Proper rotation. Rows are the ordered principal axes, so `matrix * p`
/// expresses a world direction in the frame's axes.
struct Rotation3 {
  Mat3 matrix = Mat3::identity();

  friend bool operator==(const Rotation3&, const Rotation3&) = default;
};

/// True when `m` is orthonormal and has determinant +1, both within `tol`.
bool is_proper_rotation(const Mat3& m, double tol = 1e-6);

/// Oriented ellipsoid fitted to a point set. Radii are half-extents along the
/// rotation rows, sorted descending and never below the radius floor.
struct EllipsoidFrame {
  Rotation3 rotation;
  Vec3 radii{1.0, 1.0, 1.0};
  Vec3 center;

  friend bool operator==(const EllipsoidFrame&, const EllipsoidFrame&) = default;
};

/// The 9-value ellipsoid-wise descriptor: rotation vector, radii, center.
struct EllipsoidFeature {
  Vec3 rotvec;
  Vec3 radii;
  Vec3 center;

  std::array<double, 9> to_array() const {
    return {rotvec.x, rotvec.y, rotvec.z, radii.x, radii.y, radii.z, center.x, center.y, center.z};
  }
  static EllipsoidFeature from_array(const std::array<double, 9>& a) {
    return {{a[0], a[1], a[2]}, {a[3], a[4], a[5]}, {a[6], a[7], a[8]}};
  }
  friend bool operator==(const EllipsoidFeature&, const EllipsoidFeature&) = default;
};

/// How pixel indices map onto the unit sphere.
enum class AnchorMode : std::uint8_t {
  /// Half-pixel offsets: theta = 2pi(u+0.5)/m, phi = pi(v+0.5)/m.
  centered = 0,
  /// Literal theta = 2pi u/m, phi = pi v/m. Row 0 collapses onto the pole.
  paper = 1,
};

/// Eigen-decomposition of a symmetric 3x3 matrix. `vectors` holds the
/// eigenvectors as rows, in the same order as `values`.
struct SymmetricEigen {
  Vec3 values;
  Mat3 vectors;
};

/// Cyclic Jacobi eigensolver. Output is in solver order (unsorted); the
/// rows of `vectors` are orthonormal.
SymmetricEigen eigen_symmetric(const Mat3& a);

/// Smallest admissible radius given the largest half-extent of a frame.
double radius_floor(double largest_radius);

/// PCA-fitted ellipsoid frame.
///
/// Axes are the eigenvectors of the mean-centred covariance, ordered by
/// descending eigenvalue (ties keep solver order) and sign-normalised so the
/// largest-magnitude component of each axis is positive. The rotation is then
/// applied to the uncentred points; the half-extents of the rotated bounding
/// box give the radii and its midpoint, mapped back to world space, gives the
/// center. Axes are finally reordered so radii are descending, and the third
/// row is negated if needed to keep det = +1.
///
/// Throws Error("empty point cloud") or Error("non-finite input").
EllipsoidFrame pca_frame(std::span<const Vec3> points);

/// Circumsphere frame: identity rotation, axis-aligned bounding-box center,
/// and all radii equal to the largest center-to-point distance.
EllipsoidFrame circumsphere_frame(std::span<const Vec3> points);

/// Axis-angle vector with angle in [0, pi].
Vec3 rotation_to_rotvec(const Rotation3& r);

/// Rodrigues reconstruction.
Rotation3 rotvec_to_rotation(Vec3 v);

EllipsoidFeature ellipsoid_feature(const EllipsoidFrame& frame);

/// Unit direction for pixel (u, v) of an m x m map. u indexes azimuth and v
/// the polar angle measured from +z.
Vec3 sphere_anchor(int u, int v, int m, AnchorMode mode);

/// World position of a unit-sphere direction on the frame's ellipsoid surface.
Vec3 anchor_world(const EllipsoidFrame& frame, Vec3 unit);

/// Frame-local coordinates scaled by the radii; the fitted ellipsoid maps onto
/// the unit sphere.
Vec3 to_local(const EllipsoidFrame& frame, Vec3 p);

}  // namespace ellipsoid

#endif  // ELLIPSOID_GEOMETRY_HPP
