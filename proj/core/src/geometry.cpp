// Copyright 2026 The ellipsoid-repr Authors
// SPDX-License-Identifier: Apache-2.0

#include "ellipsoid/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace ellipsoid {
namespace {

// R^T * x without materialising the transpose.
Vec3 transpose_apply(const Mat3& r, Vec3 x) {
  return r.row(0) * x.x + r.row(1) * x.y + r.row(2) * x.z;
}

Vec3 sign_normalized(Vec3 v) {
  int pivot = 0;
  for (int i = 1; i < 3; ++i)
    if (std::abs(v[i]) > std::abs(v[pivot])) pivot = i;
  return v[pivot] < 0.0 ? v * -1.0 : v;
}

void check_input(std::span<const Vec3> points) {
  if (points.empty()) throw Error("empty point cloud");
  for (const Vec3& p : points)
    if (!is_finite(p)) throw Error("non-finite input");
}

}  // namespace

bool is_proper_rotation(const Mat3& m, double tol) {
  const Mat3 gram = m.transposed() * m;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c)
      if (std::abs(gram(r, c) - (r == c ? 1.0 : 0.0)) > tol) return false;
  return std::abs(m.determinant() - 1.0) <= tol;
}

SymmetricEigen eigen_symmetric(const Mat3& input) {
  Mat3 a = input;
  Mat3 v = Mat3::identity();  // columns accumulate eigenvectors

  double scale = 0.0;
  for (double x : a.m) scale += x * x;

  for (int sweep = 0; sweep < 64; ++sweep) {
    const double off = a(0, 1) * a(0, 1) + a(0, 2) * a(0, 2) + a(1, 2) * a(1, 2);
    if (off == 0.0 || off <= 1e-36 * scale) break;

    for (int p = 0; p < 2; ++p) {
      for (int q = p + 1; q < 3; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        Mat3 j = Mat3::identity();
        j(p, p) = c;
        j(q, q) = c;
        j(p, q) = s;
        j(q, p) = -s;
        a = j.transposed() * a * j;
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        v = v * j;
      }
    }
  }

  SymmetricEigen out;
  out.values = {a(0, 0), a(1, 1), a(2, 2)};
  out.vectors = v.transposed();
  return out;
}

double radius_floor(double largest_radius) {
  return std::max(1e-9, 1e-6 * largest_radius);
}

EllipsoidFrame pca_frame(std::span<const Vec3> points) {
  check_input(points);
  const double n = static_cast<double>(points.size());

  Vec3 mean;
  for (const Vec3& p : points) mean = mean + p;
  mean = mean * (1.0 / n);

  Mat3 cov;
  cov.m.fill(0.0);
  for (const Vec3& p : points) {
    const Vec3 d = p - mean;
    for (int r = 0; r < 3; ++r)
      for (int c = r; c < 3; ++c) cov(r, c) += d[r] * d[c];
  }
  for (int r = 0; r < 3; ++r)
    for (int c = r; c < 3; ++c) {
      cov(r, c) /= n;
      cov(c, r) = cov(r, c);
    }

  const SymmetricEigen eig = eigen_symmetric(cov);
  std::array<int, 3> order{0, 1, 2};
  std::stable_sort(order.begin(), order.end(),
                   [&](int i, int j) { return eig.values[i] > eig.values[j]; });

  std::array<Vec3, 3> axes;
  for (int i = 0; i < 3; ++i) axes[static_cast<std::size_t>(i)] = sign_normalized(eig.vectors.row(order[static_cast<std::size_t>(i)]));

  Vec3 lo{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
          std::numeric_limits<double>::infinity()};
  Vec3 hi = lo * -1.0;
  for (const Vec3& p : points) {
    for (int i = 0; i < 3; ++i) {
      const double c = dot(axes[static_cast<std::size_t>(i)], p);
      lo[i] = std::min(lo[i], c);
      hi[i] = std::max(hi[i], c);
    }
  }

  std::array<double, 3> half{};
  std::array<double, 3> mid{};
  for (int i = 0; i < 3; ++i) {
    half[static_cast<std::size_t>(i)] = (hi[i] - lo[i]) / 2.0;
    mid[static_cast<std::size_t>(i)] = hi[i] / 2.0 + lo[i] / 2.0;
  }

  // Keep radii descending even when bounding extents disagree with variance.
  std::array<std::size_t, 3> by_extent{0, 1, 2};
  std::stable_sort(by_extent.begin(), by_extent.end(),
                   [&](std::size_t i, std::size_t j) { return half[i] > half[j]; });

  Mat3 rot;
  Vec3 radii;
  Vec3 local_mid;
  for (int i = 0; i < 3; ++i) {
    const std::size_t k = by_extent[static_cast<std::size_t>(i)];
    rot.set_row(i, axes[k]);
    radii[i] = half[k];
    local_mid[i] = mid[k];
  }
  if (rot.determinant() < 0.0) {
    rot.set_row(2, rot.row(2) * -1.0);
    local_mid.z = -local_mid.z;
  }

  const double floor = radius_floor(radii.x);
  for (int i = 0; i < 3; ++i) radii[i] = std::max(radii[i], floor);

  EllipsoidFrame frame;
  frame.rotation.matrix = rot;
  frame.radii = radii;
  frame.center = transpose_apply(rot, local_mid);
  return frame;
}

EllipsoidFrame circumsphere_frame(std::span<const Vec3> points) {
  check_input(points);
  Vec3 lo = points.front();
  Vec3 hi = points.front();
  for (const Vec3& p : points) {
    for (int i = 0; i < 3; ++i) {
      lo[i] = std::min(lo[i], p[i]);
      hi[i] = std::max(hi[i], p[i]);
    }
  }
  EllipsoidFrame frame;
  frame.center = {hi.x / 2.0 + lo.x / 2.0, hi.y / 2.0 + lo.y / 2.0, hi.z / 2.0 + lo.z / 2.0};
  double r2 = 0.0;
  for (const Vec3& p : points) r2 = std::max(r2, squared_distance(p, frame.center));
  const double r = std::sqrt(r2);
  const double radius = std::max(r, radius_floor(r));
  frame.radii = {radius, radius, radius};
  return frame;
}

Vec3 rotation_to_rotvec(const Rotation3& r) {
  const Mat3& m = r.matrix;
  const Vec3 skew{m(2, 1) - m(1, 2), m(0, 2) - m(2, 0), m(1, 0) - m(0, 1)};
  const double sin_angle = 0.5 * norm(skew);
  const double cos_angle = 0.5 * (m(0, 0) + m(1, 1) + m(2, 2) - 1.0);
  const double angle = std::atan2(sin_angle, cos_angle);

  if (sin_angle == 0.0 && cos_angle > 0.0) return {};
  if (cos_angle > -0.5) return skew * (angle / (2.0 * sin_angle));

  // Near a half turn the skew part vanishes; recover the axis from the
  // symmetric part (1 - cos) a a^T and take its sign from the skew part.
  const double one_minus_cos = 1.0 - cos_angle;
  Mat3 sym;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) sym(i, j) = 0.5 * (m(i, j) + m(j, i)) - (i == j ? cos_angle : 0.0);
  int k = 0;
  for (int i = 1; i < 3; ++i)
    if (sym(i, i) > sym(k, k)) k = i;
  const double ak = std::sqrt(std::max(sym(k, k), 0.0) / one_minus_cos);
  Vec3 axis;
  for (int i = 0; i < 3; ++i) axis[i] = (i == k) ? ak : sym(i, k) / (one_minus_cos * ak);
  axis = axis * (1.0 / norm(axis));
  const double s = dot(axis, skew);
  if (s < 0.0 || (s == 0.0 && sign_normalized(axis) != axis)) axis = axis * -1.0;
  return axis * angle;
}

Rotation3 rotvec_to_rotation(Vec3 v) {
  const double angle = norm(v);
  double a;  // sin(angle) / angle
  double b;  // (1 - cos(angle)) / angle^2
  if (angle < 1e-4) {
    const double t2 = angle * angle;
    a = 1.0 - t2 / 6.0;
    b = 0.5 - t2 / 24.0;
  } else {
    a = std::sin(angle) / angle;
    b = (1.0 - std::cos(angle)) / (angle * angle);
  }
  Mat3 k;
  k.m = {0.0, -v.z, v.y, v.z, 0.0, -v.x, -v.y, v.x, 0.0};
  const Mat3 k2 = k * k;
  Rotation3 out;
  for (std::size_t i = 0; i < 9; ++i) out.matrix.m[i] += a * k.m[i] + b * k2.m[i];
  return out;
}

EllipsoidFeature ellipsoid_feature(const EllipsoidFrame& frame) {
  return {rotation_to_rotvec(frame.rotation), frame.radii, frame.center};
}

Vec3 sphere_anchor(int u, int v, int m, AnchorMode mode) {
  if (m < 1 || u < 0 || v < 0 || u >= m || v >= m) throw Error("pixel index out of range");
  const double offset = mode == AnchorMode::centered ? 0.5 : 0.0;
  const double theta = 2.0 * std::numbers::pi * (u + offset) / m;
  const double phi = std::numbers::pi * (v + offset) / m;
  return {std::sin(phi) * std::cos(theta), std::sin(phi) * std::sin(theta), std::cos(phi)};
}

Vec3 anchor_world(const EllipsoidFrame& frame, Vec3 unit) {
  return transpose_apply(frame.rotation.matrix, hadamard(unit, frame.radii)) + frame.center;
}

Vec3 to_local(const EllipsoidFrame& frame, Vec3 p) {
  const Vec3 r = frame.rotation.matrix * (p - frame.center);
  return {r.x / frame.radii.x, r.y / frame.radii.y, r.z / frame.radii.z};
}

}  // namespace ellipsoid
