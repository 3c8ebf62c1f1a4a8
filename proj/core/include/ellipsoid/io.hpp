// Copyright 2026 The ellipsoid-repr Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef ELLIPSOID_IO_HPP
#define ELLIPSOID_IO_HPP

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ellipsoid/backprojection.hpp"
#include "ellipsoid/types.hpp"

namespace ellipsoid {

/// Parses "x y z" or "x y z label" lines. Blank lines and lines starting with
/// '#' are skipped; mixing labeled and unlabeled lines is an error.
PointCloud parse_xyz(std::string_view text);
PointCloud load_xyz(const std::filesystem::path& path);

/// Writes one point per line with 17 significant digits, so every double
/// survives a load_xyz round trip unchanged.
std::string format_xyz(const PointCloud& cloud);
void write_xyz(const PointCloud& cloud, const std::filesystem::path& path);

/// One integer label per non-comment line.
std::vector<std::int32_t> parse_labels(std::string_view text);
std::vector<std::int32_t> load_labels(const std::filesystem::path& path);

/// Pixel predictions as text. The first line is "labels K" or "scores K";
/// each following line holds one metric node's values in pixel order (v-major,
/// then u, then class for scores).
PixelLabelMap parse_pixel_labels(std::string_view text);
PixelLabelMap load_pixel_labels(const std::filesystem::path& path);
std::string format_pixel_labels(const PixelLabelMap& pixels);

std::string read_text_file(const std::filesystem::path& path);
std::vector<std::uint8_t> read_binary_file(const std::filesystem::path& path);

/// Writes to a temporary sibling and renames it over `path`; on failure the
/// destination is left untouched.
void write_file_atomic(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);
void write_file_atomic(const std::filesystem::path& path, std::string_view text);

}  // namespace ellipsoid

#endif  // ELLIPSOID_IO_HPP
