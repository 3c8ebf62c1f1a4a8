// Copyright 2026 The ellipsoid-repr Authors
// SPDX-License-Identifier: Apache-2.0
//
// EFM: little-endian binary container for one HierarchicalRepresentation.
//
//   "EFM1"  u32 version=1  u32 n_points  u32 node_count  u32 levels  u32 C
//   u8 anchor_mode  u8 channel_flags  u16 reserved=0
//   per node, breadth-first:
//     u32 level  u32 parent (0xFFFFFFFF for the root)  u32 member_count
//     member_count x u32 global index
//     9 x f64 ellipsoid feature (rotvec, radii, center)
//     u8 has_map
//     if has_map: u32 M, M*M*C x f64 data (v, then u, then channel),
//                 M*M x u32 point index
//
// Frames are not stored; decoding rebuilds each frame from its feature.

#ifndef ELLIPSOID_EFM_HPP
#define ELLIPSOID_EFM_HPP

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "ellipsoid/representation.hpp"

namespace ellipsoid {

inline constexpr std::uint32_t kEfmVersion = 1;
inline constexpr std::uint32_t kEfmNoParent = 0xFFFFFFFFu;

/// Decoding failure at a byte offset into the file.
class EfmError : public Error {
 public:
  EfmError(std::size_t offset, const std::string& detail, const std::string& context = {});
  std::size_t offset() const { return offset_; }
  const std::string& detail() const { return detail_; }

 private:
  std::size_t offset_;
  std::string detail_;
};

std::vector<std::uint8_t> encode_efm(const HierarchicalRepresentation& rep);

/// Throws EfmError on bad magic, unsupported version, truncation, trailing
/// bytes or structurally invalid content. Never returns a partial object.
HierarchicalRepresentation decode_efm(std::span<const std::uint8_t> bytes);

/// Atomic: the destination is either the complete new file or untouched.
void write_efm(const HierarchicalRepresentation& rep, const std::filesystem::path& path);
HierarchicalRepresentation read_efm(const std::filesystem::path& path);

}  // namespace ellipsoid

#endif  // ELLIPSOID_EFM_HPP
