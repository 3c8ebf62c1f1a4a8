// Copyright 2026 The ellipsoid-repr Authors
// SPDX-License-Identifier: Apache-2.0

#include "ellipsoid/efm.hpp"

#include <bit>
#include <cstring>
#include <limits>
#include <string>

#include <fmt/format.h>

#include "ellipsoid/io.hpp"

namespace ellipsoid {
namespace {

constexpr std::uint8_t kMagic[4] = {'E', 'F', 'M', '1'};

class Writer {
 public:
  void u8(std::uint8_t v) { bytes_.push_back(v); }
  void u16(std::uint16_t v) { put_le(v, 2); }
  void u32(std::uint32_t v) { put_le(v, 4); }
  void f64(double v) { put_le(std::bit_cast<std::uint64_t>(v), 8); }
  void raw(std::span<const std::uint8_t> b) { bytes_.insert(bytes_.end(), b.begin(), b.end()); }
  std::vector<std::uint8_t> take() { return std::move(bytes_); }

 private:
  void put_le(std::uint64_t v, int n) {
    for (int i = 0; i < n; ++i) bytes_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  std::vector<std::uint8_t> bytes_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::size_t offset() const { return pos_; }
  std::size_t remaining() const { return bytes_.size() - pos_; }

  [[noreturn]] void fail(const std::string& what) const { throw EfmError(pos_, what); }
  [[noreturn]] void fail_at(std::size_t at, const std::string& what) const { throw EfmError(at, what); }

  void need(std::size_t n, const char* what) const {
    if (remaining() < n) fail(fmt::format("truncated: need {} bytes for {}, {} left", n, what, remaining()));
  }
  std::uint8_t u8(const char* what) { return static_cast<std::uint8_t>(get_le(1, what)); }
  std::uint16_t u16(const char* what) { return static_cast<std::uint16_t>(get_le(2, what)); }
  std::uint32_t u32(const char* what) { return static_cast<std::uint32_t>(get_le(4, what)); }
  double f64(const char* what) { return std::bit_cast<double>(get_le(8, what)); }
  std::span<const std::uint8_t> raw(std::size_t n, const char* what) {
    need(n, what);
    auto out = bytes_.subspan(pos_, n);
    pos_ += n;
    return out;
  }

 private:
  std::uint64_t get_le(int n, const char* what) {
    need(static_cast<std::size_t>(n), what);
    std::uint64_t v = 0;
    for (int i = 0; i < n; ++i) v |= static_cast<std::uint64_t>(bytes_[pos_ + static_cast<std::size_t>(i)]) << (8 * i);
    pos_ += static_cast<std::size_t>(n);
    return v;
  }

  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

EfmError::EfmError(std::size_t offset, const std::string& detail, const std::string& context)
    : Error(fmt::format("{}{}efm offset {}: {}", context, context.empty() ? "" : ": ", offset, detail)),
      offset_(offset),
      detail_(detail) {}

std::vector<std::uint8_t> encode_efm(const HierarchicalRepresentation& rep) {
  rep.layout.validate();
  const auto channels = static_cast<std::uint32_t>(rep.layout.channels());

  Writer w;
  w.raw(kMagic);
  w.u32(kEfmVersion);
  w.u32(rep.n_points);
  w.u32(static_cast<std::uint32_t>(rep.nodes.size()));
  w.u32(static_cast<std::uint32_t>(rep.levels));
  w.u32(channels);
  w.u8(static_cast<std::uint8_t>(rep.anchor));
  w.u8(rep.layout.flags);
  w.u16(0);

  for (const EllipsoidNode& node : rep.nodes) {
    w.u32(static_cast<std::uint32_t>(node.level));
    w.u32(node.parent.value_or(kEfmNoParent));
    w.u32(static_cast<std::uint32_t>(node.members.size()));
    for (std::uint32_t i : node.members) w.u32(i);
    for (double v : node.feature.to_array()) w.f64(v);
    w.u8(node.map ? 1 : 0);
    if (node.map) {
      const FeatureMap& map = *node.map;
      if (map.layout != rep.layout) throw Error("node map layout differs from representation layout");
      w.u32(static_cast<std::uint32_t>(map.m));
      for (double v : map.data) w.f64(v);
      for (std::uint32_t i : map.point_index) w.u32(i);
    }
  }
  return w.take();
}

HierarchicalRepresentation decode_efm(std::span<const std::uint8_t> bytes) {
  Reader r(bytes);
  const auto magic = r.raw(4, "magic");
  if (std::memcmp(magic.data(), kMagic, 4) != 0) r.fail_at(0, "bad magic");
  const std::size_t version_at = r.offset();
  const std::uint32_t version = r.u32("version");
  if (version != kEfmVersion) r.fail_at(version_at, fmt::format("unsupported version {}", version));

  HierarchicalRepresentation rep;
  rep.n_points = r.u32("point count");
  const std::uint32_t node_count = r.u32("node count");
  const std::size_t levels_at = r.offset();
  const std::uint32_t levels = r.u32("levels");
  const std::size_t channels_at = r.offset();
  const std::uint32_t channels = r.u32("channel count");
  const std::size_t anchor_at = r.offset();
  const std::uint8_t anchor = r.u8("anchor mode");
  const std::size_t flags_at = r.offset();
  rep.layout.flags = r.u8("channel flags");
  const std::size_t reserved_at = r.offset();
  if (r.u16("reserved") != 0) r.fail_at(reserved_at, "reserved field is not zero");

  if (levels < 1 || levels > 64) r.fail_at(levels_at, fmt::format("invalid level count {}", levels));
  rep.levels = static_cast<int>(levels);
  if (anchor > static_cast<std::uint8_t>(AnchorMode::paper)) r.fail_at(anchor_at, "invalid anchor mode");
  rep.anchor = static_cast<AnchorMode>(anchor);
  try {
    rep.layout.validate();
  } catch (const Error& e) {
    r.fail_at(flags_at, e.what());
  }
  if (channels != static_cast<std::uint32_t>(rep.layout.channels()))
    r.fail_at(channels_at, "channel count does not match channel flags");
  if (node_count == 0) r.fail(fmt::format("representation has no nodes"));

  // Each node needs at least 3 u32, 9 f64 and a flag byte.
  constexpr std::size_t kMinNodeBytes = 12 + 72 + 1;
  r.need(std::size_t{node_count} * kMinNodeBytes, "nodes");
  rep.nodes.reserve(node_count);

  for (std::uint32_t n = 0; n < node_count; ++n) {
    EllipsoidNode node;
    const std::size_t level_at = r.offset();
    const std::uint32_t level = r.u32("node level");
    const std::size_t parent_at = r.offset();
    const std::uint32_t parent = r.u32("node parent");
    if (n == 0) {
      if (level != 0 || parent != kEfmNoParent) r.fail_at(level_at, "first node must be the root");
    } else {
      if (parent >= n) r.fail_at(parent_at, fmt::format("parent {} does not precede node {}", parent, n));
      if (level != static_cast<std::uint32_t>(rep.nodes[parent].level) + 1 || level >= levels)
        r.fail_at(level_at, fmt::format("invalid level {} for node {}", level, n));
      node.parent = parent;
    }
    node.level = static_cast<int>(level);

    const std::uint32_t members = r.u32("member count");
    r.need(std::size_t{members} * 4, "member indices");
    node.members.resize(members);
    for (std::uint32_t& i : node.members) {
      const std::size_t at = r.offset();
      i = r.u32("member index");
      if (i >= rep.n_points) r.fail_at(at, fmt::format("member index {} out of range", i));
    }

    std::array<double, 9> feature{};
    for (double& v : feature) v = r.f64("ellipsoid feature");
    node.feature = EllipsoidFeature::from_array(feature);
    node.frame = {rotvec_to_rotation(node.feature.rotvec), node.feature.radii, node.feature.center};

    const std::size_t has_map_at = r.offset();
    const std::uint8_t has_map = r.u8("map flag");
    if (has_map > 1) r.fail_at(has_map_at, "invalid map flag");
    if (has_map == 1) {
      const std::size_t m_at = r.offset();
      const std::uint32_t m = r.u32("map resolution");
      if (m == 0 || m > 65535) r.fail_at(m_at, fmt::format("invalid map resolution {}", m));
      const std::size_t pixels = std::size_t{m} * m;
      r.need(pixels * channels * 8 + pixels * 4, "feature map");

      FeatureMap map;
      map.m = static_cast<int>(m);
      map.layout = rep.layout;
      map.data.resize(pixels * channels);
      for (double& v : map.data) v = r.f64("feature data");
      map.point_index.resize(pixels);
      for (std::uint32_t& i : map.point_index) {
        const std::size_t at = r.offset();
        i = r.u32("point index");
        if (i >= rep.n_points) r.fail_at(at, fmt::format("point index {} out of range", i));
      }
      node.map = std::move(map);
    }
    rep.nodes.push_back(std::move(node));
  }

  if (r.remaining() != 0) r.fail(fmt::format("{} trailing bytes", r.remaining()));
  return rep;
}

void write_efm(const HierarchicalRepresentation& rep, const std::filesystem::path& path) {
  const std::vector<std::uint8_t> bytes = encode_efm(rep);
  write_file_atomic(path, bytes);
}

HierarchicalRepresentation read_efm(const std::filesystem::path& path) {
  const std::vector<std::uint8_t> bytes = read_binary_file(path);
  try {
    return decode_efm(bytes);
  } catch (const EfmError& e) {
    throw EfmError(e.offset(), e.detail(), path.string());
  }
}

}  // namespace ellipsoid
