// Copyright 2026 The ellipsoid-repr Authors
// SPDX-License-Identifier: Apache-2.0

#include "ellipsoid/io.hpp"

#include <unistd.h>

#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>

#include <fmt/format.h>
#include <fmt/ranges.h>

namespace ellipsoid {
namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

template <typename T>
bool parse_number(std::string_view token, T& value) {
  const char* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, value);
  return ec == std::errc() && ptr == end;
}

template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    const std::size_t end = nl == std::string_view::npos ? text.size() : nl;
    ++line_no;
    const std::vector<std::string_view> tokens = split_ws(text.substr(pos, end - pos));
    if (!tokens.empty() && tokens.front().front() != '#') fn(line_no, tokens);
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
}

}  // namespace

PointCloud parse_xyz(std::string_view text) {
  PointCloud cloud;
  int columns = 0;
  for_each_line(text, [&](std::size_t line_no, const std::vector<std::string_view>& tokens) {
    const auto fail = [line_no](const std::string& what) {
      throw Error(fmt::format("line {}: {}", line_no, what));
    };
    const int n = static_cast<int>(tokens.size());
    if (n != 3 && n != 4) fail("expected 3 or 4 columns");
    if (columns == 0) columns = n;
    if (n != columns) fail("mixed labeled and unlabeled lines");

    Vec3 p;
    for (int i = 0; i < 3; ++i)
      if (!parse_number(tokens[static_cast<std::size_t>(i)], p[i])) fail("malformed coordinate");
    if (!is_finite(p)) fail("non-finite coordinate");
    cloud.points.push_back(p);
    if (n == 4) {
      std::int32_t label = 0;
      if (!parse_number(tokens[3], label)) fail("malformed label");
      cloud.labels.push_back(label);
    }
  });
  if (cloud.points.empty()) throw Error("empty point cloud file");
  return cloud;
}

PointCloud load_xyz(const std::filesystem::path& path) {
  try {
    return parse_xyz(read_text_file(path));
  } catch (const Error& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

std::string format_xyz(const PointCloud& cloud) {
  fmt::memory_buffer out;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const Vec3& p = cloud.points[i];
    fmt::format_to(std::back_inserter(out), "{:.17g} {:.17g} {:.17g}", p.x, p.y, p.z);
    if (cloud.has_labels()) fmt::format_to(std::back_inserter(out), " {}", cloud.labels[i]);
    out.push_back('\n');
  }
  return fmt::to_string(out);
}

void write_xyz(const PointCloud& cloud, const std::filesystem::path& path) {
  if (cloud.has_labels() && cloud.labels.size() != cloud.size()) throw Error("label count does not match point count");
  write_file_atomic(path, format_xyz(cloud));
}

std::vector<std::int32_t> parse_labels(std::string_view text) {
  std::vector<std::int32_t> labels;
  for_each_line(text, [&](std::size_t line_no, const std::vector<std::string_view>& tokens) {
    std::int32_t label = 0;
    if (tokens.size() != 1 || !parse_number(tokens[0], label))
      throw Error(fmt::format("line {}: malformed label", line_no));
    labels.push_back(label);
  });
  return labels;
}

std::vector<std::int32_t> load_labels(const std::filesystem::path& path) {
  try {
    return parse_labels(read_text_file(path));
  } catch (const Error& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

PixelLabelMap parse_pixel_labels(std::string_view text) {
  PixelLabelMap out;
  bool scores = false;
  bool header = false;
  for_each_line(text, [&](std::size_t line_no, const std::vector<std::string_view>& tokens) {
    const auto fail = [line_no](const std::string& what) {
      throw Error(fmt::format("line {}: {}", line_no, what));
    };
    if (!header) {
      if (tokens.size() != 2 || (tokens[0] != "labels" && tokens[0] != "scores"))
        fail("expected header 'labels K' or 'scores K'");
      if (!parse_number(tokens[1], out.num_classes) || out.num_classes < 1) fail("malformed class count");
      scores = tokens[0] == "scores";
      header = true;
      return;
    }
    if (scores) {
      std::vector<double> row(tokens.size());
      for (std::size_t i = 0; i < tokens.size(); ++i)
        if (!parse_number(tokens[i], row[i]) || !std::isfinite(row[i])) fail("malformed score");
      out.scores.push_back(std::move(row));
    } else {
      std::vector<std::int32_t> row(tokens.size());
      for (std::size_t i = 0; i < tokens.size(); ++i)
        if (!parse_number(tokens[i], row[i]) || row[i] < 0 || row[i] >= out.num_classes) fail("malformed label");
      out.labels.push_back(std::move(row));
    }
  });
  if (!header) throw Error("empty pixel label file");
  return out;
}

PixelLabelMap load_pixel_labels(const std::filesystem::path& path) {
  try {
    return parse_pixel_labels(read_text_file(path));
  } catch (const Error& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

std::string format_pixel_labels(const PixelLabelMap& pixels) {
  std::string out = fmt::format("{} {}\n", pixels.has_scores() ? "scores" : "labels", pixels.num_classes);
  if (pixels.has_scores()) {
    for (const auto& row : pixels.scores) out += fmt::format("{:.17g}\n", fmt::join(row, " "));
  } else {
    for (const auto& row : pixels.labels) out += fmt::format("{}\n", fmt::join(row, " "));
  }
  return out;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::uint8_t> read_binary_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file_atomic(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::filesystem::path tmp = path;
  tmp += fmt::format(".tmp.{}", static_cast<long>(::getpid()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) {
      out.close();
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw Error("write failed for " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error("cannot replace " + path.string());
  }
}

void write_file_atomic(const std::filesystem::path& path, std::string_view text) {
  write_file_atomic(path, std::span<const std::uint8_t>(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

}  // namespace ellipsoid
