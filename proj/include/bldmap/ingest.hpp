// SPDX-License-Identifier: Apache-2.0
//
// Point-cloud ingestion: a LAS 1.1-1.4 reader restricted to point formats
// 0-3 (coordinates only) and a plain-text XYZ reader.

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace bldmap {

struct Point3 {
  double x = 0.0;  // projected easting, m
  double y = 0.0;  // projected northing, m
  double z = 0.0;  // elevation, m

  friend bool operator==(const Point3&, const Point3&) = default;
};

struct Bounds {
  double min_x = 0.0;
  double min_y = 0.0;
  double max_x = 0.0;
  double max_y = 0.0;

  bool contains(double x, double y) const {
    return x >= min_x && x <= max_x && y >= min_y && y <= max_y;
  }
  friend bool operator==(const Bounds&, const Bounds&) = default;
};

Bounds compute_bounds(std::span<const Point3> points);

struct PointCloud {
  std::vector<Point3> points;
  Bounds bounds;
  std::string source;
  // Records discarded because de-quantization or parsing produced a
  // non-finite coordinate.
  std::size_t dropped_nonfinite = 0;

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }
};

/// Builds a cloud from finite points; non-finite ones are counted and
/// dropped. Throws EmptyCloud when nothing survives.
PointCloud make_cloud(std::vector<Point3> points, std::string source);

struct LasHeaderInfo {
  std::uint8_t version_major = 1;
  std::uint8_t version_minor = 2;
  std::uint8_t point_format_id = 0;
  std::uint64_t point_count = 0;
  std::array<double, 3> scale{0.01, 0.01, 0.01};
  std::array<double, 3> offset{0.0, 0.0, 0.0};
  std::uint16_t point_record_length = 20;
  std::uint32_t data_offset = 227;
  std::uint16_t header_size = 227;
};

inline constexpr std::size_t kLasMinHeaderSize = 227;

LasHeaderInfo parse_las_header(std::span<const std::byte> bytes);
PointCloud read_las_points(std::span<const std::byte> bytes, const LasHeaderInfo& header);

/// Serializes a LAS 1.2 file with the given point format (0-3); attributes
/// beyond x,y,z are zero-filled.
std::vector<std::byte> write_las(std::span<const Point3> points, std::array<double, 3> scale,
                                 std::array<double, 3> offset, std::uint8_t point_format_id = 1);

PointCloud read_xyz_text(std::istream& in, std::string source = "<stream>");
PointCloud read_xyz_text(std::string_view text);
void write_xyz_text(std::ostream& out, std::span<const Point3> points);

enum class InputFormat { Auto, Las, Xyz };

/// Reads a point file. Auto selects LAS for a ".las" extension (any case)
/// and XYZ text otherwise.
PointCloud load_point_file(const std::filesystem::path& path, InputFormat format = InputFormat::Auto);

/// Concatenates clouds, recomputing bounds.
PointCloud merge_clouds(std::vector<PointCloud> clouds);

}  // namespace bldmap
