// SPDX-License-Identifier: Apache-2.0
#include "bldmap/ingest.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <iterator>
#include <limits>
#include <ostream>
#include <sstream>

#include "bldmap/error.hpp"

namespace bldmap {

namespace {

template <typename T>
T read_le(std::span<const std::byte> bytes, std::size_t offset) {
  T value;
  std::memcpy(&value, bytes.data() + offset, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) {
    auto* p = reinterpret_cast<unsigned char*>(&value);
    std::reverse(p, p + sizeof(T));
  }
  return value;
}

template <typename T>
void write_le(std::vector<std::byte>& out, std::size_t offset, T value) {
  if constexpr (std::endian::native == std::endian::big) {
    auto* p = reinterpret_cast<unsigned char*>(&value);
    std::reverse(p, p + sizeof(T));
  }
  std::memcpy(out.data() + offset, &value, sizeof(T));
}

// Minimum record size of LAS point formats 0..3.
constexpr std::array<std::uint16_t, 4> kMinRecordLength{20, 28, 26, 34};

bool finite_point(const Point3& p) {
  return std::isfinite(p.x) && std::isfinite(p.y) && std::isfinite(p.z);
}

}  // namespace

Bounds compute_bounds(std::span<const Point3> points) {
  if (points.empty()) return {};
  Bounds b{points[0].x, points[0].y, points[0].x, points[0].y};
  for (const auto& p : points) {
    b.min_x = std::min(b.min_x, p.x);
    b.min_y = std::min(b.min_y, p.y);
    b.max_x = std::max(b.max_x, p.x);
    b.max_y = std::max(b.max_y, p.y);
  }
  return b;
}

PointCloud make_cloud(std::vector<Point3> points, std::string source) {
  PointCloud cloud;
  cloud.source = std::move(source);
  const auto before = points.size();
  std::erase_if(points, [](const Point3& p) { return !finite_point(p); });
  cloud.dropped_nonfinite = before - points.size();
  if (points.empty()) throw Error(ErrorCode::EmptyCloud, "no points in " + cloud.source);
  cloud.points = std::move(points);
  cloud.bounds = compute_bounds(cloud.points);
  return cloud;
}

LasHeaderInfo parse_las_header(std::span<const std::byte> bytes) {
  if (bytes.size() < 4) throw Error(ErrorCode::Truncated, "fewer than 4 bytes");
  if (std::memcmp(bytes.data(), "LASF", 4) != 0)
    throw Error(ErrorCode::BadSignature, "missing LASF signature");
  if (bytes.size() < kLasMinHeaderSize)
    throw Error(ErrorCode::Truncated, "header needs 227 bytes, have " + std::to_string(bytes.size()));

  LasHeaderInfo h;
  h.version_major = read_le<std::uint8_t>(bytes, 24);
  h.version_minor = read_le<std::uint8_t>(bytes, 25);
  if (h.version_major != 1)
    throw Error(ErrorCode::UnsupportedVersion,
                "LAS " + std::to_string(h.version_major) + "." + std::to_string(h.version_minor));

  h.header_size = read_le<std::uint16_t>(bytes, 94);
  h.data_offset = read_le<std::uint32_t>(bytes, 96);
  h.point_format_id = read_le<std::uint8_t>(bytes, 104);
  h.point_record_length = read_le<std::uint16_t>(bytes, 105);
  h.point_count = read_le<std::uint32_t>(bytes, 107);
  for (int i = 0; i < 3; ++i) {
    h.scale[i] = read_le<double>(bytes, 131 + 8 * i);
    h.offset[i] = read_le<double>(bytes, 155 + 8 * i);
  }

  if (h.point_format_id > 3)
    throw Error(ErrorCode::UnsupportedPointFormat, "point format " + std::to_string(h.point_format_id));
  if (h.header_size < kLasMinHeaderSize || bytes.size() < h.header_size)
    throw Error(ErrorCode::Truncated, "header declares " + std::to_string(h.header_size) +
                                          " bytes, have " + std::to_string(bytes.size()));
  if (h.point_record_length < kMinRecordLength[h.point_format_id])
    throw Error(ErrorCode::Truncated, "point record length " + std::to_string(h.point_record_length) +
                                          " too short for format " + std::to_string(h.point_format_id));
  for (double s : h.scale)
    if (!(s > 0.0) || !std::isfinite(s))
      throw Error(ErrorCode::UnsupportedPointFormat, "scale factors must be positive");

  // LAS 1.4 carries a 64-bit count; the legacy field may be zero.
  if (h.version_minor >= 4 && h.header_size >= 255) {
    const auto count64 = read_le<std::uint64_t>(bytes, 247);
    if (h.point_count == 0 || count64 > h.point_count) h.point_count = count64;
  }
  return h;
}

PointCloud read_las_points(std::span<const std::byte> bytes, const LasHeaderInfo& header) {
  if (header.point_count == 0) throw Error(ErrorCode::EmptyCloud, "LAS declares zero points");
  const std::size_t stride = header.point_record_length;
  const std::size_t start = header.data_offset;
  if (bytes.size() < start)
    throw Error(ErrorCode::Truncated, "point data offset beyond end of file");
  const std::size_t available = (bytes.size() - start) / stride;
  if (available < header.point_count)
    throw Error(ErrorCode::Truncated, "expected " + std::to_string(header.point_count) +
                                          " point records, found " + std::to_string(available));

  std::vector<Point3> points;
  points.reserve(header.point_count);
  for (std::size_t i = 0; i < header.point_count; ++i) {
    const std::size_t at = start + i * stride;
    const auto rx = read_le<std::int32_t>(bytes, at);
    const auto ry = read_le<std::int32_t>(bytes, at + 4);
    const auto rz = read_le<std::int32_t>(bytes, at + 8);
    points.push_back({rx * header.scale[0] + header.offset[0], ry * header.scale[1] + header.offset[1],
                      rz * header.scale[2] + header.offset[2]});
  }
  return make_cloud(std::move(points), "las");
}

std::vector<std::byte> write_las(std::span<const Point3> points, std::array<double, 3> scale,
                                 std::array<double, 3> offset, std::uint8_t point_format_id) {
  if (point_format_id > 3)
    throw Error(ErrorCode::UnsupportedPointFormat, "point format " + std::to_string(point_format_id));
  const std::uint16_t record = kMinRecordLength[point_format_id];
  std::vector<std::byte> out(kLasMinHeaderSize + points.size() * record, std::byte{0});
  std::memcpy(out.data(), "LASF", 4);
  write_le<std::uint8_t>(out, 24, 1);
  write_le<std::uint8_t>(out, 25, 2);
  const char software[] = "bldmap";
  std::memcpy(out.data() + 58, software, sizeof(software) - 1);
  write_le<std::uint16_t>(out, 94, static_cast<std::uint16_t>(kLasMinHeaderSize));
  write_le<std::uint32_t>(out, 96, static_cast<std::uint32_t>(kLasMinHeaderSize));
  write_le<std::uint8_t>(out, 104, point_format_id);
  write_le<std::uint16_t>(out, 105, record);
  write_le<std::uint32_t>(out, 107, static_cast<std::uint32_t>(points.size()));
  write_le<std::uint32_t>(out, 111, static_cast<std::uint32_t>(points.size()));
  for (int i = 0; i < 3; ++i) {
    write_le<double>(out, 131 + 8 * i, scale[i]);
    write_le<double>(out, 155 + 8 * i, offset[i]);
  }
  const Bounds b = compute_bounds(points);
  double min_z = points.empty() ? 0.0 : points[0].z;
  double max_z = min_z;
  for (const auto& p : points) {
    min_z = std::min(min_z, p.z);
    max_z = std::max(max_z, p.z);
  }
  write_le<double>(out, 179, b.max_x);
  write_le<double>(out, 187, b.min_x);
  write_le<double>(out, 195, b.max_y);
  write_le<double>(out, 203, b.min_y);
  write_le<double>(out, 211, max_z);
  write_le<double>(out, 219, min_z);

  auto quantize = [](double v, double s, double o) {
    return static_cast<std::int32_t>(std::llround((v - o) / s));
  };
  for (std::size_t i = 0; i < points.size(); ++i) {
    const std::size_t at = kLasMinHeaderSize + i * record;
    write_le<std::int32_t>(out, at, quantize(points[i].x, scale[0], offset[0]));
    write_le<std::int32_t>(out, at + 4, quantize(points[i].y, scale[1], offset[1]));
    write_le<std::int32_t>(out, at + 8, quantize(points[i].z, scale[2], offset[2]));
  }
  return out;
}

namespace {

bool parse_double(std::string_view token, double& value) {
  const char* first = token.data();
  const char* last = token.data() + token.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  return ec == std::errc() && ptr == last;
}

}  // namespace

PointCloud read_xyz_text(std::istream& in, std::string source) {
  std::vector<Point3> points;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;

    std::array<double, 3> xyz{};
    std::size_t n = 0;
    std::size_t pos = first;
    while (pos < line.size()) {
      const auto end = line.find_first_of(" \t,", pos);
      const std::string_view token(line.data() + pos, (end == std::string::npos ? line.size() : end) - pos);
      if (!token.empty()) {
        if (n == 3)
          throw Error(ErrorCode::ParseError, source + ":" + std::to_string(line_no) + ": expected 3 values");
        if (!parse_double(token, xyz[n]))
          throw Error(ErrorCode::ParseError,
                      source + ":" + std::to_string(line_no) + ": bad number '" + std::string(token) + "'");
        ++n;
      }
      if (end == std::string::npos) break;
      pos = end + 1;
    }
    if (n != 3)
      throw Error(ErrorCode::ParseError, source + ":" + std::to_string(line_no) + ": expected 3 values");
    points.push_back({xyz[0], xyz[1], xyz[2]});
  }
  return make_cloud(std::move(points), std::move(source));
}

PointCloud read_xyz_text(std::string_view text) {
  std::istringstream in{std::string(text)};
  return read_xyz_text(in);
}

void write_xyz_text(std::ostream& out, std::span<const Point3> points) {
  char buf[128];
  for (const auto& p : points) {
    for (int i = 0; i < 3; ++i) {
      const double v = i == 0 ? p.x : (i == 1 ? p.y : p.z);
      auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
      out.write(buf, ptr - buf);
      out.put(i == 2 ? '\n' : ' ');
    }
  }
}

PointCloud load_point_file(const std::filesystem::path& path, InputFormat format) {
  if (format == InputFormat::Auto) {
    auto ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    format = ext == ".las" ? InputFormat::Las : InputFormat::Xyz;
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot open " + path.string());
  if (format == InputFormat::Xyz) return read_xyz_text(in, path.string());

  std::vector<char> raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const auto bytes = std::as_bytes(std::span<const char>(raw));
  const auto header = parse_las_header(bytes);
  auto cloud = read_las_points(bytes, header);
  cloud.source = path.string();
  return cloud;
}

PointCloud merge_clouds(std::vector<PointCloud> clouds) {
  if (clouds.size() == 1) return std::move(clouds.front());
  PointCloud merged;
  for (auto& c : clouds) {
    if (!merged.source.empty()) merged.source += ";";
    merged.source += c.source;
    merged.dropped_nonfinite += c.dropped_nonfinite;
    merged.points.insert(merged.points.end(), c.points.begin(), c.points.end());
  }
  if (merged.points.empty()) throw Error(ErrorCode::EmptyCloud, "no input points");
  merged.bounds = compute_bounds(merged.points);
  return merged;
}

}  // namespace bldmap
