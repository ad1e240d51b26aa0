// SPDX-License-Identifier: Apache-2.0
#include "bldmap/formats.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <string>

namespace bldmap {

namespace {

void put_shortest(std::ostream& out, double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  out.write(buf, ptr - buf);
}

void put_fixed3(std::ostream& out, double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, 3);
  std::string_view s(buf, static_cast<std::size_t>(ptr - buf));
  if (s == "-0.000") s = "0.000";
  out << s;
}

void put_header(std::ostream& out, const GridSpec& spec) {
  out << "ncols " << spec.width << '\n';
  out << "nrows " << spec.height << '\n';
  out << "xllcorner ";
  put_shortest(out, spec.origin_x);
  out << "\nyllcorner ";
  put_shortest(out, spec.origin_y);
  out << "\ncellsize ";
  put_shortest(out, spec.gsd);
  out << "\nNODATA_value ";
  put_shortest(out, kAsciiNoData);
  out << '\n';
}

// Rows go out north to south.
template <typename T, typename Put>
void put_rows(std::ostream& out, const Raster<T>& raster, Put put) {
  put_header(out, raster.spec());
  for (int row = raster.height() - 1; row >= 0; --row) {
    for (int col = 0; col < raster.width(); ++col) {
      if (col > 0) out << ' ';
      put(raster(col, row));
    }
    out << '\n';
  }
}

bool parse_number(std::string_view token, double& value) {
  const char* first = token.data();
  const char* last = first + token.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  return ec == std::errc() && ptr == last;
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

}  // namespace

void write_ascii_grid(std::ostream& out, const ElevationRaster& raster) {
  put_rows(out, raster, [&](double v) {
    if (is_nodata(v))
      put_shortest(out, kAsciiNoData);
    else
      put_fixed3(out, v);
  });
}

void write_ascii_grid(std::ostream& out, const Mask& raster) {
  put_rows(out, raster, [&](std::uint8_t v) { out << (v ? '1' : '0'); });
}

void write_ascii_grid(std::ostream& out, const LabelRaster& raster) {
  put_rows(out, raster, [&](std::int32_t v) { out << v; });
}

template <typename T>
void write_ascii_grid(const std::filesystem::path& path, const Raster<T>& raster) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoFailure, "cannot write " + path.string());
  write_ascii_grid(out, raster);
  out.flush();
  if (!out) throw Error(ErrorCode::IoFailure, "write failed for " + path.string());
}

template void write_ascii_grid(const std::filesystem::path&, const ElevationRaster&);
template void write_ascii_grid(const std::filesystem::path&, const Mask&);
template void write_ascii_grid(const std::filesystem::path&, const LabelRaster&);

AsciiGrid read_ascii_grid(std::istream& in) {
  std::map<std::string, double> keys;
  std::string token;
  std::string pending;  // first data token, once the header ends
  while (in >> token) {
    double dummy;
    if (parse_number(token, dummy)) {
      pending = token;
      break;
    }
    std::string value;
    if (!(in >> value)) throw Error(ErrorCode::MalformedHeader, "missing value for " + token);
    double v;
    if (!parse_number(value, v)) throw Error(ErrorCode::MalformedHeader, "bad number for " + token + ": " + value);
    keys[lower(token)] = v;
  }

  auto need = [&](const char* key) {
    auto it = keys.find(key);
    if (it == keys.end()) throw Error(ErrorCode::MalformedHeader, std::string("missing ") + key);
    return it->second;
  };
  AsciiGrid grid;
  auto& h = grid.header;
  const double ncols = need("ncols");
  const double nrows = need("nrows");
  if (ncols < 1 || nrows < 1 || ncols != std::floor(ncols) || nrows != std::floor(nrows))
    throw Error(ErrorCode::MalformedHeader, "ncols and nrows must be positive integers");
  h.ncols = static_cast<int>(ncols);
  h.nrows = static_cast<int>(nrows);
  h.cellsize = need("cellsize");
  if (!(h.cellsize > 0.0)) throw Error(ErrorCode::MalformedHeader, "cellsize must be positive");
  if (keys.count("xllcorner"))
    h.xllcorner = keys["xllcorner"];
  else
    h.xllcorner = need("xllcenter") - 0.5 * h.cellsize;
  if (keys.count("yllcorner"))
    h.yllcorner = keys["yllcorner"];
  else
    h.yllcorner = need("yllcenter") - 0.5 * h.cellsize;
  if (keys.count("nodata_value")) h.nodata_value = keys["nodata_value"];

  grid.values = ElevationRaster(h.grid(), kNoData);
  const std::size_t expected = grid.values.size();
  std::size_t n = 0;
  auto store = [&](const std::string& t) {
    double v;
    if (!parse_number(t, v)) throw Error(ErrorCode::ShapeMismatch, "non-numeric cell value '" + t + "'");
    if (n < expected) {
      const int row = h.nrows - 1 - static_cast<int>(n / static_cast<std::size_t>(h.ncols));
      const int col = static_cast<int>(n % static_cast<std::size_t>(h.ncols));
      grid.values(col, row) = v == h.nodata_value ? kNoData : v;
    }
    ++n;
  };
  if (!pending.empty()) store(pending);
  while (in >> token) store(token);
  if (n != expected)
    throw Error(ErrorCode::ShapeMismatch,
                "expected " + std::to_string(expected) + " cells, found " + std::to_string(n));
  return grid;
}

AsciiGrid read_ascii_grid(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot open " + path.string());
  return read_ascii_grid(in);
}

Mask to_mask(const ElevationRaster& raster) {
  Mask out(raster.spec(), 0);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = (!is_nodata(raster[i]) && raster[i] != 0.0) ? 1 : 0;
  return out;
}

LabelRaster to_labels(const ElevationRaster& raster) {
  LabelRaster out(raster.spec(), 0);
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = is_nodata(raster[i]) ? 0 : static_cast<std::int32_t>(std::llround(raster[i]));
  return out;
}

}  // namespace bldmap
