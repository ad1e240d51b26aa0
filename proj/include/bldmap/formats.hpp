// SPDX-License-Identifier: Apache-2.0
//
// ESRI ASCII Grid I/O. Output is locale-independent with "\n" line endings,
// so identical rasters always produce identical bytes.

#pragma once

#include <filesystem>
#include <iosfwd>

#include "bldmap/raster.hpp"

namespace bldmap {

inline constexpr double kAsciiNoData = -9999.0;

struct AsciiGridHeader {
  int ncols = 1;
  int nrows = 1;
  double xllcorner = 0.0;
  double yllcorner = 0.0;
  double cellsize = 0.5;
  double nodata_value = kAsciiNoData;

  GridSpec grid() const { return {xllcorner, yllcorner, cellsize, ncols, nrows}; }
};

/// Elevations print with three decimals and nodata cells as the sentinel.
void write_ascii_grid(std::ostream& out, const ElevationRaster& raster);
/// Masks print as 0/1.
void write_ascii_grid(std::ostream& out, const Mask& raster);
/// Counts and labels print as integers.
void write_ascii_grid(std::ostream& out, const LabelRaster& raster);

template <typename T>
void write_ascii_grid(const std::filesystem::path& path, const Raster<T>& raster);

struct AsciiGrid {
  AsciiGridHeader header;
  ElevationRaster values;  // sentinel cells become nodata (NaN)
};

AsciiGrid read_ascii_grid(std::istream& in);
AsciiGrid read_ascii_grid(const std::filesystem::path& path);

/// Nonzero, non-nodata cells become 1.
Mask to_mask(const ElevationRaster& raster);
/// Values rounded to integers; nodata becomes 0.
LabelRaster to_labels(const ElevationRaster& raster);

}  // namespace bldmap
