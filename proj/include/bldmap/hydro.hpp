// SPDX-License-Identifier: Apache-2.0
//
// Surface-water detection from point occupancy. Water returns few or no
// LiDAR points, so a window whose occupied-cell count falls well below the
// binomial expectation marks its center as water.

#pragma once

#include "bldmap/raster.hpp"

namespace bldmap {

struct WaterParams {
  int window = 9;
  double sigma_k = 2.0;
  double min_area = 1000.0;  // m^2
  double buffer = 5.0;       // m

  friend bool operator==(const WaterParams&, const WaterParams&) = default;
};

struct WaterMask {
  Mask mask;
  WaterParams params;
};

/// Occupied cells (count > 0) in the window around each cell, over in-bounds
/// cells only. `window` must be odd and at least 3.
CountRaster occupied_cell_count(const CountRaster& counts, int window);

/// Number of in-bounds cells of the window centered at each cell.
CountRaster window_cell_count(const GridSpec& spec, int window);

/// Fraction of cells holding at least one point.
double occupancy_fraction(const CountRaster& counts);

/// Flags a center as water when its occupied count is at or below
/// n*p - sigma_k*sqrt(n*p*(1-p)), with p the global occupied fraction and n
/// the in-bounds window size. p = 1 yields an empty mask; p = 0 throws
/// DegenerateOccupancy.
Mask classify_water(const CountRaster& counts, int window = 9, double sigma_k = 2.0);

/// Same test with an explicit occupancy fraction.
Mask classify_water_at(const CountRaster& counts, int window, double sigma_k, double p);

/// Drops 8-connected water bodies smaller than min_area and grows the rest
/// by ceil(buffer/gsd) cells (square dilation).
WaterMask filter_and_buffer(const Mask& water, const WaterParams& params);

/// classify_water followed by filter_and_buffer.
WaterMask detect_water(const CountRaster& counts, const WaterParams& params);

}  // namespace bldmap
