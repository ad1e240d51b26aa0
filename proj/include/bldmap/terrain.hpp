// SPDX-License-Identifier: Apache-2.0
//
// Ground model: break-line detection, enclosed-object filtering that keeps
// ramps, bridges and overpasses connected to the ground, ground filling and
// the normalized height model.

#pragma once

#include "bldmap/raster.hpp"

namespace bldmap {

inline constexpr double kDefaultSlopeThreshold = 1.0;
// Break-line coverage at or above this fraction of the grid is rejected.
inline constexpr double kMaxBreaklineFraction = 0.95;

struct TerrainSet {
  ElevationRaster dsm;
  ElevationRaster dtm;
  ElevationRaster ndhm;
  CountRaster occupancy;
};

/// Cell is set when its elevation differs from some 8-neighbor by more than
/// `slope_threshold` meters. Expects a fully valued DSM.
Mask breakline_map(const ElevationRaster& dsm, double slope_threshold = kDefaultSlopeThreshold);

/// Splits the grid into ground and objects. The complement of the break-lines
/// is labelled 4-connected; the largest component and every component that
/// touches the grid border are ground, the rest are objects. Break-line
/// cells join the objects they are 8-adjacent to.
Mask extract_objects(const Mask& breaklines);

/// DTM: the DSM on ground cells; object cells take the nearest ground value.
ElevationRaster fill_ground(const ElevationRaster& dsm, const Mask& objects);

/// dsm - dtm, clamped below at zero.
ElevationRaster compute_ndhm(const ElevationRaster& dsm, const ElevationRaster& dtm);

/// Convenience: interpolated DSM → break-lines → objects → DTM → NDHM.
TerrainSet build_terrain(ElevationRaster dsm, CountRaster occupancy,
                         double slope_threshold = kDefaultSlopeThreshold);

/// Same, with an externally supplied DTM on the DSM's grid.
TerrainSet build_terrain_with_dtm(ElevationRaster dsm, CountRaster occupancy, ElevationRaster dtm);

}  // namespace bldmap
