// SPDX-License-Identifier: Apache-2.0
#include "bldmap/terrain.hpp"

#include <algorithm>
#include <string>

namespace bldmap {

Mask breakline_map(const ElevationRaster& dsm, double slope_threshold) {
  if (!(slope_threshold > 0.0)) throw Error(ErrorCode::ConfigError, "slope threshold must be positive");
  const auto& spec = dsm.spec();
  Mask out(spec, 0);
  for (int row = 0; row < spec.height; ++row) {
    for (int col = 0; col < spec.width; ++col) {
      const double z = dsm(col, row);
      bool steep = false;
      for (int dy = -1; dy <= 1 && !steep; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          const int c = col + dx;
          const int r = row + dy;
          if ((dx == 0 && dy == 0) || !spec.in_bounds(c, r)) continue;
          if (std::abs(z - dsm(c, r)) > slope_threshold) {
            steep = true;
            break;
          }
        }
      }
      out(col, row) = steep ? 1 : 0;
    }
  }
  return out;
}

Mask extract_objects(const Mask& breaklines) {
  const auto& spec = breaklines.spec();
  const auto steep = count_true(breaklines);
  if (static_cast<double>(steep) >= kMaxBreaklineFraction * static_cast<double>(spec.cell_count()))
    throw Error(ErrorCode::DegenerateScene, "break-lines cover " + std::to_string(steep) + " of " +
                                               std::to_string(spec.cell_count()) + " cells");

  const auto labels = connected_components(mask_not(breaklines), Connectivity::Four);
  const auto sizes = label_sizes(labels);
  std::vector<std::uint8_t> is_ground(sizes.size(), 0);

  std::size_t largest = 0;
  for (std::size_t l = 1; l < sizes.size(); ++l)
    if (largest == 0 || sizes[l] > sizes[largest]) largest = l;
  if (largest != 0) is_ground[largest] = 1;

  auto mark_border = [&](int col, int row) {
    const auto l = labels(col, row);
    if (l > 0) is_ground[static_cast<std::size_t>(l)] = 1;
  };
  for (int col = 0; col < spec.width; ++col) {
    mark_border(col, 0);
    mark_border(col, spec.height - 1);
  }
  for (int row = 0; row < spec.height; ++row) {
    mark_border(0, row);
    mark_border(spec.width - 1, row);
  }

  Mask objects(spec, 0);
  for (std::size_t i = 0; i < objects.size(); ++i) {
    const auto l = labels[i];
    if (l > 0 && !is_ground[static_cast<std::size_t>(l)]) objects[i] = 1;
  }
  // Walls go with the object they bound.
  Mask out = objects;
  for (int row = 0; row < spec.height; ++row) {
    for (int col = 0; col < spec.width; ++col) {
      if (!breaklines(col, row)) continue;
      bool touches = false;
      for (int dy = -1; dy <= 1 && !touches; ++dy)
        for (int dx = -1; dx <= 1 && !touches; ++dx) {
          const int c = col + dx;
          const int r = row + dy;
          touches = spec.in_bounds(c, r) && objects(c, r);
        }
      if (touches) out(col, row) = 1;
    }
  }
  return out;
}

ElevationRaster fill_ground(const ElevationRaster& dsm, const Mask& objects) {
  require_same_grid(dsm, objects, "fill_ground");
  ElevationRaster sources(dsm.spec(), kNoData);
  bool any = false;
  for (std::size_t i = 0; i < dsm.size(); ++i) {
    if (!objects[i] && !is_nodata(dsm[i])) {
      sources[i] = dsm[i];
      any = true;
    }
  }
  if (!any) throw Error(ErrorCode::NoGround, "no ground cell to fill from");
  return interpolate_nearest(sources);
}

ElevationRaster compute_ndhm(const ElevationRaster& dsm, const ElevationRaster& dtm) {
  require_same_grid(dsm, dtm, "compute_ndhm: DSM and DTM grids differ");
  ElevationRaster out(dsm.spec(), kNoData);
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (is_nodata(dsm[i]) || is_nodata(dtm[i])) continue;
    out[i] = std::max(0.0, dsm[i] - dtm[i]);
  }
  return out;
}

TerrainSet build_terrain(ElevationRaster dsm, CountRaster occupancy, double slope_threshold) {
  const auto objects = extract_objects(breakline_map(dsm, slope_threshold));
  auto dtm = fill_ground(dsm, objects);
  auto ndhm = compute_ndhm(dsm, dtm);
  return {std::move(dsm), std::move(dtm), std::move(ndhm), std::move(occupancy)};
}

TerrainSet build_terrain_with_dtm(ElevationRaster dsm, CountRaster occupancy, ElevationRaster dtm) {
  auto ndhm = compute_ndhm(dsm, dtm);
  // Holes in an external DTM read as ground level.
  for (auto& v : ndhm.values())
    if (is_nodata(v)) v = 0.0;
  return {std::move(dsm), std::move(dtm), std::move(ndhm), std::move(occupancy)};
}

}  // namespace bldmap
