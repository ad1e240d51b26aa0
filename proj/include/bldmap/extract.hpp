// SPDX-License-Identifier: Apache-2.0
//
// Building extraction from the normalized height model: height threshold,
// water masking, opening, planarity filtering, boundary dilation and the
// height-valued building raster.

#pragma once

#include <optional>
#include <vector>

#include "bldmap/hydro.hpp"
#include "bldmap/raster.hpp"
#include "bldmap/terrain.hpp"

namespace bldmap {

struct ExtractParams {
  double ht = 1.5;  // m
  int k1 = 7;
  int k2 = 5;
  int rt = 4;
  double dt = 0.1;
  int k3 = 5;
  KernelShape kernel_shape = KernelShape::Square;
  std::optional<int> median_roof;

  /// Throws ConfigError/BadKernel on out-of-range values.
  void validate() const;

  friend bool operator==(const ExtractParams&, const ExtractParams&) = default;
};

struct CandidateStats {
  std::size_t cell_count = 0;
  std::size_t planar_cell_count = 0;
  double planarity = 0.0;
};

struct CandidateSet {
  Mask mask;
  LabelRaster labels;
  // Indexed by label; entry 0 is unused.
  std::vector<CandidateStats> stats;
};

struct BuildingMaps {
  Mask map2d;
  ElevationRaster map3d;
};

/// Stage that removed (1-3) or added (4) a cell relative to the raw
/// height-threshold candidates.
enum class DiffStage : std::int32_t { None = 0, Water = 1, Morphology = 2, Planarity = 3, Dilation = 4 };
using DifferenceMap = LabelRaster;

Mask threshold_candidates(const ElevationRaster& ndhm, double ht);
Mask apply_water_mask(const Mask& candidates, const WaterMask& water);
Mask morphological_filter(const Mask& candidates, int k1, KernelShape shape = KernelShape::Square);

/// Per-cell number of distinct NDHM values, rounded half away from zero to
/// whole meters, within the k2 x k2 window clipped to the grid.
CountRaster roughness_layer(const ElevationRaster& ndhm, int k2);

/// Labels the candidates 8-connected, counts planar cells (roughness < rt)
/// per label and drops every label whose planarity is below dt.
CandidateSet planarity_filter(const Mask& candidates, const CountRaster& roughness, int rt, double dt);

Mask refine_boundary(const Mask& mask, int k3);

/// NDHM values under the 2D map, nodata elsewhere. With `median_roof` the
/// values are median-filtered over building cells only.
ElevationRaster build_3d(const ElevationRaster& ndhm, const Mask& map2d, std::optional<int> median_roof = {});

struct ExtractResult {
  BuildingMaps maps;
  DifferenceMap diff;
  // Masks after each stage, in order: threshold, water, opening, planarity.
  Mask candidates;
  Mask after_water;
  Mask after_opening;
  CandidateSet after_planarity;
};

ExtractResult extract_buildings(const TerrainSet& terrain, const WaterMask& water, const ExtractParams& params);

}  // namespace bldmap
