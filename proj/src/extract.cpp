// SPDX-License-Identifier: Apache-2.0
#include "bldmap/extract.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace bldmap {

void ExtractParams::validate() const {
  if (!(ht > 0.0)) throw Error(ErrorCode::ConfigError, "ht must be positive");
  check_kernel(k1);
  check_kernel(k2);
  check_kernel(k3);
  if (rt < 1) throw Error(ErrorCode::ConfigError, "rt must be at least 1");
  if (!(dt >= 0.0 && dt <= 1.0)) throw Error(ErrorCode::ConfigError, "dt must lie in [0,1]");
  if (median_roof) check_kernel(*median_roof);
}

Mask threshold_candidates(const ElevationRaster& ndhm, double ht) {
  if (!(ht > 0.0)) throw Error(ErrorCode::ConfigError, "ht must be positive");
  Mask out(ndhm.spec(), 0);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = ndhm[i] >= ht ? 1 : 0;
  return out;
}

Mask apply_water_mask(const Mask& candidates, const WaterMask& water) {
  require_same_grid(candidates, water.mask, "apply_water_mask");
  return mask_and_not(candidates, water.mask);
}

Mask morphological_filter(const Mask& candidates, int k1, KernelShape shape) { return open(candidates, k1, shape); }

CountRaster roughness_layer(const ElevationRaster& ndhm, int k2) {
  check_kernel(k2);
  const auto& spec = ndhm.spec();
  const int w = spec.width;
  const int h = spec.height;

  std::vector<std::int64_t> rounded(ndhm.size());
  std::int64_t lo = 0;
  std::int64_t hi = 0;
  for (std::size_t i = 0; i < ndhm.size(); ++i) {
    // Empty cells read as ground level.
    const double v = is_nodata(ndhm[i]) ? 0.0 : ndhm[i];
    rounded[i] = static_cast<std::int64_t>(std::round(v));
    if (i == 0 || rounded[i] < lo) lo = rounded[i];
    if (i == 0 || rounded[i] > hi) hi = rounded[i];
  }
  std::vector<int> hist(static_cast<std::size_t>(hi - lo + 1), 0);
  int distinct = 0;
  auto add = [&](std::size_t i) {
    if (hist[static_cast<std::size_t>(rounded[i] - lo)]++ == 0) ++distinct;
  };
  auto remove = [&](std::size_t i) {
    if (--hist[static_cast<std::size_t>(rounded[i] - lo)] == 0) --distinct;
  };

  const int half = k2 / 2;
  CountRaster out(spec, 0);
  for (int r = 0; r < h; ++r) {
    const int r0 = std::max(0, r - half);
    const int r1 = std::min(h - 1, r + half);
    auto column = [&](int c, bool insert) {
      for (int rr = r0; rr <= r1; ++rr) insert ? add(spec.index(c, rr)) : remove(spec.index(c, rr));
    };
    for (int c = 0; c <= std::min(w - 1, half); ++c) column(c, true);
    for (int c = 0; c < w; ++c) {
      out(c, r) = distinct;
      if (c - half >= 0) column(c - half, false);
      if (c + half + 1 < w) column(c + half + 1, true);
    }
    for (int c = std::max(0, w - half); c < w; ++c) column(c, false);
  }
  return out;
}

CandidateSet planarity_filter(const Mask& candidates, const CountRaster& roughness, int rt, double dt) {
  require_same_grid(candidates, roughness, "planarity_filter");
  if (!(dt >= 0.0 && dt <= 1.0)) throw Error(ErrorCode::ConfigError, "dt must lie in [0,1]");

  const auto labels = connected_components(candidates, Connectivity::Eight);
  std::vector<CandidateStats> stats(static_cast<std::size_t>(label_count(labels)) + 1);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const auto l = static_cast<std::size_t>(labels[i]);
    if (l == 0) continue;
    ++stats[l].cell_count;
    if (roughness[i] < rt) ++stats[l].planar_cell_count;
  }
  std::vector<std::uint8_t> keep(stats.size(), 0);
  for (std::size_t l = 1; l < stats.size(); ++l) {
    auto& s = stats[l];
    s.planarity = static_cast<double>(s.planar_cell_count) / static_cast<double>(s.cell_count);
    keep[l] = s.planarity < dt ? 0 : 1;
  }

  CandidateSet out{Mask(candidates.spec(), 0), LabelRaster(candidates.spec(), 0), {}};
  // Survivors are relabelled densely in their original order.
  std::vector<std::int32_t> remap(stats.size(), 0);
  out.stats.emplace_back();
  for (std::size_t l = 1; l < stats.size(); ++l) {
    if (!keep[l]) continue;
    remap[l] = static_cast<std::int32_t>(out.stats.size());
    out.stats.push_back(stats[l]);
  }
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const auto l = remap[static_cast<std::size_t>(labels[i])];
    if (l == 0) continue;
    out.mask[i] = 1;
    out.labels[i] = l;
  }
  return out;
}

Mask refine_boundary(const Mask& mask, int k3) { return dilate(mask, k3); }

ElevationRaster build_3d(const ElevationRaster& ndhm, const Mask& map2d, std::optional<int> median_roof) {
  require_same_grid(ndhm, map2d, "build_3d");
  const auto& spec = ndhm.spec();
  ElevationRaster out(spec, kNoData);
  for (std::size_t i = 0; i < out.size(); ++i)
    if (map2d[i]) out[i] = ndhm[i];
  if (!median_roof) return out;

  check_kernel(*median_roof);
  const int half = *median_roof / 2;
  ElevationRaster smoothed = out;
  std::vector<double> window;
  for (int r = 0; r < spec.height; ++r) {
    for (int c = 0; c < spec.width; ++c) {
      if (!map2d(c, r)) continue;
      window.clear();
      for (int dy = -half; dy <= half; ++dy)
        for (int dx = -half; dx <= half; ++dx) {
          const int cc = c + dx;
          const int rr = r + dy;
          if (spec.in_bounds(cc, rr) && map2d(cc, rr) && !is_nodata(out(cc, rr))) window.push_back(out(cc, rr));
        }
      if (window.empty()) continue;
      std::sort(window.begin(), window.end());
      const auto n = window.size();
      smoothed(c, r) = n % 2 == 1 ? window[n / 2] : 0.5 * (window[n / 2 - 1] + window[n / 2]);
    }
  }
  return smoothed;
}

ExtractResult extract_buildings(const TerrainSet& terrain, const WaterMask& water, const ExtractParams& params) {
  params.validate();
  require_same_grid(terrain.ndhm, water.mask, "extract_buildings: water mask grid differs");

  ExtractResult result;
  result.candidates = threshold_candidates(terrain.ndhm, params.ht);
  result.after_water = apply_water_mask(result.candidates, water);
  result.after_opening = morphological_filter(result.after_water, params.k1, params.kernel_shape);
  const auto roughness = roughness_layer(terrain.ndhm, params.k2);
  result.after_planarity = planarity_filter(result.after_opening, roughness, params.rt, params.dt);
  result.maps.map2d = refine_boundary(result.after_planarity.mask, params.k3);
  result.maps.map3d = build_3d(terrain.ndhm, result.maps.map2d, params.median_roof);

  result.diff = DifferenceMap(terrain.ndhm.spec(), 0);
  for (std::size_t i = 0; i < result.diff.size(); ++i) {
    DiffStage stage = DiffStage::None;
    if (static_cast<bool>(result.candidates[i]) == static_cast<bool>(result.maps.map2d[i]))
      stage = DiffStage::None;
    else if (result.candidates[i] && !result.after_water[i])
      stage = DiffStage::Water;
    else if (result.after_water[i] && !result.after_opening[i])
      stage = DiffStage::Morphology;
    else if (result.after_opening[i] && !result.after_planarity.mask[i])
      stage = DiffStage::Planarity;
    else if (!result.candidates[i] && result.maps.map2d[i])
      stage = DiffStage::Dilation;
    result.diff[i] = static_cast<std::int32_t>(stage);
  }
  return result;
}

}  // namespace bldmap
