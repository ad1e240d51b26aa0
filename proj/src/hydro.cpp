// SPDX-License-Identifier: Apache-2.0
#include "bldmap/hydro.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>

namespace bldmap {

namespace {

void check_window(int window) {
  check_kernel(window);
  if (window < 3) throw Error(ErrorCode::BadKernel, "water window must be at least 3");
}

// Clipped box sum of a 0/1 indicator via a summed-area table.
CountRaster box_count(const GridSpec& spec, int window, const std::vector<std::uint8_t>& indicator) {
  const int w = spec.width;
  const int h = spec.height;
  std::vector<std::int64_t> sat(static_cast<std::size_t>(w + 1) * (h + 1), 0);
  auto at = [&](int c, int r) -> std::int64_t& { return sat[static_cast<std::size_t>(r) * (w + 1) + c]; };
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c)
      at(c + 1, r + 1) = indicator[spec.index(c, r)] + at(c, r + 1) + at(c + 1, r) - at(c, r);

  const int half = window / 2;
  CountRaster out(spec, 0);
  for (int r = 0; r < h; ++r) {
    const int r0 = std::max(0, r - half);
    const int r1 = std::min(h, r + half + 1);
    for (int c = 0; c < w; ++c) {
      const int c0 = std::max(0, c - half);
      const int c1 = std::min(w, c + half + 1);
      out(c, r) = static_cast<std::int32_t>(at(c1, r1) - at(c0, r1) - at(c1, r0) + at(c0, r0));
    }
  }
  return out;
}

}  // namespace

CountRaster occupied_cell_count(const CountRaster& counts, int window) {
  check_window(window);
  std::vector<std::uint8_t> occupied(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) occupied[i] = counts[i] > 0 ? 1 : 0;
  return box_count(counts.spec(), window, occupied);
}

CountRaster window_cell_count(const GridSpec& spec, int window) {
  check_window(window);
  return box_count(spec, window, std::vector<std::uint8_t>(spec.cell_count(), 1));
}

double occupancy_fraction(const CountRaster& counts) {
  std::size_t occupied = 0;
  for (auto v : counts.values()) occupied += v > 0 ? 1 : 0;
  return static_cast<double>(occupied) / static_cast<double>(counts.size());
}

Mask classify_water_at(const CountRaster& counts, int window, double sigma_k, double p) {
  check_window(window);
  Mask water(counts.spec(), 0);
  if (p >= 1.0) return water;
  if (p <= 0.0) throw Error(ErrorCode::DegenerateOccupancy, "no occupied cells; water is undetectable");

  const auto occupied = occupied_cell_count(counts, window);
  const auto sizes = window_cell_count(counts.spec(), window);
  for (std::size_t i = 0; i < water.size(); ++i) {
    const double n = sizes[i];
    const double threshold = n * p - sigma_k * std::sqrt(n * p * (1.0 - p));
    water[i] = occupied[i] <= threshold ? 1 : 0;
  }
  return water;
}

Mask classify_water(const CountRaster& counts, int window, double sigma_k) {
  const double p = occupancy_fraction(counts);
  if (p >= 1.0) std::clog << "warning: every cell is occupied; no water can be detected\n";
  return classify_water_at(counts, window, sigma_k, p);
}

WaterMask filter_and_buffer(const Mask& water, const WaterParams& params) {
  const auto& spec = water.spec();
  const auto labels = connected_components(water, Connectivity::Eight);
  const auto sizes = label_sizes(labels);
  const double cell_area = spec.gsd * spec.gsd;

  Mask kept(spec, 0);
  for (std::size_t i = 0; i < kept.size(); ++i) {
    const auto l = static_cast<std::size_t>(labels[i]);
    if (l > 0 && static_cast<double>(sizes[l]) * cell_area >= params.min_area) kept[i] = 1;
  }
  const int grow = static_cast<int>(std::ceil(params.buffer / spec.gsd - 1e-9));
  if (grow > 0) kept = dilate(kept, 2 * grow + 1);
  return {std::move(kept), params};
}

WaterMask detect_water(const CountRaster& counts, const WaterParams& params) {
  return filter_and_buffer(classify_water(counts, params.window, params.sigma_k), params);
}

}  // namespace bldmap
