// SPDX-License-Identifier: Apache-2.0
//
// Map evaluation: pixel confusion metrics, tiling comparison with IoU
// ranking, instance detection/commission by footprint size class, and
// polygon rasterization for vector ground truth.

#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bldmap/raster.hpp"

namespace bldmap {

/// Ratios are empty when their denominator is zero.
struct ConfusionMetrics {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;
  std::optional<double> iou;
  std::optional<double> precision;
  std::optional<double> recall;
  std::optional<double> f1;
};

ConfusionMetrics metrics_from_counts(std::size_t tp, std::size_t fp, std::size_t fn, std::size_t tn);
ConfusionMetrics confusion(const Mask& pred, const Mask& truth);

struct TileResult {
  int index = 0;  // row-major from the south-west tile
  int tile_col = 0;
  int tile_row = 0;
  Bounds bounds;
  ConfusionMetrics metrics;
};

struct TileReport {
  double tile_size = 500.0;
  int tiles_x = 0;
  int tiles_y = 0;
  std::vector<TileResult> tiles;  // by index
  // Tile indices by ascending IoU; tiles without a defined IoU come last.
  std::vector<int> ranking;
};

/// Number of tiles of `tile_size` meters needed to cover the grid.
std::array<int, 2> tile_grid(const GridSpec& spec, double tile_size);

TileReport tiling_comparison(const Mask& map_a, const Mask& map_b, double tile_size = 500.0);

enum class SizeClass { Accessorial = 0, Residential = 1, Commercial = 2, Mega = 3 };
inline constexpr std::array<double, 3> kSizeClassBounds{50.0, 500.0, 10000.0};  // m^2

SizeClass size_class(double area_m2);
std::string_view to_string(SizeClass c);

struct CategoryStats {
  std::size_t gt_count = 0;
  std::size_t detected_count = 0;
  std::size_t commission_count = 0;
  std::optional<double> detection_rate;
  std::optional<double> commission_rate;
};

struct InstanceMatchReport {
  std::array<CategoryStats, 4> categories;
};

/// A truth instance is detected when more than half of its cells are
/// predicted; an 8-connected predicted blob is a commission when at most
/// half of its cells fall on truth. Both are binned by their own area.
InstanceMatchReport match_instances(const Mask& pred, const LabelRaster& truth_instances);

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Vec2&, const Vec2&) = default;
};

/// Closed ring: the last vertex repeats the first.
using Ring = std::vector<Vec2>;

/// Outer boundary plus holes, or several disjoint parts; all rings combine
/// under the even-odd rule.
struct Polygon {
  std::vector<Ring> rings;
};

/// Throws OpenRing or SelfIntersection.
void validate_ring(const Ring& ring);

/// Cell gets polygon index + 1 when its center is inside under the even-odd
/// rule; an edge through a center counts the center as inside on the
/// left/bottom side and outside on the right/top side. Later polygons win.
LabelRaster rasterize_polygons(const std::vector<Polygon>& polygons, const GridSpec& spec);

}  // namespace bldmap
