// SPDX-License-Identifier: Apache-2.0
//
// Grid primitives shared by every stage: the georeferenced grid, the raster
// container, fine rasterization, nearest-value void filling, binary
// morphology and connected-component labelling.

#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "bldmap/error.hpp"
#include "bldmap/ingest.hpp"

namespace bldmap {

/// Regular grid anchored at its lower-left corner. Row 0 is the southernmost
/// row; cell (col,row) covers [x0 + col*gsd, x0 + (col+1)*gsd) on x and the
/// same half-open interval on y.
struct GridSpec {
  double origin_x = 0.0;
  double origin_y = 0.0;
  double gsd = 0.5;
  int width = 1;
  int height = 1;

  std::size_t cell_count() const { return static_cast<std::size_t>(width) * static_cast<std::size_t>(height); }
  std::size_t index(int col, int row) const {
    return static_cast<std::size_t>(row) * static_cast<std::size_t>(width) + static_cast<std::size_t>(col);
  }
  bool in_bounds(int col, int row) const { return col >= 0 && row >= 0 && col < width && row < height; }

  double center_x(int col) const { return origin_x + (col + 0.5) * gsd; }
  double center_y(int row) const { return origin_y + (row + 0.5) * gsd; }
  double max_x() const { return origin_x + width * gsd; }
  double max_y() const { return origin_y + height * gsd; }

  struct Cell {
    int col;
    int row;
  };
  /// Cell containing (x,y) under the half-open convention, if any.
  std::optional<Cell> cell_of(double x, double y) const;

  /// Throws ConfigError unless gsd > 0 and both dimensions are positive.
  void validate() const;

  /// Smallest gsd-aligned grid whose cells contain every point of `b`.
  static GridSpec covering(const Bounds& b, double gsd);

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

template <typename T>
class Raster {
 public:
  using value_type = T;

  Raster() = default;
  explicit Raster(const GridSpec& spec, T fill = T{}) : spec_(spec), values_(spec.cell_count(), fill) {}
  Raster(const GridSpec& spec, std::vector<T> values) : spec_(spec), values_(std::move(values)) {
    if (values_.size() != spec_.cell_count())
      throw Error(ErrorCode::ShapeMismatch, "value count does not match grid");
  }

  const GridSpec& spec() const { return spec_; }
  int width() const { return spec_.width; }
  int height() const { return spec_.height; }
  std::size_t size() const { return values_.size(); }

  T& operator()(int col, int row) { return values_[spec_.index(col, row)]; }
  const T& operator()(int col, int row) const { return values_[spec_.index(col, row)]; }
  T& operator[](std::size_t i) { return values_[i]; }
  const T& operator[](std::size_t i) const { return values_[i]; }

  std::vector<T>& values() { return values_; }
  const std::vector<T>& values() const { return values_; }

  friend bool operator==(const Raster&, const Raster&) = default;

 private:
  GridSpec spec_;
  std::vector<T> values_;
};

/// Elevations and heights in meters; NaN marks an empty (nodata) cell.
using ElevationRaster = Raster<double>;
/// Binary masks hold 0 or 1.
using Mask = Raster<std::uint8_t>;
using CountRaster = Raster<std::int32_t>;
using LabelRaster = Raster<std::int32_t>;

inline constexpr double kNoData = std::numeric_limits<double>::quiet_NaN();
inline bool is_nodata(double v) { return std::isnan(v); }

template <typename A, typename B>
void require_same_grid(const Raster<A>& a, const Raster<B>& b, const char* what) {
  if (!(a.spec() == b.spec())) throw Error(ErrorCode::SpecMismatch, what);
}

std::size_t count_true(const Mask& mask);
Mask mask_and(const Mask& a, const Mask& b);
Mask mask_and_not(const Mask& a, const Mask& b);
Mask mask_not(const Mask& a);
/// True where every set cell of `a` is also set in `b`.
bool mask_subset(const Mask& a, const Mask& b);

struct RasterizeResult {
  ElevationRaster dsm_raw;
  CountRaster counts;
  std::size_t out_of_bounds = 0;
};

/// Fine rasterization: each cell keeps the lowest elevation of the points
/// falling in it and the number of such points.
RasterizeResult rasterize_min(const PointCloud& cloud, const GridSpec& spec);

/// Fills every nodata cell with the value of the nearest valued cell by
/// Euclidean distance between cell centers. Equidistant sources resolve to
/// the one earliest in row-major order (row, then column).
ElevationRaster interpolate_nearest(const ElevationRaster& raw);

enum class KernelShape { Square, Diamond };

/// k must be odd and positive. Cells outside the grid count as false.
Mask erode(const Mask& mask, int k, KernelShape shape = KernelShape::Square);
Mask dilate(const Mask& mask, int k, KernelShape shape = KernelShape::Square);
Mask open(const Mask& mask, int k, KernelShape shape = KernelShape::Square);

enum class Connectivity { Four = 4, Eight = 8 };

/// Labels set cells with 1..N in row-major first-encounter order; unset
/// cells get 0.
LabelRaster connected_components(const Mask& mask, Connectivity connectivity = Connectivity::Eight);

/// Highest label in a labelling produced by connected_components.
std::int32_t label_count(const LabelRaster& labels);
/// Cell count per label; index 0 holds the background count.
std::vector<std::size_t> label_sizes(const LabelRaster& labels);

void check_kernel(int k);

}  // namespace bldmap
