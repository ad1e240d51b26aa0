// SPDX-License-Identifier: Apache-2.0
#include "bldmap/raster.hpp"

#include <algorithm>
#include <string>

namespace bldmap {

std::optional<GridSpec::Cell> GridSpec::cell_of(double x, double y) const {
  const double fc = std::floor((x - origin_x) / gsd);
  const double fr = std::floor((y - origin_y) / gsd);
  if (!(fc >= 0.0 && fr >= 0.0 && fc < width && fr < height)) return std::nullopt;
  return Cell{static_cast<int>(fc), static_cast<int>(fr)};
}

void GridSpec::validate() const {
  if (!(gsd > 0.0) || !std::isfinite(gsd)) throw Error(ErrorCode::ConfigError, "gsd must be positive");
  if (width < 1 || height < 1) throw Error(ErrorCode::ConfigError, "grid dimensions must be positive");
  if (!std::isfinite(origin_x) || !std::isfinite(origin_y))
    throw Error(ErrorCode::ConfigError, "grid origin must be finite");
}

GridSpec GridSpec::covering(const Bounds& b, double gsd) {
  GridSpec spec;
  spec.gsd = gsd;
  spec.origin_x = std::floor(b.min_x / gsd) * gsd;
  spec.origin_y = std::floor(b.min_y / gsd) * gsd;
  spec.width = static_cast<int>(std::floor((b.max_x - spec.origin_x) / gsd)) + 1;
  spec.height = static_cast<int>(std::floor((b.max_y - spec.origin_y) / gsd)) + 1;
  spec.validate();
  return spec;
}

std::size_t count_true(const Mask& mask) {
  return static_cast<std::size_t>(std::count_if(mask.values().begin(), mask.values().end(),
                                                [](std::uint8_t v) { return v != 0; }));
}

Mask mask_and(const Mask& a, const Mask& b) {
  require_same_grid(a, b, "mask_and");
  Mask out(a.spec());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = (a[i] && b[i]) ? 1 : 0;
  return out;
}

Mask mask_and_not(const Mask& a, const Mask& b) {
  require_same_grid(a, b, "mask_and_not");
  Mask out(a.spec());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = (a[i] && !b[i]) ? 1 : 0;
  return out;
}

Mask mask_not(const Mask& a) {
  Mask out(a.spec());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] ? 0 : 1;
  return out;
}

bool mask_subset(const Mask& a, const Mask& b) {
  require_same_grid(a, b, "mask_subset");
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] && !b[i]) return false;
  return true;
}

RasterizeResult rasterize_min(const PointCloud& cloud, const GridSpec& spec) {
  spec.validate();
  RasterizeResult result{ElevationRaster(spec, kNoData), CountRaster(spec, 0), 0};
  for (const auto& p : cloud.points) {
    const auto cell = spec.cell_of(p.x, p.y);
    if (!cell) {
      ++result.out_of_bounds;
      continue;
    }
    const auto i = spec.index(cell->col, cell->row);
    double& v = result.dsm_raw[i];
    if (is_nodata(v) || p.z < v) v = p.z;
    ++result.counts[i];
  }
  if (result.out_of_bounds == cloud.points.size())
    throw Error(ErrorCode::NoPointsInGrid, "no point falls inside the grid");
  return result;
}

namespace {

// Rational number with positive denominator.
struct Ratio {
  __int128 num;
  __int128 den;
};

bool less_eq(const Ratio& a, const Ratio& b) { return a.num * b.den <= b.num * a.den; }

}  // namespace

// Exact two-pass nearest-source transform. Every candidate source gets the
// integer key  M*(dx^2 + dy^2) + (row*W + col)  with M = W*H, so minimizing
// the key minimizes distance first and row-major index second. The key is a
// parabola in the column coordinate with a common curvature, which lets the
// row pass use a lower-envelope sweep with exact rational breakpoints.
ElevationRaster interpolate_nearest(const ElevationRaster& raw) {
  const auto& spec = raw.spec();
  const int w = spec.width;
  const int h = spec.height;
  const std::int64_t m = static_cast<std::int64_t>(w) * h;

  // Column pass: nearest source row per (col,row), ties to the smaller row.
  std::vector<int> best_row(spec.cell_count(), -1);
  bool any = false;
  std::vector<int> prev(h), next(h);
  for (int c = 0; c < w; ++c) {
    int last = -1;
    for (int r = 0; r < h; ++r) {
      if (!is_nodata(raw(c, r))) last = r;
      prev[r] = last;
    }
    last = -1;
    for (int r = h - 1; r >= 0; --r) {
      if (!is_nodata(raw(c, r))) last = r;
      next[r] = last;
    }
    for (int r = 0; r < h; ++r) {
      int best = -1;
      if (prev[r] >= 0 && next[r] >= 0)
        best = (r - prev[r] <= next[r] - r) ? prev[r] : next[r];
      else
        best = prev[r] >= 0 ? prev[r] : next[r];
      best_row[spec.index(c, r)] = best;
      any = any || best >= 0;
    }
  }
  if (!any) throw Error(ErrorCode::NoPointsInGrid, "raster has no valued cell");

  ElevationRaster out(spec, kNoData);
  std::vector<int> cols(w);
  std::vector<std::int64_t> offs(w);
  std::vector<Ratio> bounds(w + 1);
  for (int r = 0; r < h; ++r) {
    int k = -1;
    for (int c = 0; c < w; ++c) {
      const int src = best_row[spec.index(c, r)];
      if (src < 0) continue;
      const std::int64_t dy = r - src;
      const std::int64_t off = m * dy * dy + static_cast<std::int64_t>(src) * w + c;
      while (k >= 0) {
        const std::int64_t p = cols[k];
        const Ratio s{static_cast<__int128>(m) * (static_cast<std::int64_t>(c) * c - p * p) + off - offs[k],
                      static_cast<__int128>(2) * m * (c - p)};
        if (k > 0 && less_eq(s, bounds[k])) {
          --k;
          continue;
        }
        ++k;
        cols[k] = c;
        offs[k] = off;
        bounds[k] = s;
        break;
      }
      if (k < 0) {
        k = 0;
        cols[0] = c;
        offs[0] = off;
      }
    }
    // k >= 0 here: every column has a source once any cell is valued.
    int j = 0;
    for (int x = 0; x < w; ++x) {
      while (j < k && bounds[j + 1].num < static_cast<__int128>(x) * bounds[j + 1].den) ++j;
      const int sc = cols[j];
      const int sr = best_row[spec.index(sc, r)];
      out(x, r) = raw(sc, sr);
    }
  }
  return out;
}

void check_kernel(int k) {
  if (k < 1 || k % 2 == 0) throw Error(ErrorCode::BadKernel, "kernel size must be odd and positive, got " + std::to_string(k));
}

namespace {

// One separable pass of the square kernel along rows (horizontal) or
// columns. `all` selects erosion (window fully set) versus dilation.
Mask square_pass(const Mask& in, int k, bool horizontal, bool all) {
  const auto& spec = in.spec();
  const int r = k / 2;
  const int n = horizontal ? spec.width : spec.height;
  const int lines = horizontal ? spec.height : spec.width;
  Mask out(spec, 0);
  std::vector<int> prefix(n + 1);
  for (int line = 0; line < lines; ++line) {
    prefix[0] = 0;
    for (int i = 0; i < n; ++i) {
      const auto v = horizontal ? in(i, line) : in(line, i);
      prefix[i + 1] = prefix[i] + (v ? 1 : 0);
    }
    for (int i = 0; i < n; ++i) {
      const int lo = i - r;
      const int hi = i + r;
      std::uint8_t v;
      if (all) {
        v = (lo >= 0 && hi < n && prefix[hi + 1] - prefix[lo] == k) ? 1 : 0;
      } else {
        v = prefix[std::min(hi, n - 1) + 1] - prefix[std::max(lo, 0)] > 0 ? 1 : 0;
      }
      if (horizontal)
        out(i, line) = v;
      else
        out(line, i) = v;
    }
  }
  return out;
}

Mask diamond_pass(const Mask& in, int k, bool all) {
  const auto& spec = in.spec();
  const int r = k / 2;
  Mask out(spec, 0);
  for (int row = 0; row < spec.height; ++row) {
    for (int col = 0; col < spec.width; ++col) {
      bool result = all;
      for (int dy = -r; dy <= r && result == all; ++dy) {
        const int span = r - std::abs(dy);
        for (int dx = -span; dx <= span; ++dx) {
          const int c = col + dx;
          const int rr = row + dy;
          const bool v = spec.in_bounds(c, rr) && in(c, rr);
          if (all && !v) {
            result = false;
            break;
          }
          if (!all && v) {
            result = true;
            break;
          }
        }
      }
      out(col, row) = result ? 1 : 0;
    }
  }
  return out;
}

}  // namespace

Mask erode(const Mask& mask, int k, KernelShape shape) {
  check_kernel(k);
  if (k == 1) return mask;
  if (shape == KernelShape::Diamond) return diamond_pass(mask, k, true);
  return square_pass(square_pass(mask, k, true, true), k, false, true);
}

Mask dilate(const Mask& mask, int k, KernelShape shape) {
  check_kernel(k);
  if (k == 1) return mask;
  if (shape == KernelShape::Diamond) return diamond_pass(mask, k, false);
  return square_pass(square_pass(mask, k, true, false), k, false, false);
}

Mask open(const Mask& mask, int k, KernelShape shape) { return dilate(erode(mask, k, shape), k, shape); }

LabelRaster connected_components(const Mask& mask, Connectivity connectivity) {
  const auto& spec = mask.spec();
  LabelRaster labels(spec, 0);
  std::int32_t next = 0;
  std::vector<GridSpec::Cell> stack;
  const bool eight = connectivity == Connectivity::Eight;
  for (int row = 0; row < spec.height; ++row) {
    for (int col = 0; col < spec.width; ++col) {
      if (!mask(col, row) || labels(col, row) != 0) continue;
      ++next;
      labels(col, row) = next;
      stack.push_back({col, row});
      while (!stack.empty()) {
        const auto cell = stack.back();
        stack.pop_back();
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            if (dx == 0 && dy == 0) continue;
            if (!eight && dx != 0 && dy != 0) continue;
            const int c = cell.col + dx;
            const int r = cell.row + dy;
            if (!spec.in_bounds(c, r) || !mask(c, r) || labels(c, r) != 0) continue;
            labels(c, r) = next;
            stack.push_back({c, r});
          }
        }
      }
    }
  }
  return labels;
}

std::int32_t label_count(const LabelRaster& labels) {
  std::int32_t top = 0;
  for (auto v : labels.values()) top = std::max(top, v);
  return top;
}

std::vector<std::size_t> label_sizes(const LabelRaster& labels) {
  std::vector<std::size_t> sizes(static_cast<std::size_t>(label_count(labels)) + 1, 0);
  for (auto v : labels.values()) ++sizes[static_cast<std::size_t>(v)];
  return sizes;
}

}  // namespace bldmap
