// SPDX-License-Identifier: Apache-2.0
//
// Brute-force reference implementations. Each follows the textbook
// definition directly and shares no code path with the library routine it
// checks.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <set>
#include <vector>

#include "bldmap/eval.hpp"
#include "bldmap/raster.hpp"

namespace oracle {

using namespace bldmap;

// Per-point loop: for each cell, scan every point and keep the minimum.
inline ElevationRaster rasterize_min(const std::vector<Point3>& pts, const GridSpec& s) {
  ElevationRaster out(s, kNoData);
  for (int r = 0; r < s.height; ++r) {
    for (int c = 0; c < s.width; ++c) {
      const double x0 = s.origin_x + c * s.gsd, x1 = s.origin_x + (c + 1) * s.gsd;
      const double y0 = s.origin_y + r * s.gsd, y1 = s.origin_y + (r + 1) * s.gsd;
      for (const auto& p : pts) {
        if (p.x >= x0 && p.x < x1 && p.y >= y0 && p.y < y1) {
          if (is_nodata(out(c, r)) || p.z < out(c, r)) out(c, r) = p.z;
        }
      }
    }
  }
  return out;
}

// All-pairs nearest source, ties to the earliest row-major source.
inline ElevationRaster nearest_fill(const ElevationRaster& raw) {
  const auto& s = raw.spec();
  ElevationRaster out(s, kNoData);
  for (int r = 0; r < s.height; ++r) {
    for (int c = 0; c < s.width; ++c) {
      long best = std::numeric_limits<long>::max();
      double v = kNoData;
      for (int rr = 0; rr < s.height; ++rr)
        for (int cc = 0; cc < s.width; ++cc) {
          if (is_nodata(raw(cc, rr))) continue;
          const long d = long(cc - c) * (cc - c) + long(rr - r) * (rr - r);
          if (d < best) {
            best = d;
            v = raw(cc, rr);
          }
        }
      out(c, r) = v;
    }
  }
  return out;
}

// Window scan; `all` selects erosion.
inline Mask window_scan(const Mask& m, int k, bool diamond, bool all) {
  const auto& s = m.spec();
  const int h = k / 2;
  Mask out(s, 0);
  for (int r = 0; r < s.height; ++r)
    for (int c = 0; c < s.width; ++c) {
      bool every = true, some = false;
      for (int dy = -h; dy <= h; ++dy)
        for (int dx = -h; dx <= h; ++dx) {
          if (diamond && std::abs(dx) + std::abs(dy) > h) continue;
          const int cc = c + dx, rr = r + dy;
          const bool v = cc >= 0 && rr >= 0 && cc < s.width && rr < s.height && m(cc, rr);
          every = every && v;
          some = some || v;
        }
      out(c, r) = (all ? every : some) ? 1 : 0;
    }
  return out;
}

// Recursive-free flood fill counting components.
inline int flood_fill_count(const Mask& m, bool eight) {
  const auto& s = m.spec();
  std::vector<char> seen(m.size(), 0);
  int n = 0;
  for (std::size_t start = 0; start < m.size(); ++start) {
    if (!m[start] || seen[start]) continue;
    ++n;
    std::vector<std::size_t> queue{start};
    seen[start] = 1;
    for (std::size_t q = 0; q < queue.size(); ++q) {
      const int c = int(queue[q] % s.width), r = int(queue[q] / s.width);
      for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx) {
          if ((dx == 0 && dy == 0) || (!eight && dx && dy)) continue;
          const int cc = c + dx, rr = r + dy;
          if (cc < 0 || rr < 0 || cc >= s.width || rr >= s.height) continue;
          const std::size_t j = std::size_t(rr) * s.width + cc;
          if (m[j] && !seen[j]) {
            seen[j] = 1;
            queue.push_back(j);
          }
        }
    }
  }
  return n;
}

inline long round_half_away(double v) { return v < 0 ? -long(std::floor(-v + 0.5)) : long(std::floor(v + 0.5)); }

// Distinct rounded values per clipped window, via std::set.
inline CountRaster distinct_count(const ElevationRaster& ndhm, int k) {
  const auto& s = ndhm.spec();
  const int h = k / 2;
  CountRaster out(s, 0);
  for (int r = 0; r < s.height; ++r)
    for (int c = 0; c < s.width; ++c) {
      std::set<long> seen;
      for (int rr = std::max(0, r - h); rr <= std::min(s.height - 1, r + h); ++rr)
        for (int cc = std::max(0, c - h); cc <= std::min(s.width - 1, c + h); ++cc)
          seen.insert(round_half_away(ndhm(cc, rr)));
      out(c, r) = int(seen.size());
    }
  return out;
}

// Crossing-number test at one point; the crossing abscissa is evaluated with
// the same expression a scanline would use so boundary ties agree.
inline bool inside(const Polygon& poly, double px, double py) {
  bool in = false;
  for (const auto& ring : poly.rings)
    for (std::size_t k = 0; k + 1 < ring.size(); ++k) {
      const auto& a = ring[k];
      const auto& b = ring[k + 1];
      if ((a.y > py) != (b.y > py)) {
        const double x = a.x + (py - a.y) * (b.x - a.x) / (b.y - a.y);
        if (px < x) in = !in;
      }
    }
  return in;
}

inline LabelRaster point_in_polygon(const std::vector<Polygon>& polys, const GridSpec& s) {
  LabelRaster out(s, 0);
  for (int r = 0; r < s.height; ++r)
    for (int c = 0; c < s.width; ++c)
      for (std::size_t i = 0; i < polys.size(); ++i)
        if (inside(polys[i], s.origin_x + (c + 0.5) * s.gsd, s.origin_y + (r + 0.5) * s.gsd)) out(c, r) = int(i + 1);
  return out;
}

struct Census {
  std::array<std::size_t, 4> gt{}, detected{}, commission{};
};

// Per-instance census: each truth label and each flood-filled predicted blob
// is measured on its own.
inline Census instance_census(const Mask& pred, const LabelRaster& truth) {
  const auto& s = pred.spec();
  const double cell = s.gsd * s.gsd;
  auto bin = [](double a) { return a < 50 ? 0 : a < 500 ? 1 : a < 10000 ? 2 : 3; };
  Census out;
  int top = 0;
  for (auto v : truth.values()) top = std::max(top, v);
  for (int l = 1; l <= top; ++l) {
    std::size_t n = 0, covered = 0;
    for (std::size_t i = 0; i < truth.size(); ++i)
      if (truth[i] == l) {
        ++n;
        covered += pred[i] ? 1 : 0;
      }
    if (n == 0) continue;
    ++out.gt[bin(n * cell)];
    if (covered * 2 > n) ++out.detected[bin(n * cell)];
  }
  std::vector<char> seen(pred.size(), 0);
  for (std::size_t start = 0; start < pred.size(); ++start) {
    if (!pred[start] || seen[start]) continue;
    std::vector<std::size_t> blob{start};
    seen[start] = 1;
    for (std::size_t q = 0; q < blob.size(); ++q) {
      const int c = int(blob[q] % s.width), r = int(blob[q] / s.width);
      for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx) {
          const int cc = c + dx, rr = r + dy;
          if (cc < 0 || rr < 0 || cc >= s.width || rr >= s.height) continue;
          const std::size_t j = std::size_t(rr) * s.width + cc;
          if (pred[j] && !seen[j]) {
            seen[j] = 1;
            blob.push_back(j);
          }
        }
    }
    std::size_t on_truth = 0;
    for (auto j : blob) on_truth += truth[j] > 0 ? 1 : 0;
    if (on_truth * 2 <= blob.size()) ++out.commission[bin(blob.size() * cell)];
  }
  return out;
}

}  // namespace oracle
