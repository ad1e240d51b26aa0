// SPDX-License-Identifier: Apache-2.0
#include "bldmap/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace bldmap {

namespace {

std::optional<double> ratio(double num, double den) {
  if (den == 0.0) return std::nullopt;
  return num / den;
}

}  // namespace

ConfusionMetrics metrics_from_counts(std::size_t tp, std::size_t fp, std::size_t fn, std::size_t tn) {
  ConfusionMetrics m{tp, fp, fn, tn, {}, {}, {}, {}};
  const auto t = static_cast<double>(tp);
  m.iou = ratio(t, static_cast<double>(tp + fp + fn));
  m.precision = ratio(t, static_cast<double>(tp + fp));
  m.recall = ratio(t, static_cast<double>(tp + fn));
  if (m.precision && m.recall) m.f1 = ratio(2.0 * *m.precision * *m.recall, *m.precision + *m.recall);
  return m;
}

ConfusionMetrics confusion(const Mask& pred, const Mask& truth) {
  require_same_grid(pred, truth, "confusion: prediction and truth grids differ");
  std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const bool p = pred[i] != 0;
    const bool t = truth[i] != 0;
    tp += p && t;
    fp += p && !t;
    fn += !p && t;
    tn += !p && !t;
  }
  return metrics_from_counts(tp, fp, fn, tn);
}

namespace {

int cells_per_tile(const GridSpec& spec, double tile_size) {
  if (!(tile_size > 0.0)) throw Error(ErrorCode::ConfigError, "tile size must be positive");
  const double cells = tile_size / spec.gsd;
  const double rounded = std::round(cells);
  if (rounded < 1.0 || std::abs(cells - rounded) > 1e-6)
    throw Error(ErrorCode::ConfigError, "tile size must be a whole number of cells");
  return static_cast<int>(rounded);
}

}  // namespace

std::array<int, 2> tile_grid(const GridSpec& spec, double tile_size) {
  const int n = cells_per_tile(spec, tile_size);
  return {(spec.width + n - 1) / n, (spec.height + n - 1) / n};
}

TileReport tiling_comparison(const Mask& map_a, const Mask& map_b, double tile_size) {
  require_same_grid(map_a, map_b, "tiling_comparison: map grids differ");
  const auto& spec = map_a.spec();
  const int n = cells_per_tile(spec, tile_size);
  const auto [tx, ty] = tile_grid(spec, tile_size);

  struct Counts {
    std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
  };
  std::vector<Counts> counts(static_cast<std::size_t>(tx) * ty);
  for (int r = 0; r < spec.height; ++r) {
    const int trow = r / n;
    for (int c = 0; c < spec.width; ++c) {
      auto& k = counts[static_cast<std::size_t>(trow) * tx + c / n];
      const bool a = map_a(c, r) != 0;
      const bool b = map_b(c, r) != 0;
      k.tp += a && b;
      k.fp += a && !b;
      k.fn += !a && b;
      k.tn += !a && !b;
    }
  }

  TileReport report;
  report.tile_size = tile_size;
  report.tiles_x = tx;
  report.tiles_y = ty;
  report.tiles.reserve(counts.size());
  for (int j = 0; j < ty; ++j) {
    for (int i = 0; i < tx; ++i) {
      const int idx = j * tx + i;
      const auto& k = counts[static_cast<std::size_t>(idx)];
      TileResult t;
      t.index = idx;
      t.tile_col = i;
      t.tile_row = j;
      t.bounds = {spec.origin_x + i * tile_size, spec.origin_y + j * tile_size,
                  std::min(spec.origin_x + (i + 1) * tile_size, spec.max_x()),
                  std::min(spec.origin_y + (j + 1) * tile_size, spec.max_y())};
      t.metrics = metrics_from_counts(k.tp, k.fp, k.fn, k.tn);
      report.tiles.push_back(t);
    }
  }
  report.ranking.resize(report.tiles.size());
  std::iota(report.ranking.begin(), report.ranking.end(), 0);
  std::stable_sort(report.ranking.begin(), report.ranking.end(), [&](int a, int b) {
    const auto& ia = report.tiles[static_cast<std::size_t>(a)].metrics.iou;
    const auto& ib = report.tiles[static_cast<std::size_t>(b)].metrics.iou;
    if (ia && ib) return *ia < *ib;
    return ia.has_value() && !ib.has_value();
  });
  return report;
}

SizeClass size_class(double area_m2) {
  if (area_m2 < kSizeClassBounds[0]) return SizeClass::Accessorial;
  if (area_m2 < kSizeClassBounds[1]) return SizeClass::Residential;
  if (area_m2 < kSizeClassBounds[2]) return SizeClass::Commercial;
  return SizeClass::Mega;
}

std::string_view to_string(SizeClass c) {
  switch (c) {
    case SizeClass::Accessorial: return "accessorial";
    case SizeClass::Residential: return "residential";
    case SizeClass::Commercial: return "commercial";
    case SizeClass::Mega: return "mega";
  }
  return "unknown";
}

InstanceMatchReport match_instances(const Mask& pred, const LabelRaster& truth_instances) {
  require_same_grid(pred, truth_instances, "match_instances: prediction and truth grids differ");
  const auto& spec = pred.spec();
  const double cell_area = spec.gsd * spec.gsd;

  const auto truth_n = static_cast<std::size_t>(label_count(truth_instances));
  std::vector<std::size_t> truth_size(truth_n + 1, 0), truth_covered(truth_n + 1, 0);
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const auto l = static_cast<std::size_t>(std::max(truth_instances[i], 0));
    ++truth_size[l];
    if (pred[i]) ++truth_covered[l];
  }
  std::size_t instances = 0;
  for (std::size_t l = 1; l <= truth_n; ++l) instances += truth_size[l] > 0;
  if (instances == 0) throw Error(ErrorCode::EmptyTruth, "truth has no building instances");

  InstanceMatchReport report;
  for (std::size_t l = 1; l <= truth_n; ++l) {
    if (truth_size[l] == 0) continue;
    auto& cat = report.categories[static_cast<std::size_t>(size_class(truth_size[l] * cell_area))];
    ++cat.gt_count;
    if (2 * truth_covered[l] > truth_size[l]) ++cat.detected_count;
  }

  const auto blobs = connected_components(pred, Connectivity::Eight);
  const auto blob_n = static_cast<std::size_t>(label_count(blobs));
  std::vector<std::size_t> blob_size(blob_n + 1, 0), blob_on_truth(blob_n + 1, 0);
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const auto b = static_cast<std::size_t>(blobs[i]);
    if (b == 0) continue;
    ++blob_size[b];
    if (truth_instances[i] > 0) ++blob_on_truth[b];
  }
  for (std::size_t b = 1; b <= blob_n; ++b) {
    if (2 * blob_on_truth[b] <= blob_size[b])
      ++report.categories[static_cast<std::size_t>(size_class(blob_size[b] * cell_area))].commission_count;
  }

  for (auto& cat : report.categories) {
    cat.detection_rate = ratio(static_cast<double>(cat.detected_count), static_cast<double>(cat.gt_count));
    cat.commission_rate = ratio(static_cast<double>(cat.commission_count), static_cast<double>(cat.gt_count));
  }
  return report;
}

namespace {

double cross(const Vec2& o, const Vec2& a, const Vec2& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

bool on_segment(const Vec2& p, const Vec2& a, const Vec2& b) {
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
         p.y <= std::max(a.y, b.y);
}

bool segments_intersect(const Vec2& p1, const Vec2& p2, const Vec2& q1, const Vec2& q2) {
  const double d1 = cross(q1, q2, p1);
  const double d2 = cross(q1, q2, p2);
  const double d3 = cross(p1, p2, q1);
  const double d4 = cross(p1, p2, q2);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) return true;
  return (d1 == 0 && on_segment(p1, q1, q2)) || (d2 == 0 && on_segment(p2, q1, q2)) ||
         (d3 == 0 && on_segment(q1, p1, p2)) || (d4 == 0 && on_segment(q2, p1, p2));
}

}  // namespace

void validate_ring(const Ring& ring) {
  if (ring.size() < 4 || !(ring.front() == ring.back()))
    throw Error(ErrorCode::OpenRing, "ring must be closed with at least 4 vertices");

  const std::size_t n = ring.size() - 1;  // segment i joins vertex i and i+1
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  auto min_x = [&](std::size_t i) { return std::min(ring[i].x, ring[i + 1].x); };
  auto max_x = [&](std::size_t i) { return std::max(ring[i].x, ring[i + 1].x); };
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return min_x(a) < min_x(b); });

  for (std::size_t a = 0; a < n; ++a) {
    const std::size_t i = order[a];
    for (std::size_t b = a + 1; b < n && min_x(order[b]) <= max_x(i); ++b) {
      const std::size_t j = order[b];
      const std::size_t lo = std::min(i, j);
      const std::size_t hi = std::max(i, j);
      if (hi - lo == 1 || (lo == 0 && hi == n - 1)) continue;  // neighbors share a vertex
      if (segments_intersect(ring[i], ring[i + 1], ring[j], ring[j + 1]))
        throw Error(ErrorCode::SelfIntersection,
                    "segments " + std::to_string(i) + " and " + std::to_string(j) + " intersect");
    }
  }
}

LabelRaster rasterize_polygons(const std::vector<Polygon>& polygons, const GridSpec& spec) {
  LabelRaster out(spec, 0);
  std::vector<double> xs;
  for (std::size_t pi = 0; pi < polygons.size(); ++pi) {
    const auto& poly = polygons[pi];
    double lo_y = INFINITY, hi_y = -INFINITY;
    for (const auto& ring : poly.rings) {
      validate_ring(ring);
      for (const auto& v : ring) {
        lo_y = std::min(lo_y, v.y);
        hi_y = std::max(hi_y, v.y);
      }
    }
    if (poly.rings.empty()) continue;
    const int r0 = std::max(0, static_cast<int>(std::floor((lo_y - spec.origin_y) / spec.gsd)) - 1);
    const int r1 = std::min(spec.height - 1, static_cast<int>(std::floor((hi_y - spec.origin_y) / spec.gsd)) + 1);
    const auto label = static_cast<std::int32_t>(pi + 1);

    for (int r = r0; r <= r1; ++r) {
      const double py = spec.center_y(r);
      xs.clear();
      for (const auto& ring : poly.rings) {
        for (std::size_t k = 0; k + 1 < ring.size(); ++k) {
          const Vec2& a = ring[k];
          const Vec2& b = ring[k + 1];
          if ((a.y > py) != (b.y > py)) xs.push_back(a.x + (py - a.y) * (b.x - a.x) / (b.y - a.y));
        }
      }
      std::sort(xs.begin(), xs.end());
      // Center x is inside iff it lies in some [xs[2i], xs[2i+1]).
      for (std::size_t k = 0; k + 1 < xs.size(); k += 2) {
        int c = std::max(0, static_cast<int>(std::floor((xs[k] - spec.origin_x) / spec.gsd)) - 1);
        while (c < spec.width && spec.center_x(c) < xs[k]) ++c;
        for (; c < spec.width && spec.center_x(c) < xs[k + 1]; ++c) out(c, r) = label;
      }
    }
  }
  return out;
}

}  // namespace bldmap
