// SPDX-License-Identifier: Apache-2.0
#include "bldmap/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <thread>

#include "bldmap/formats.hpp"
#include "bldmap/hydro.hpp"
#include "bldmap/terrain.hpp"

namespace bldmap {

WindowPlan plan_windows(const GridSpec& grid, double window_size_m, double overlap_m) {
  grid.validate();
  if (!(window_size_m > 0.0) || !(overlap_m >= 0.0))
    throw Error(ErrorCode::ConfigError, "window size must be positive and overlap non-negative");
  const int core = std::max(1, static_cast<int>(std::llround(window_size_m / grid.gsd)));
  const int pad = static_cast<int>(std::ceil(overlap_m / grid.gsd - 1e-9));

  WindowPlan plan{grid, {}};
  for (int row0 = 0; row0 < grid.height; row0 += core) {
    for (int col0 = 0; col0 < grid.width; col0 += core) {
      Window w;
      w.index = static_cast<int>(plan.windows.size());
      w.core = {col0, row0, std::min(core, grid.width - col0), std::min(core, grid.height - row0)};
      const int pc0 = std::max(0, col0 - pad);
      const int pr0 = std::max(0, row0 - pad);
      const int pc1 = std::min(grid.width, col0 + w.core.cols + pad);
      const int pr1 = std::min(grid.height, row0 + w.core.rows + pad);
      w.pad = {pc0, pr0, pc1 - pc0, pr1 - pr0};
      plan.windows.push_back(w);
    }
  }
  return plan;
}

GridSpec sub_grid(const GridSpec& grid, const CellRect& rect) {
  return {grid.origin_x + rect.col0 * grid.gsd, grid.origin_y + rect.row0 * grid.gsd, grid.gsd, rect.cols,
          rect.rows};
}

ElevationRaster resample_nearest(const ElevationRaster& source, const GridSpec& target) {
  ElevationRaster out(target, kNoData);
  for (int r = 0; r < target.height; ++r)
    for (int c = 0; c < target.width; ++c)
      if (const auto cell = source.spec().cell_of(target.center_x(c), target.center_y(r)))
        out(c, r) = source(cell->col, cell->row);
  return out;
}

namespace {

struct WindowOutput {
  bool empty = true;
  Mask map2d;
  ElevationRaster map3d, dsm, dtm, ndhm;
  Mask water;
  DifferenceMap diff;
};

// Global cell of every point, or -1 when it falls outside the grid.
struct BinnedPoints {
  std::vector<std::int32_t> col, row;
};

BinnedPoints bin_points(const PointCloud& cloud, const GridSpec& grid) {
  BinnedPoints b;
  b.col.resize(cloud.size(), -1);
  b.row.resize(cloud.size(), -1);
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    if (const auto cell = grid.cell_of(cloud.points[i].x, cloud.points[i].y)) {
      b.col[i] = cell->col;
      b.row[i] = cell->row;
    }
  }
  return b;
}

template <typename T>
Raster<T> crop(const Raster<T>& src, const CellRect& pad, const CellRect& core) {
  Raster<T> out(GridSpec{src.spec().origin_x + (core.col0 - pad.col0) * src.spec().gsd,
                         src.spec().origin_y + (core.row0 - pad.row0) * src.spec().gsd, src.spec().gsd, core.cols,
                         core.rows});
  for (int r = 0; r < core.rows; ++r)
    for (int c = 0; c < core.cols; ++c) out(c, r) = src(c + core.col0 - pad.col0, r + core.row0 - pad.row0);
  return out;
}

WindowOutput process_window(const PipelineConfig& config, const PipelineInputs& inputs, const WindowPlan& plan,
                            const BinnedPoints& bins, const Window& window) {
  const GridSpec spec = sub_grid(plan.grid, window.pad);
  ElevationRaster raw(spec, kNoData);
  CountRaster counts(spec, 0);
  bool any = false;
  const auto& points = inputs.cloud->points;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (bins.col[i] < 0 || !window.pad.contains(bins.col[i], bins.row[i])) continue;
    const int c = bins.col[i] - window.pad.col0;
    const int r = bins.row[i] - window.pad.row0;
    double& v = raw(c, r);
    if (is_nodata(v) || points[i].z < v) v = points[i].z;
    ++counts(c, r);
    any = true;
  }
  WindowOutput out;
  if (!any) return out;
  out.empty = false;

  auto dsm = interpolate_nearest(raw);
  TerrainSet terrain = inputs.external_dtm
                           ? build_terrain_with_dtm(std::move(dsm), std::move(counts),
                                                    resample_nearest(*inputs.external_dtm, spec))
                           : build_terrain(std::move(dsm), std::move(counts), config.slope_threshold);
  const double p = occupancy_fraction(terrain.occupancy);
  const auto water = p >= 1.0 ? WaterMask{Mask(spec, 0), config.water}
                              : filter_and_buffer(classify_water_at(terrain.occupancy, config.water.window,
                                                                    config.water.sigma_k, p),
                                                  config.water);
  const auto extracted = extract_buildings(terrain, water, config.extract);

  out.map2d = crop(extracted.maps.map2d, window.pad, window.core);
  out.map3d = crop(extracted.maps.map3d, window.pad, window.core);
  out.dsm = crop(terrain.dsm, window.pad, window.core);
  out.dtm = crop(terrain.dtm, window.pad, window.core);
  out.ndhm = crop(terrain.ndhm, window.pad, window.core);
  out.water = crop(water.mask, window.pad, window.core);
  out.diff = crop(extracted.diff, window.pad, window.core);
  return out;
}

template <typename T>
void paste(Raster<T>& dst, const Raster<T>& src, const CellRect& core) {
  for (int r = 0; r < core.rows; ++r)
    for (int c = 0; c < core.cols; ++c) dst(core.col0 + c, core.row0 + r) = src(c, r);
}

}  // namespace

PipelineResult run_pipeline(const PipelineConfig& config, const PipelineInputs& inputs) {
  config.validate();
  if (!inputs.cloud || inputs.cloud->empty()) throw Error(ErrorCode::EmptyCloud, "no input points");
  const GridSpec grid = inputs.grid ? *inputs.grid : GridSpec::covering(inputs.cloud->bounds, config.gsd);
  grid.validate();

  PipelineResult result;
  result.plan = plan_windows(grid, config.window_size_m, config.overlap_m);
  const auto bins = bin_points(*inputs.cloud, grid);

  const auto& windows = result.plan.windows;
  std::vector<WindowOutput> outputs(windows.size());
  std::vector<std::exception_ptr> errors(windows.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < windows.size(); i = next++) {
      try {
        outputs[i] = process_window(config, inputs, result.plan, bins, windows[i]);
      } catch (const Error& e) {
        errors[i] = std::make_exception_ptr(Error(e.code(), "window " + std::to_string(i) + ": " + e.detail()));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int n_threads = std::max(1, std::min<int>(config.workers, static_cast<int>(windows.size())));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  result.maps.map2d = Mask(grid, 0);
  result.maps.map3d = ElevationRaster(grid, kNoData);
  result.dsm = ElevationRaster(grid, kNoData);
  result.dtm = ElevationRaster(grid, kNoData);
  result.ndhm = ElevationRaster(grid, kNoData);
  result.water = Mask(grid, 0);
  result.diff = DifferenceMap(grid, 0);
  for (std::size_t i = 0; i < windows.size(); ++i) {
    const auto& out = outputs[i];
    if (out.empty) {
      ++result.empty_windows;
      continue;
    }
    const auto& core = windows[i].core;
    paste(result.maps.map2d, out.map2d, core);
    paste(result.maps.map3d, out.map3d, core);
    paste(result.dsm, out.dsm, core);
    paste(result.dtm, out.dtm, core);
    paste(result.ndhm, out.ndhm, core);
    paste(result.water, out.water, core);
    paste(result.diff, out.diff, core);
  }
  return result;
}

void write_products(const std::filesystem::path& dir, const PipelineResult& result,
                    const std::set<Product>& products) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::IoFailure, "cannot create " + dir.string());
  for (const auto p : products) {
    const auto path = dir / (std::string(to_string(p)) + ".asc");
    switch (p) {
      case Product::Map2d: write_ascii_grid(path, result.maps.map2d); break;
      case Product::Map3d: write_ascii_grid(path, result.maps.map3d); break;
      case Product::Dsm: write_ascii_grid(path, result.dsm); break;
      case Product::Dtm: write_ascii_grid(path, result.dtm); break;
      case Product::Ndhm: write_ascii_grid(path, result.ndhm); break;
      case Product::Water: write_ascii_grid(path, result.water); break;
      case Product::Diff: write_ascii_grid(path, result.diff); break;
    }
  }
}

LabelRaster truth_instances_from_raster(const ElevationRaster& truth) {
  double top = 0.0;
  for (auto v : truth.values())
    if (!is_nodata(v)) top = std::max(top, v);
  if (top > 1.0) return to_labels(truth);
  return connected_components(to_mask(truth), Connectivity::Eight);
}

EvalReport run_eval(const Mask& pred, const LabelRaster& truth_instances, double tile_size) {
  require_same_grid(pred, truth_instances, "prediction and truth grids differ");
  Mask truth(truth_instances.spec(), 0);
  for (std::size_t i = 0; i < truth.size(); ++i) truth[i] = truth_instances[i] > 0 ? 1 : 0;
  return {confusion(pred, truth), tiling_comparison(pred, truth, tile_size), match_instances(pred, truth_instances)};
}

std::string format_ratio(const std::optional<double>& v) {
  if (!v) return "nodata";
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), *v, std::chars_format::fixed, 6);
  return std::string(buf, ptr);
}

namespace {

std::string num(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoFailure, "cannot write " + path.string());
  return out;
}

}  // namespace

void write_eval_report(const std::filesystem::path& dir, const EvalReport& report) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::IoFailure, "cannot create " + dir.string());

  {
    auto out = open_out(dir / "confusion.csv");
    const auto& m = report.global;
    out << "tp,fp,fn,tn,iou,precision,recall,f1\n";
    out << m.tp << ',' << m.fp << ',' << m.fn << ',' << m.tn << ',' << format_ratio(m.iou) << ','
        << format_ratio(m.precision) << ',' << format_ratio(m.recall) << ',' << format_ratio(m.f1) << '\n';
  }
  {
    auto out = open_out(dir / "tiles.csv");
    out << "rank,tile_index,tile_col,tile_row,min_x,min_y,max_x,max_y,tp,fp,fn,iou\n";
    for (std::size_t rank = 0; rank < report.tiles.ranking.size(); ++rank) {
      const auto& t = report.tiles.tiles[static_cast<std::size_t>(report.tiles.ranking[rank])];
      out << rank + 1 << ',' << t.index << ',' << t.tile_col << ',' << t.tile_row << ',' << num(t.bounds.min_x)
          << ',' << num(t.bounds.min_y) << ',' << num(t.bounds.max_x) << ',' << num(t.bounds.max_y) << ','
          << t.metrics.tp << ',' << t.metrics.fp << ',' << t.metrics.fn << ',' << format_ratio(t.metrics.iou)
          << '\n';
    }
  }
  {
    auto out = open_out(dir / "instances.csv");
    out << "category,min_area_m2,max_area_m2,gt_count,detected_count,detection_rate,commission_count,"
           "commission_rate\n";
    for (int k = 0; k < 4; ++k) {
      const auto& c = report.instances.categories[static_cast<std::size_t>(k)];
      out << to_string(static_cast<SizeClass>(k)) << ',' << (k == 0 ? "0" : num(kSizeClassBounds[k - 1])) << ','
          << (k == 3 ? "inf" : num(kSizeClassBounds[k])) << ',' << c.gt_count << ',' << c.detected_count << ','
          << format_ratio(c.detection_rate) << ',' << c.commission_count << ',' << format_ratio(c.commission_rate)
          << '\n';
    }
  }
}

void print_eval_summary(std::ostream& out, const EvalReport& report) {
  const auto& m = report.global;
  out << "pixels    tp=" << m.tp << " fp=" << m.fp << " fn=" << m.fn << " tn=" << m.tn << '\n';
  out << "iou       " << format_ratio(m.iou) << '\n';
  out << "precision " << format_ratio(m.precision) << '\n';
  out << "recall    " << format_ratio(m.recall) << '\n';
  out << "f1        " << format_ratio(m.f1) << '\n';
  out << "tiles     " << report.tiles.tiles.size() << " (" << report.tiles.tiles_x << " x " << report.tiles.tiles_y
      << ")\n";
  const std::size_t shown = std::min<std::size_t>(5, report.tiles.ranking.size());
  for (std::size_t i = 0; i < shown; ++i) {
    const auto& t = report.tiles.tiles[static_cast<std::size_t>(report.tiles.ranking[i])];
    out << "  #" << i + 1 << " tile " << t.index << " iou " << format_ratio(t.metrics.iou) << '\n';
  }
  out << std::left << std::setw(12) << "class" << std::setw(8) << "truth" << std::setw(10) << "detected"
      << std::setw(12) << "det.rate" << std::setw(12) << "commission" << "comm.rate\n";
  for (int k = 0; k < 4; ++k) {
    const auto& c = report.instances.categories[static_cast<std::size_t>(k)];
    out << std::setw(12) << to_string(static_cast<SizeClass>(k)) << std::setw(8) << c.gt_count << std::setw(10)
        << c.detected_count << std::setw(12) << format_ratio(c.detection_rate) << std::setw(12)
        << c.commission_count << format_ratio(c.commission_rate) << '\n';
  }
}

SweepParam parse_sweep_param(std::string_view name) {
  if (name == "k1") return SweepParam::K1;
  if (name == "dt") return SweepParam::Dt;
  if (name == "k3") return SweepParam::K3;
  if (name == "ht") return SweepParam::Ht;
  throw Error(ErrorCode::ConfigError, "sweep parameter must be one of k1, dt, k3, ht");
}

std::string_view to_string(SweepParam p) {
  switch (p) {
    case SweepParam::K1: return "k1";
    case SweepParam::Dt: return "dt";
    case SweepParam::K3: return "k3";
    case SweepParam::Ht: return "ht";
  }
  return "unknown";
}

std::vector<SweepRow> run_sweep(const PipelineConfig& config, SweepParam param, std::vector<double> values,
                                const PointCloud& cloud, const LabelRaster& truth_instances,
                                const ElevationRaster* external_dtm) {
  std::sort(values.begin(), values.end());
  std::vector<SweepRow> rows;
  for (const double v : values) {
    PipelineConfig c = config;
    switch (param) {
      case SweepParam::K1: c.extract.k1 = static_cast<int>(std::llround(v)); break;
      case SweepParam::Dt: c.extract.dt = v; break;
      case SweepParam::K3: c.extract.k3 = static_cast<int>(std::llround(v)); break;
      case SweepParam::Ht: c.extract.ht = v; break;
    }
    PipelineInputs inputs{&cloud, external_dtm, truth_instances.spec()};
    const auto result = run_pipeline(c, inputs);
    Mask truth(truth_instances.spec(), 0);
    for (std::size_t i = 0; i < truth.size(); ++i) truth[i] = truth_instances[i] > 0 ? 1 : 0;
    SweepRow row{v, confusion(result.maps.map2d, truth), match_instances(result.maps.map2d, truth_instances), 0};
    for (const auto& cat : row.instances.categories) row.detected_total += cat.detected_count;
    rows.push_back(row);
  }
  return rows;
}

void write_sweep_table(std::ostream& out, SweepParam param, const std::vector<SweepRow>& rows) {
  out << to_string(param) << ",iou,precision,recall,f1,detected\n";
  for (const auto& r : rows) {
    out << num(r.value) << ',' << format_ratio(r.metrics.iou) << ',' << format_ratio(r.metrics.precision) << ','
        << format_ratio(r.metrics.recall) << ',' << format_ratio(r.metrics.f1) << ',' << r.detected_total << '\n';
  }
}

}  // namespace bldmap
