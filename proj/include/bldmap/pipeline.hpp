// SPDX-License-Identifier: Apache-2.0
//
// Orchestration: overlapped-window execution of the mapping chain over an
// arbitrary extent, evaluation against reference footprints, and parameter
// sweeps.

#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "bldmap/config.hpp"
#include "bldmap/eval.hpp"
#include "bldmap/extract.hpp"
#include "bldmap/ingest.hpp"

namespace bldmap {

/// Axis-aligned block of cells in global grid coordinates.
struct CellRect {
  int col0 = 0;
  int row0 = 0;
  int cols = 0;
  int rows = 0;

  bool contains(int col, int row) const {
    return col >= col0 && row >= row0 && col < col0 + cols && row < row0 + rows;
  }
  friend bool operator==(const CellRect&, const CellRect&) = default;
};

struct Window {
  int index = 0;
  CellRect core;  // written to the output
  CellRect pad;   // processed; core grown by the overlap, clipped to the grid
};

struct WindowPlan {
  GridSpec grid;
  std::vector<Window> windows;
};

/// Cores of window_size_m tile the grid row-major from the south-west;
/// each pad extends its core by ceil(overlap_m / gsd) cells.
WindowPlan plan_windows(const GridSpec& grid, double window_size_m, double overlap_m);

/// Sub-grid of `grid` covering `rect`.
GridSpec sub_grid(const GridSpec& grid, const CellRect& rect);

/// Samples `source` at the center of every cell of `target`; cells outside
/// the source read as nodata.
ElevationRaster resample_nearest(const ElevationRaster& source, const GridSpec& target);

struct PipelineResult {
  WindowPlan plan;
  BuildingMaps maps;
  ElevationRaster dsm;
  ElevationRaster dtm;
  ElevationRaster ndhm;
  Mask water;
  DifferenceMap diff;
  std::size_t empty_windows = 0;
};

struct PipelineInputs {
  const PointCloud* cloud = nullptr;
  // Reference DTM used instead of the derived ground model.
  const ElevationRaster* external_dtm = nullptr;
  // Output grid; defaults to the gsd-aligned cover of the cloud bounds.
  std::optional<GridSpec> grid;
};

/// Runs rasterization, ground modelling, water masking and extraction per
/// padded window and mosaics the window cores. Stage errors are rethrown
/// with the window index in the message.
PipelineResult run_pipeline(const PipelineConfig& config, const PipelineInputs& inputs);

/// Writes the requested products as <dir>/<product>.asc.
void write_products(const std::filesystem::path& dir, const PipelineResult& result,
                    const std::set<Product>& products);

struct EvalReport {
  ConfusionMetrics global;
  TileReport tiles;
  InstanceMatchReport instances;
};

/// Truth instance labels: a raster with values above 1 is read as instance
/// ids, otherwise its set cells are split into 8-connected instances.
LabelRaster truth_instances_from_raster(const ElevationRaster& truth);

EvalReport run_eval(const Mask& pred, const LabelRaster& truth_instances, double tile_size = 500.0);

/// confusion.csv, tiles.csv (ranked) and instances.csv in `dir`.
void write_eval_report(const std::filesystem::path& dir, const EvalReport& report);
void print_eval_summary(std::ostream& out, const EvalReport& report);

enum class SweepParam { K1, Dt, K3, Ht };
SweepParam parse_sweep_param(std::string_view name);
std::string_view to_string(SweepParam p);

struct SweepRow {
  double value = 0.0;
  ConfusionMetrics metrics;
  InstanceMatchReport instances;
  std::size_t detected_total = 0;
};

/// One pipeline and evaluation per value on the truth grid, all other
/// parameters fixed; rows sorted by value.
std::vector<SweepRow> run_sweep(const PipelineConfig& config, SweepParam param, std::vector<double> values,
                                const PointCloud& cloud, const LabelRaster& truth_instances,
                                const ElevationRaster* external_dtm = nullptr);

void write_sweep_table(std::ostream& out, SweepParam param, const std::vector<SweepRow>& rows);

/// Fixed-width rendering of an optional ratio; "nodata" when empty.
std::string format_ratio(const std::optional<double>& v);

}  // namespace bldmap
