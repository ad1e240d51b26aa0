// SPDX-License-Identifier: Apache-2.0
//
// bldmap: LiDAR point clouds to 2D/3D building rasters, plus evaluation
// and parameter sweeps against reference footprints.
//
// Usage:
//   bldmap map   [flags] --out DIR INPUT...
//   bldmap eval  --pred MAP2D.asc --truth TRUTH.{asc,geojson} [--tile-size M] [--out DIR]
//   bldmap sweep [flags] --param k3 --values 1,3,5,7 --truth TRUTH INPUT...
//
// Exit codes: 0 success, 1 usage or configuration error, 2 data error.

#include <CLI11.hpp>

#include <charconv>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "bldmap/config.hpp"
#include "bldmap/formats.hpp"
#include "bldmap/geojson.hpp"
#include "bldmap/ingest.hpp"
#include "bldmap/pipeline.hpp"

namespace {

using namespace bldmap;

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

// Pipeline flags shared by map and sweep; values override the config file.
struct PipelineFlags {
  std::string config_path;
  std::map<std::string, std::string> overrides;
  std::string emit;
  std::string dtm_file;
  std::string format = "auto";
  std::vector<std::string> inputs;

  void add_to(CLI::App& app) {
    app.add_option("--config", config_path, "Key = value configuration file");
    static const std::vector<std::pair<std::string, std::string>> flags{
        {"gsd", "gsd"},
        {"ht", "ht"},
        {"k1", "k1"},
        {"k2", "k2"},
        {"rt", "rt"},
        {"dt", "dt"},
        {"k3", "k3"},
        {"slope-threshold", "slope_threshold"},
        {"window-size", "window_size"},
        {"overlap", "overlap"},
        {"median-roof", "median_roof"},
        {"kernel-shape", "kernel_shape"},
        {"workers", "workers"},
    };
    for (const auto& [flag, key] : flags) {
      app.add_option_function<std::string>(
          "--" + flag, [this, key = key](const std::string& v) { overrides[key] = v; },
          "Override config key " + key);
    }
    app.add_option("--emit", emit, "Comma list of products: map2d,map3d,dsm,dtm,ndhm,water,diff");
    app.add_option("--dtm-file", dtm_file, "Reference DTM (.asc) used instead of the derived ground model");
    app.add_option("--format", format, "Input format")->check(CLI::IsMember({"auto", "xyz", "las"}));
    app.add_option("inputs", inputs, "Point files (.las or XYZ text)")->required();
  }

  PipelineConfig config() const {
    PipelineConfig c = config_path.empty() ? PipelineConfig{} : load_config(config_path);
    for (const auto& [k, v] : overrides) apply_config_value(c, k, v);
    if (!emit.empty()) apply_config_value(c, "outputs", emit);
    c.validate();
    return c;
  }

  PointCloud cloud() const {
    const auto fmt = format == "las" ? InputFormat::Las : (format == "xyz" ? InputFormat::Xyz : InputFormat::Auto);
    std::vector<PointCloud> clouds;
    for (const auto& in : inputs) {
      clouds.push_back(load_point_file(in, fmt));
      if (clouds.back().dropped_nonfinite > 0)
        std::clog << "warning: " << in << ": dropped " << clouds.back().dropped_nonfinite
                  << " points with non-finite coordinates\n";
    }
    return merge_clouds(std::move(clouds));
  }

  std::optional<ElevationRaster> external_dtm() const {
    if (dtm_file.empty()) return std::nullopt;
    return read_ascii_grid(dtm_file).values;
  }
};

bool is_geojson(const std::string& path) {
  const auto ext = std::filesystem::path(path).extension().string();
  return ext == ".geojson" || ext == ".json";
}

LabelRaster load_truth(const std::string& path, const GridSpec& grid) {
  if (is_geojson(path)) return rasterize_polygons(load_geojson_polygons(path), grid);
  auto raster = read_ascii_grid(path).values;
  if (!(raster.spec() == grid)) raster = resample_nearest(raster, grid);
  return truth_instances_from_raster(raster);
}

std::vector<double> parse_values(const std::string& list) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= list.size()) {
    const auto end = list.find(',', pos);
    const auto item = list.substr(pos, end == std::string::npos ? std::string::npos : end - pos);
    double v;
    auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (item.empty() || ec != std::errc() || ptr != item.data() + item.size())
      throw Error(ErrorCode::ConfigError, "bad sweep value '" + item + "'");
    out.push_back(v);
    if (end == std::string::npos) break;
    pos = end + 1;
  }
  return out;
}

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::ConfigError:
    case ErrorCode::BadKernel:
      return kExitUsage;
    default:
      return kExitData;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Building maps from airborne LiDAR point clouds"};
  app.require_subcommand(1);

  PipelineFlags map_flags;
  std::string map_out = ".";
  auto* map_cmd = app.add_subcommand("map", "Run the mapping pipeline");
  map_flags.add_to(*map_cmd);
  map_cmd->add_option("--out", map_out, "Output directory");

  std::string pred_path, truth_path, eval_out;
  double tile_size = 500.0;
  auto* eval_cmd = app.add_subcommand("eval", "Compare a building map with reference footprints");
  eval_cmd->add_option("--pred", pred_path, "Predicted map2d raster (.asc)")->required();
  eval_cmd->add_option("--truth", truth_path, "Truth raster (.asc) or footprints (.geojson)")->required();
  eval_cmd->add_option("--tile-size", tile_size, "Tile edge in meters");
  eval_cmd->add_option("--out", eval_out, "Directory for CSV reports");

  PipelineFlags sweep_flags;
  std::string sweep_param, sweep_values, sweep_truth, sweep_out;
  auto* sweep_cmd = app.add_subcommand("sweep", "Evaluate the pipeline over values of one parameter");
  sweep_flags.add_to(*sweep_cmd);
  sweep_cmd->add_option("--param", sweep_param, "k1, dt, k3 or ht")->required();
  sweep_cmd->add_option("--values", sweep_values, "Comma-separated values")->required();
  sweep_cmd->add_option("--truth", sweep_truth, "Truth raster (.asc) or footprints (.geojson)")->required();
  sweep_cmd->add_option("--out", sweep_out, "CSV file for the table (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (*map_cmd) {
      const auto config = map_flags.config();
      const auto cloud = map_flags.cloud();
      const auto dtm = map_flags.external_dtm();
      const auto result = run_pipeline(config, {&cloud, dtm ? &*dtm : nullptr, std::nullopt});
      write_products(map_out, result, config.outputs);
      std::cout << "grid " << result.plan.grid.width << " x " << result.plan.grid.height << " cells, "
                << result.plan.windows.size() << " windows, " << count_true(result.maps.map2d)
                << " building cells\n";
    } else if (*eval_cmd) {
      const auto pred = to_mask(read_ascii_grid(pred_path).values);
      const auto truth = load_truth(truth_path, pred.spec());
      const auto report = run_eval(pred, truth, tile_size);
      print_eval_summary(std::cout, report);
      if (!eval_out.empty()) write_eval_report(eval_out, report);
    } else if (*sweep_cmd) {
      const auto config = sweep_flags.config();
      const auto param = parse_sweep_param(sweep_param);
      const auto values = parse_values(sweep_values);
      const auto cloud = sweep_flags.cloud();
      const auto dtm = sweep_flags.external_dtm();
      const GridSpec grid = GridSpec::covering(cloud.bounds, config.gsd);
      const auto truth = load_truth(sweep_truth, grid);
      const auto rows = run_sweep(config, param, values, cloud, truth, dtm ? &*dtm : nullptr);
      if (sweep_out.empty()) {
        write_sweep_table(std::cout, param, rows);
      } else {
        std::ofstream out(sweep_out, std::ios::binary);
        if (!out) throw Error(ErrorCode::IoFailure, "cannot write " + sweep_out);
        write_sweep_table(out, param, rows);
      }
    }
  } catch (const Error& e) {
    std::cerr << "bldmap: " << e.what() << '\n';
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "bldmap: " << e.what() << '\n';
    return kExitData;
  }
  return 0;
}
