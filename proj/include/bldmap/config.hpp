// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <set>
#include <string>
#include <string_view>

#include "bldmap/extract.hpp"
#include "bldmap/hydro.hpp"

namespace bldmap {

enum class Product { Map2d, Map3d, Dsm, Dtm, Ndhm, Water, Diff };

std::string_view to_string(Product p);
Product parse_product(std::string_view name);

struct PipelineConfig {
  double gsd = 0.5;
  ExtractParams extract;
  double slope_threshold = 1.0;
  WaterParams water;
  double window_size_m = 1000.0;
  double overlap_m = 100.0;
  std::set<Product> outputs{Product::Map2d, Product::Map3d};
  int workers = 1;

  /// Throws ConfigError (or BadKernel) when a value is out of range or the
  /// overlap cannot hold the opening and water-window support.
  void validate() const;

  friend bool operator==(const PipelineConfig&, const PipelineConfig&) = default;
};

/// Flat "key = value" text, one key per line in a fixed order.
std::string serialize_config(const PipelineConfig& config);

/// Parses the text form; unknown keys and malformed values throw
/// ConfigError. Keys absent from the text keep their current values.
void apply_config_text(PipelineConfig& config, std::string_view text);
void apply_config_value(PipelineConfig& config, std::string_view key, std::string_view value);

PipelineConfig parse_config(std::string_view text);
PipelineConfig load_config(const std::filesystem::path& path);

}  // namespace bldmap
