// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string_view>
#include <vector>

#include "bldmap/eval.hpp"

namespace bldmap {

/// Polygon and MultiPolygon geometries from a FeatureCollection, a single
/// Feature or a bare geometry, one Polygon per feature. Coordinates must
/// already be in the target grid's projected system. Other geometry types
/// are skipped.
std::vector<Polygon> parse_geojson_polygons(std::string_view text);
std::vector<Polygon> load_geojson_polygons(const std::filesystem::path& path);

}  // namespace bldmap
