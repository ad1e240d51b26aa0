// SPDX-License-Identifier: Apache-2.0
#include "bldmap/geojson.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "bldmap/error.hpp"

namespace bldmap {

namespace {

using nlohmann::json;

Ring parse_ring(const json& coords) {
  Ring ring;
  for (const auto& pos : coords) {
    if (!pos.is_array() || pos.size() < 2) throw Error(ErrorCode::ParseError, "GeoJSON position needs 2 numbers");
    ring.push_back({pos[0].get<double>(), pos[1].get<double>()});
  }
  return ring;
}

void append_polygon(const json& coords, Polygon& out) {
  for (const auto& ring : coords) out.rings.push_back(parse_ring(ring));
}

bool parse_geometry(const json& geom, Polygon& out) {
  if (geom.is_null()) return false;
  const auto type = geom.at("type").get<std::string>();
  if (type == "Polygon") {
    append_polygon(geom.at("coordinates"), out);
    return true;
  }
  if (type == "MultiPolygon") {
    for (const auto& part : geom.at("coordinates")) append_polygon(part, out);
    return true;
  }
  return false;
}

}  // namespace

std::vector<Polygon> parse_geojson_polygons(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("GeoJSON: ") + e.what());
  }
  std::vector<Polygon> polygons;
  try {
    auto take = [&](const json& geom) {
      Polygon p;
      if (parse_geometry(geom, p)) polygons.push_back(std::move(p));
    };
    const auto type = doc.at("type").get<std::string>();
    if (type == "FeatureCollection") {
      for (const auto& f : doc.at("features")) take(f.at("geometry"));
    } else if (type == "Feature") {
      take(doc.at("geometry"));
    } else {
      take(doc);
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("GeoJSON: ") + e.what());
  }
  return polygons;
}

std::vector<Polygon> load_geojson_polygons(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_geojson_polygons(ss.str());
}

}  // namespace bldmap
