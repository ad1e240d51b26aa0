// SPDX-License-Identifier: Apache-2.0
#include "bldmap/config.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <utility>

namespace bldmap {

namespace {

constexpr std::array<std::pair<Product, std::string_view>, 7> kProducts{{
    {Product::Map2d, "map2d"},
    {Product::Map3d, "map3d"},
    {Product::Dsm, "dsm"},
    {Product::Dtm, "dtm"},
    {Product::Ndhm, "ndhm"},
    {Product::Water, "water"},
    {Product::Diff, "diff"},
}};

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string fmt(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

double as_double(std::string_view key, std::string_view v) {
  double out;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(out))
    throw Error(ErrorCode::ConfigError, std::string(key) + ": not a number: '" + std::string(v) + "'");
  return out;
}

int as_int(std::string_view key, std::string_view v) {
  int out;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size())
    throw Error(ErrorCode::ConfigError, std::string(key) + ": not an integer: '" + std::string(v) + "'");
  return out;
}

}  // namespace

std::string_view to_string(Product p) {
  for (const auto& [prod, name] : kProducts)
    if (prod == p) return name;
  return "unknown";
}

Product parse_product(std::string_view name) {
  for (const auto& [prod, n] : kProducts)
    if (n == name) return prod;
  throw Error(ErrorCode::ConfigError, "unknown output product '" + std::string(name) + "'");
}

void PipelineConfig::validate() const {
  if (!(gsd > 0.0)) throw Error(ErrorCode::ConfigError, "gsd must be positive");
  extract.validate();
  if (!(slope_threshold > 0.0)) throw Error(ErrorCode::ConfigError, "slope_threshold must be positive");
  check_kernel(water.window);
  if (water.window < 3) throw Error(ErrorCode::ConfigError, "water_window must be at least 3");
  if (!(water.sigma_k >= 0.0)) throw Error(ErrorCode::ConfigError, "water_sigma_k must be non-negative");
  if (!(water.min_area >= 0.0)) throw Error(ErrorCode::ConfigError, "water_min_area must be non-negative");
  if (!(water.buffer >= 0.0)) throw Error(ErrorCode::ConfigError, "water_buffer must be non-negative");
  if (!(window_size_m >= gsd)) throw Error(ErrorCode::ConfigError, "window_size must be at least one cell");
  const double support = extract.k1 * gsd + water.window * gsd;
  if (!(overlap_m >= support))
    throw Error(ErrorCode::ConfigError,
                "overlap " + fmt(overlap_m) + " m is smaller than the stage support " + fmt(support) + " m");
  if (workers < 1) throw Error(ErrorCode::ConfigError, "workers must be at least 1");
}

std::string serialize_config(const PipelineConfig& c) {
  std::ostringstream out;
  out << "gsd = " << fmt(c.gsd) << '\n';
  out << "ht = " << fmt(c.extract.ht) << '\n';
  out << "k1 = " << c.extract.k1 << '\n';
  out << "k2 = " << c.extract.k2 << '\n';
  out << "rt = " << c.extract.rt << '\n';
  out << "dt = " << fmt(c.extract.dt) << '\n';
  out << "k3 = " << c.extract.k3 << '\n';
  out << "kernel_shape = " << (c.extract.kernel_shape == KernelShape::Square ? "square" : "diamond") << '\n';
  out << "median_roof = " << (c.extract.median_roof ? std::to_string(*c.extract.median_roof) : "off") << '\n';
  out << "slope_threshold = " << fmt(c.slope_threshold) << '\n';
  out << "water_window = " << c.water.window << '\n';
  out << "water_sigma_k = " << fmt(c.water.sigma_k) << '\n';
  out << "water_min_area = " << fmt(c.water.min_area) << '\n';
  out << "water_buffer = " << fmt(c.water.buffer) << '\n';
  out << "window_size = " << fmt(c.window_size_m) << '\n';
  out << "overlap = " << fmt(c.overlap_m) << '\n';
  out << "outputs = ";
  bool first = true;
  for (const auto p : c.outputs) {
    if (!first) out << ',';
    out << to_string(p);
    first = false;
  }
  out << '\n';
  out << "workers = " << c.workers << '\n';
  return out.str();
}

void apply_config_value(PipelineConfig& c, std::string_view key, std::string_view value) {
  value = trim(value);
  if (key == "gsd") c.gsd = as_double(key, value);
  else if (key == "ht") c.extract.ht = as_double(key, value);
  else if (key == "k1") c.extract.k1 = as_int(key, value);
  else if (key == "k2") c.extract.k2 = as_int(key, value);
  else if (key == "rt") c.extract.rt = as_int(key, value);
  else if (key == "dt") c.extract.dt = as_double(key, value);
  else if (key == "k3") c.extract.k3 = as_int(key, value);
  else if (key == "kernel_shape") {
    if (value == "square") c.extract.kernel_shape = KernelShape::Square;
    else if (value == "diamond") c.extract.kernel_shape = KernelShape::Diamond;
    else throw Error(ErrorCode::ConfigError, "kernel_shape must be square or diamond");
  } else if (key == "median_roof") {
    if (value == "off" || value == "0") c.extract.median_roof.reset();
    else c.extract.median_roof = as_int(key, value);
  } else if (key == "slope_threshold") c.slope_threshold = as_double(key, value);
  else if (key == "water_window") c.water.window = as_int(key, value);
  else if (key == "water_sigma_k") c.water.sigma_k = as_double(key, value);
  else if (key == "water_min_area") c.water.min_area = as_double(key, value);
  else if (key == "water_buffer") c.water.buffer = as_double(key, value);
  else if (key == "window_size") c.window_size_m = as_double(key, value);
  else if (key == "overlap") c.overlap_m = as_double(key, value);
  else if (key == "outputs") {
    c.outputs.clear();
    std::size_t pos = 0;
    while (pos <= value.size()) {
      const auto end = value.find(',', pos);
      const auto item = trim(value.substr(pos, end == std::string_view::npos ? std::string_view::npos : end - pos));
      if (!item.empty()) c.outputs.insert(parse_product(item));
      if (end == std::string_view::npos) break;
      pos = end + 1;
    }
  } else if (key == "workers") c.workers = as_int(key, value);
  else throw Error(ErrorCode::ConfigError, "unknown config key '" + std::string(key) + "'");
}

void apply_config_text(PipelineConfig& config, std::string_view text) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    auto line = trim(text.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw Error(ErrorCode::ConfigError, "line " + std::to_string(line_no) + ": expected key = value");
    apply_config_value(config, trim(line.substr(0, eq)), line.substr(eq + 1));
  }
}

PipelineConfig parse_config(std::string_view text) {
  PipelineConfig c;
  apply_config_text(c, text);
  return c;
}

PipelineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ConfigError, "cannot read config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace bldmap
