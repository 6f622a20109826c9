#pragma once

// PotentialGrid export/import. JSON keeps full double precision; CSV holds one
// row per sample (coordinates in um, energies in uK) with 9 significant digits
// and a leading '#' metadata line describing the lattice.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cwewt/constants.hpp"
#include "cwewt/errors.hpp"
#include "cwewt/potential.hpp"

namespace cwewt {

inline constexpr const char* grid_format_tag = "cwewt-grid/1";

namespace detail {

inline std::string format9(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

inline double parse_number(const std::string& s) {
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw ConfigError("grid csv: bad number '" + s + "'");
  return v;
}

// CSV value column: energies in uK, lengths in nm.
inline double csv_scale(const std::string& quantity) {
  if (quantity == "energy") return 1.0 / (boltzmann * uK);
  if (quantity == "length") return 1.0 / nm;
  throw InvalidArgument("grid: unknown quantity '" + quantity + "'");
}

inline const char* csv_value_column(const std::string& quantity) {
  return quantity == "energy" ? "U_uK" : "x_min_nm";
}

}  // namespace detail

inline nlohmann::json grid_metadata(const PotentialGrid& g) {
  nlohmann::json axes = nlohmann::json::array();
  for (const auto& a : g.axes)
    axes.push_back({{"name", a.name},
                    {"start_m", a.start},
                    {"step_m", a.step},
                    {"count", a.count},
                    {"direction", {a.direction[0], a.direction[1], a.direction[2]}}});
  return {{"format", grid_format_tag},
          {"config_hash", g.config_hash},
          {"quantity", g.quantity},
          {"unit", g.quantity == "energy" ? "J" : "m"},
          {"origin_m", {g.origin[0], g.origin[1], g.origin[2]}},
          {"axes", axes}};
}

inline PotentialGrid grid_from_metadata(const nlohmann::json& j) {
  PotentialGrid g;
  try {
    if (j.at("format").get<std::string>() != grid_format_tag)
      throw ConfigError("grid: unsupported format tag");
    g.config_hash = j.at("config_hash").get<std::string>();
    g.quantity = j.at("quantity").get<std::string>();
    const auto& o = j.at("origin_m");
    g.origin = {o.at(0).get<double>(), o.at(1).get<double>(), o.at(2).get<double>()};
    for (const auto& ja : j.at("axes")) {
      GridAxis a;
      a.name = ja.at("name").get<std::string>();
      a.start = ja.at("start_m").get<double>();
      a.step = ja.at("step_m").get<double>();
      a.count = ja.at("count").get<std::size_t>();
      const auto& d = ja.at("direction");
      a.direction = {d.at(0).get<double>(), d.at(1).get<double>(), d.at(2).get<double>()};
      g.axes.push_back(std::move(a));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("grid metadata: ") + e.what());
  }
  detail::csv_scale(g.quantity);
  return g;
}

inline std::string grid_to_json_text(const PotentialGrid& g) {
  g.validate();
  nlohmann::json j = grid_metadata(g);
  nlohmann::json values = nlohmann::json::array();
  for (double v : g.values) values.push_back(std::isfinite(v) ? nlohmann::json(v) : nlohmann::json());
  j["values"] = std::move(values);
  return j.dump(1) + "\n";
}

inline PotentialGrid grid_from_json_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("grid json: ") + e.what());
  }
  PotentialGrid g = grid_from_metadata(j);
  if (!j.contains("values") || !j.at("values").is_array()) throw ConfigError("grid json: missing values");
  for (const auto& v : j.at("values"))
    g.values.push_back(v.is_null() ? std::numeric_limits<double>::quiet_NaN() : v.get<double>());
  g.validate();
  return g;
}

inline std::string grid_to_csv_text(const PotentialGrid& g) {
  g.validate();
  std::string out = "# " + grid_metadata(g).dump() + "\n";
  for (const auto& a : g.axes) out += a.name + "_um,";
  out += detail::csv_value_column(g.quantity);
  out += "\n";
  const double scale = detail::csv_scale(g.quantity);
  for (std::size_t i = 0; i < g.values.size(); ++i) {
    const auto idx = g.unravel(i);
    for (std::size_t k = 0; k < g.axes.size(); ++k) {
      out += detail::format9(g.axes[k].coordinate(idx[k]) / um);
      out += ',';
    }
    out += detail::format9(g.values[i] * scale);
    out += '\n';
  }
  return out;
}

inline PotentialGrid grid_from_csv_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line.rfind("# ", 0) != 0)
    throw ConfigError("grid csv: missing '# {metadata}' first line");
  nlohmann::json meta;
  try {
    meta = nlohmann::json::parse(line.substr(2));
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("grid csv metadata: ") + e.what());
  }
  PotentialGrid g = grid_from_metadata(meta);
  if (!std::getline(in, line)) throw ConfigError("grid csv: missing header row");
  const double scale = detail::csv_scale(g.quantity);
  const std::size_t columns = g.axes.size() + 1;
  std::size_t row = 2;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != columns)
      throw ConfigError("grid csv: row " + std::to_string(row) + " has " + std::to_string(cells.size()) +
                        " columns, expected " + std::to_string(columns));
    g.values.push_back(detail::parse_number(cells.back()) / scale);
  }
  g.validate();
  return g;
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << text;
}

inline std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace cwewt
