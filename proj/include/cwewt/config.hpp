#pragma once

// Trap configuration files: JSON with SI-suffixed field names, bundled
// presets C1-C4 and the default Rb-87 species data.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "cwewt/atomic_physics.hpp"
#include "cwewt/embedded_data.hpp"
#include "cwewt/errors.hpp"
#include "cwewt/mode_model.hpp"
#include "cwewt/potential.hpp"
#include "cwewt/slab_solver.hpp"

namespace cwewt {

using json = nlohmann::json;

/// FNV-1a 64-bit digest as 16 hex digits.
inline std::string fnv1a_hex(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

inline AtomSpecies rubidium87() {
  return species_from_json(json::parse(embedded::rb87_species));
}

namespace detail {

// Reads fields of one JSON object and reports unknown keys with their path.
class FieldReader {
 public:
  FieldReader(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) throw ConfigError(where() + ": expected an object");
  }

  bool has(const std::string& key) {
    seen_.insert(key);
    return obj_.contains(key) && !obj_.at(key).is_null();
  }

  double number(const std::string& key) {
    if (!has(key)) throw ConfigError(where(key) + ": required field missing");
    const json& v = obj_.at(key);
    if (!v.is_number()) throw ConfigError(where(key) + ": expected a number");
    return v.get<double>();
  }

  double number(const std::string& key, double fallback) { return has(key) ? number(key) : fallback; }

  std::optional<double> optional_number(const std::string& key) {
    if (!has(key)) return std::nullopt;
    return number(key);
  }

  std::string text(const std::string& key, const std::string& fallback) {
    if (!has(key)) return fallback;
    const json& v = obj_.at(key);
    if (!v.is_string()) throw ConfigError(where(key) + ": expected a string");
    return v.get<std::string>();
  }

  bool flag(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    const json& v = obj_.at(key);
    if (!v.is_boolean()) throw ConfigError(where(key) + ": expected true or false");
    return v.get<bool>();
  }

  const json& child(const std::string& key) {
    if (!has(key)) throw ConfigError(where(key) + ": required section missing");
    return obj_.at(key);
  }

  void require(bool ok, const std::string& key, const std::string& message) const {
    if (!ok) throw ConfigError(where(key) + ": " + message);
  }

  void reject_unknown() const {
    for (const auto& [key, value] : obj_.items())
      if (!seen_.count(key)) throw ConfigError(where(key) + ": unknown field");
  }

  std::string where(const std::string& key = "") const {
    if (key.empty()) return path_.empty() ? "<root>" : path_;
    return path_.empty() ? key : path_ + "." + key;
  }

 private:
  const json& obj_;
  std::string path_;
  std::set<std::string> seen_;
};

inline ModeSpec read_mode(const json& j, const std::string& path, const SlabGeometry& geometry,
                          double& intensity_II, double& detuning) {
  FieldReader r(j, path);
  ModeSpec m;
  const double wavelength_nm = r.number("wavelength_nm");
  r.require(wavelength_nm > 0.0, "wavelength_nm", "must be > 0");
  m.wavelength = wavelength_nm * nm;
  const double width_um = r.number("lateral_width_um");
  r.require(width_um > 0.0, "lateral_width_um", "must be > 0");
  m.lateral_width = width_um * um;

  const auto intensity = r.optional_number("intensity_W_per_m2");
  const auto power_mW = r.optional_number("power_mW");
  const auto area_um2 = r.optional_number("effective_area_um2");
  if (area_um2) r.require(*area_um2 > 0.0, "effective_area_um2", "must be > 0");
  if (power_mW) r.require(*power_mW >= 0.0, "power_mW", "must be >= 0");
  if (intensity) {
    r.require(*intensity >= 0.0, "intensity_W_per_m2", "must be >= 0");
    m.peak_intensity = *intensity;
    if (power_mW) m.power = *power_mW * 1e-3;
    if (area_um2) m.effective_area = *area_um2 * um * um;
    if (power_mW && !area_um2 && *intensity > 0.0) m.effective_area = *m.power / *intensity;
    if (area_um2 && !power_mW) m.power = *intensity * *m.effective_area;
    if (power_mW && area_um2) {
      const double derived = *intensity * *m.effective_area;
      r.require(std::abs(derived - *m.power) <= 1e-6 * std::max(*m.power, 1e-30), "power_mW",
                "inconsistent with intensity_W_per_m2 * effective_area_um2");
    }
  } else {
    r.require(power_mW && area_um2, "intensity_W_per_m2",
              "give either intensity_W_per_m2 or both power_mW and effective_area_um2");
    m.power = *power_mW * 1e-3;
    m.effective_area = *area_um2 * um * um;
    m.peak_intensity = *m.power / *m.effective_area;
  }
  intensity_II = r.number("intensity_II_W_per_m2", m.peak_intensity);
  r.require(intensity_II >= 0.0, "intensity_II_W_per_m2", "must be >= 0");

  try {
    m.n_eff_cross = r.has("n_eff_cross") ? r.number("n_eff_cross") : slab_neff(geometry, m.wavelength);
    m.n_eff_rib = r.has("n_eff_rib") ? r.number("n_eff_rib") : rib_neff(geometry, m.wavelength).rib;
  } catch (const Error& e) {
    throw ConfigError(r.where() + ": effective index: " + e.what());
  }
  r.require(m.n_eff_cross > 1.0, "n_eff_cross", "must exceed 1 (no evanescent wave otherwise)");

  try {
    m.fringe_model = fringe_model_from_string(r.text("fringe_model", "none"));
  } catch (const Error& e) {
    throw ConfigError(r.where("fringe_model") + ": " + e.what());
  }
  m.reflection_amplitude = r.number("reflection_amplitude", 0.02);
  r.require(m.reflection_amplitude >= 0.0 && m.reflection_amplitude <= 1.0, "reflection_amplitude",
            "must lie in [0, 1]");
  detuning = r.number("relative_detuning_MHz", 0.0) * 1e6;
  r.require(detuning >= 0.0, "relative_detuning_MHz", "must be >= 0");
  r.reject_unknown();
  return m;
}

inline std::string line_column(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

// Converted quantities are written with 15 significant digits, which makes
// write -> read -> write a fixed point despite the SI scaling in between.
inline double in_units(double value, double unit) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.15g", value / unit);
  return std::strtod(buf, nullptr);
}

}  // namespace detail

inline json config_to_json(const TrapConfig& c) {
  using detail::in_units;
  const auto mode_json = [](const CrossedModePair& p) {
    const ModeSpec& m = p.mode_I;
    json j = {{"wavelength_nm", in_units(m.wavelength, nm)},
              {"lateral_width_um", in_units(m.lateral_width, um)},
              {"intensity_W_per_m2", m.peak_intensity},
              {"intensity_II_W_per_m2", p.mode_II.peak_intensity},
              {"n_eff_cross", m.n_eff_cross},
              {"n_eff_rib", m.n_eff_rib},
              {"fringe_model", to_string(m.fringe_model)},
              {"reflection_amplitude", m.reflection_amplitude},
              {"relative_detuning_MHz", in_units(p.relative_detuning, 1e6)}};
    if (m.power) j["power_mW"] = in_units(*m.power, 1e-3);
    // the area is implied by power / intensity whenever both are present
    if (m.effective_area && !(m.power && m.peak_intensity > 0.0))
      j["effective_area_um2"] = in_units(*m.effective_area, um * um);
    return j;
  };
  json geometry = {{"membrane_thickness_nm", in_units(c.geometry.core_thickness, nm)},
                   {"rib_height_nm", in_units(c.geometry.rib_height, nm)},
                   {"rib_width_um", in_units(c.geometry.rib_width, um)},
                   {"cladding_index", c.geometry.cladding_index}};
  if (c.geometry.core_index > 0.0) geometry["core_index"] = c.geometry.core_index;
  return {{"name", c.name},
          {"geometry", geometry},
          {"species", species_to_json(c.species)},
          {"blue", mode_json(c.blue)},
          {"red", mode_json(c.red)},
          {"environment",
           {{"gravity_sign", c.gravity_sign},
            {"temperature_uK", in_units(c.temperature, uK)},
            {"cross_diffraction", c.blue.diffraction}}}};
}

/// Hash of the fully resolved configuration (derived indices and areas included).
inline std::string config_hash(const TrapConfig& c) { return fnv1a_hex(config_to_json(c).dump()); }

inline TrapConfig config_from_json(const json& root, const std::filesystem::path& base_dir = {}) {
  detail::FieldReader r(root, "");
  TrapConfig c;
  c.name = r.text("name", "config");

  {
    detail::FieldReader g(r.child("geometry"), "geometry");
    c.geometry.core_thickness = g.number("membrane_thickness_nm") * nm;
    c.geometry.rib_height = g.number("rib_height_nm", 0.0) * nm;
    c.geometry.rib_width = g.number("rib_width_um") * um;
    c.geometry.core_index = g.number("core_index", 0.0);
    c.geometry.cladding_index = g.number("cladding_index", 1.0);
    g.require(c.geometry.core_thickness > 0.0, "membrane_thickness_nm", "must be > 0");
    g.require(c.geometry.rib_height >= 0.0, "rib_height_nm", "must be >= 0");
    g.require(c.geometry.rib_width > 0.0, "rib_width_um", "must be > 0");
    g.require(c.geometry.cladding_index >= 1.0, "cladding_index", "must be >= 1");
    g.require(c.geometry.core_index == 0.0 || c.geometry.core_index > c.geometry.cladding_index,
              "core_index", "must exceed cladding_index");
    g.reject_unknown();
  }

  if (r.has("species")) {
    const json& s = root.at("species");
    if (s.is_string()) {
      const std::string name = s.get<std::string>();
      if (name != "Rb87") throw ConfigError("species: unknown built-in species '" + name + "'");
      c.species = rubidium87();
    } else {
      c.species = species_from_json(s);
    }
  } else if (r.has("species_file")) {
    std::filesystem::path p = r.text("species_file", "");
    if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
    c.species = load_species(p);
  } else {
    c.species = rubidium87();
  }

  bool diffraction = true;
  if (r.has("environment")) {
    detail::FieldReader e(root.at("environment"), "environment");
    const double sign = e.number("gravity_sign", 1.0);
    e.require(sign == 1.0 || sign == 0.0 || sign == -1.0, "gravity_sign", "must be -1, 0 or +1");
    c.gravity_sign = static_cast<int>(sign);
    c.temperature = e.number("temperature_uK", 1.0) * uK;
    e.require(c.temperature >= 0.0, "temperature_uK", "must be >= 0");
    diffraction = e.flag("cross_diffraction", true);
    e.reject_unknown();
  }

  const auto read_pair = [&](const char* key) {
    CrossedModePair p;
    double intensity_II = 0.0, detuning = 0.0;
    p.mode_I = detail::read_mode(r.child(key), key, c.geometry, intensity_II, detuning);
    p.mode_II = p.mode_I;
    p.mode_II.peak_intensity = intensity_II;
    if (p.mode_II.effective_area) p.mode_II.power = intensity_II * *p.mode_II.effective_area;
    p.relative_detuning = detuning;
    p.cross_width = c.geometry.rib_width;
    p.diffraction = diffraction;
    return p;
  };
  c.blue = read_pair("blue");
  c.red = read_pair("red");
  r.reject_unknown();

  if (!(c.blue.wavelength() < c.red.wavelength()))
    throw ConfigError("blue.wavelength_nm: must be shorter than red.wavelength_nm");
  try {
    dipole_coefficient(c.species, c.blue.wavelength());
    dipole_coefficient(c.species, c.red.wavelength());
    c.validate();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  c.hash = config_hash(c);
  return c;
}

inline TrapConfig parse_config(const std::string& text, const std::string& origin = "<config>",
                               const std::filesystem::path& base_dir = {}) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(origin + ": " + detail::line_column(text, e.byte == 0 ? 0 : e.byte - 1) +
                      ": malformed JSON (" + e.what() + ")");
  }
  try {
    return config_from_json(j, base_dir);
  } catch (const ConfigError& e) {
    throw ConfigError(origin + ": " + e.what());
  }
}

inline TrapConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  return parse_config(text, path.string(), path.parent_path());
}

inline std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  for (const auto& p : embedded::presets) names.emplace_back(p.name);
  return names;
}

inline std::string_view preset_text(const std::string& name) {
  for (const auto& p : embedded::presets)
    if (p.name == name) return p.text;
  throw ConfigError("unknown preset '" + name + "'");
}

inline TrapConfig preset(const std::string& name) {
  return parse_config(std::string(preset_text(name)), "preset " + name);
}

/// Recompute the hash after editing a loaded configuration.
inline void restamp(TrapConfig& c) {
  c.validate();
  c.hash = config_hash(c);
}

inline void set_fringe_model(TrapConfig& c, FringeModel model) {
  for (CrossedModePair* p : {&c.blue, &c.red}) {
    p->mode_I.fringe_model = model;
    p->mode_II.fringe_model = model;
  }
  restamp(c);
}

/// Multiply the surface intensities of both waveguides of each colour.
inline void scale_intensities(TrapConfig& c, double blue_scale, double red_scale) {
  const auto scale = [](CrossedModePair& p, double s) {
    for (ModeSpec* m : {&p.mode_I, &p.mode_II}) {
      m->peak_intensity *= s;
      if (m->power) m->power = *m->power * s;
    }
  };
  scale(c.blue, blue_scale);
  scale(c.red, red_scale);
  restamp(c);
}

}  // namespace cwewt
