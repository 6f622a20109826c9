#pragma once

// Multi-line scalar polarizability and photon scattering of an alkali atom
// in a far-detuned light field.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "cwewt/constants.hpp"
#include "cwewt/errors.hpp"

namespace cwewt {

struct AtomicLine {
  std::string label;
  double wavelength = 0.0;         // m
  double natural_linewidth = 0.0;  // rad/s (partial decay rate to the ground state)
  double branching_weight = 1.0;   // share of the line strength, (2J'+1)/(3(2J+1)) for alkalis
  std::string family;              // lines of one upper-state multiplet share a family tag

  double angular_frequency() const { return two_pi * speed_of_light / wavelength; }
};

struct AtomSpecies {
  std::string name;
  double mass = 0.0;        // kg
  std::vector<AtomicLine> lines;
  double c3 = 0.0;          // J m^3, surface van der Waals coefficient
  double lambda_eff = 0.0;  // m, reduced transition wavelength of the Casimir-Polder crossover
  double guard_band = 0.01e-9;  // m; closer than this to a line is treated as resonant

  void validate() const {
    if (!(mass > 0.0)) throw InvalidArgument("species " + name + ": mass must be > 0");
    if (!(c3 > 0.0)) throw InvalidArgument("species " + name + ": c3 must be > 0");
    if (!(lambda_eff > 0.0)) throw InvalidArgument("species " + name + ": lambda_eff must be > 0");
    if (lines.size() < 2) throw InvalidArgument("species " + name + ": at least two lines required");
    std::map<std::string, double> family_weight;
    for (const auto& line : lines) {
      if (!(line.wavelength > 0.0) || !(line.natural_linewidth > 0.0))
        throw InvalidArgument("species " + name + ", line " + line.label +
                              ": wavelength and linewidth must be > 0");
      if (!(line.branching_weight > 0.0 && line.branching_weight <= 1.0))
        throw InvalidArgument("species " + name + ", line " + line.label +
                              ": weight must lie in (0, 1]");
      family_weight[line.family.empty() ? line.label : line.family] += line.branching_weight;
    }
    for (const auto& [family, weight] : family_weight)
      if (weight > 1.0 + 1e-9)
        throw InvalidArgument("species " + name + ": weights of family " + family + " exceed 1");
  }
};

namespace detail {

inline void check_detuning(const AtomSpecies& species, double wavelength) {
  if (!(wavelength > 0.0)) throw InvalidArgument("wavelength must be > 0");
  for (const auto& line : species.lines)
    if (std::abs(wavelength - line.wavelength) < species.guard_band)
      throw ZeroDetuning("wavelength " + std::to_string(wavelength / nm) + " nm is within " +
                         std::to_string(species.guard_band / nm) + " nm of line " + line.label);
}

}  // namespace detail

/// Light-shift coefficient alpha such that U = alpha * I (J m^2 / W).
/// Positive (repulsive) for blue detuning, negative for red detuning.
inline double dipole_coefficient(const AtomSpecies& species, double wavelength) {
  detail::check_detuning(species, wavelength);
  const double omega = two_pi * speed_of_light / wavelength;
  double alpha = 0.0;
  for (const auto& line : species.lines) {
    const double omega_i = line.angular_frequency();
    const double strength = 3.0 * pi * speed_of_light * speed_of_light * line.natural_linewidth *
                            line.branching_weight / (2.0 * omega_i * omega_i * omega_i);
    alpha += strength * (1.0 / (omega - omega_i) - 1.0 / (omega + omega_i));
  }
  return alpha;
}

/// Scattering coefficient beta such that Gamma_scat = beta * I (s^-1 per W/m^2).
/// Rotating-wave term only.
inline double scattering_coefficient(const AtomSpecies& species, double wavelength) {
  detail::check_detuning(species, wavelength);
  const double omega = two_pi * speed_of_light / wavelength;
  double beta = 0.0;
  for (const auto& line : species.lines) {
    const double omega_i = line.angular_frequency();
    const double gamma = line.natural_linewidth;
    const double detuning = omega - omega_i;
    beta += 3.0 * pi * speed_of_light * speed_of_light * gamma * gamma * line.branching_weight /
            (2.0 * hbar * omega_i * omega_i * omega_i) / (detuning * detuning);
  }
  return beta;
}

// Species data file: {name, mass_kg, c3_J_m3, lambda_eff_nm,
//   lines: [{label, wavelength_nm, linewidth_2pi_MHz, weight, family}]}

inline AtomSpecies species_from_json(const nlohmann::json& j) {
  AtomSpecies s;
  try {
    s.name = j.value("name", std::string{"unnamed"});
    s.mass = j.at("mass_kg").get<double>();
    s.c3 = j.at("c3_J_m3").get<double>();
    s.lambda_eff = j.at("lambda_eff_nm").get<double>() * nm;
    if (j.contains("guard_band_nm")) s.guard_band = j.at("guard_band_nm").get<double>() * nm;
    for (const auto& jl : j.at("lines")) {
      AtomicLine line;
      line.label = jl.value("label", std::string{});
      line.wavelength = jl.at("wavelength_nm").get<double>() * nm;
      line.natural_linewidth = two_pi * 1e6 * jl.at("linewidth_2pi_MHz").get<double>();
      line.branching_weight = jl.at("weight").get<double>();
      line.family = jl.value("family", std::string{});
      s.lines.push_back(std::move(line));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("species data: ") + e.what());
  }
  s.validate();
  return s;
}

inline nlohmann::json species_to_json(const AtomSpecies& s) {
  nlohmann::json lines = nlohmann::json::array();
  for (const auto& line : s.lines)
    lines.push_back({{"label", line.label},
                     {"wavelength_nm", line.wavelength / nm},
                     {"linewidth_2pi_MHz", line.natural_linewidth / (two_pi * 1e6)},
                     {"weight", line.branching_weight},
                     {"family", line.family}});
  return {{"name", s.name},
          {"mass_kg", s.mass},
          {"c3_J_m3", s.c3},
          {"lambda_eff_nm", s.lambda_eff / nm},
          {"guard_band_nm", s.guard_band / nm},
          {"lines", lines}};
}

inline AtomSpecies load_species(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open species file " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return species_from_json(j);
}

}  // namespace cwewt
