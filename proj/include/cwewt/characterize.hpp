#pragma once

// Full pipeline for one configuration: minimum, frequencies, depths, diagonal
// fits, tunnelling and scattering. Report serialization, Table-2 layout and
// parameter sweeps.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cwewt/config.hpp"
#include "cwewt/constants.hpp"
#include "cwewt/errors.hpp"
#include "cwewt/grid_io.hpp"
#include "cwewt/potential.hpp"
#include "cwewt/scattering.hpp"
#include "cwewt/trap_analysis.hpp"
#include "cwewt/wkb.hpp"

namespace cwewt {

/// Analysis defaults adapted to the waveguide geometry of `config`.
inline AnalysisOptions analysis_options_for(const TrapConfig& config, AnalysisOptions opt = {}) {
  opt.lateral_half_extent = config.geometry.rib_width / 2.0;
  return opt;
}

/// Energy profile along a minima path, linear between the recorded columns.
inline std::function<double(double)> path_profile(const MinimaPath& path) {
  if (path.s.size() < 2) throw InvalidArgument("path_profile: path needs two or more columns");
  return [s = path.s, u = path.energy](double at) {
    if (at <= s.front()) return u.front();
    if (at >= s.back()) return u.back();
    const auto it = std::upper_bound(s.begin(), s.end(), at);
    const std::size_t i = static_cast<std::size_t>(it - s.begin()) - 1;
    const double w = (at - s[i]) / (s[i + 1] - s[i]);
    return (1.0 - w) * u[i] + w * u[i + 1];
  };
}

struct DirectionalTunnelling {
  double probability = 0.0;
  double rate = 0.0;  // 1/s
};

/// WKB escape along one minima path, starting at the trap centre.
inline DirectionalTunnelling path_tunnelling(const MinimaPath& path, double energy, double mass,
                                             double omega_bar) {
  const BarrierScan scan = make_barrier(path_profile(path), path.s.front(), path.s.back(), energy,
                                        mass, 8 * path.s.size() + 1);
  const TunnellingResult t = tunnelling_probability(scan);
  return {t.probability, tunnelling_rate(t.probability, omega_bar)};
}

inline TrapReport characterize(const TrapConfig& config, const AnalysisOptions& base = {}) {
  const AnalysisOptions opt = analysis_options_for(config, base);
  const TrapPotential potential(config);
  TrapReport r;
  r.name = config.name;
  r.config_hash = config.hash;
  r.temperature = config.temperature;

  const TrapMinimum minimum = find_minimum(potential, opt);
  r.min_position = minimum.position;
  r.min_energy = minimum.energy;
  r.frequencies = vibrational_frequencies(potential, potential.mass(), minimum.position, opt);
  r.aspect_ratio = r.frequencies[0] / r.frequencies[1];

  const TrapDepths depths = trap_depths(potential, minimum, opt);
  r.depth_x = depths.x;
  r.depth_yz = depths.yz;
  r.depth_l = depths.l;
  r.depth_t = depths.t;

  const double mass = potential.mass();
  const auto fit = [&](const MinimaPath& minus, const MinimaPath& plus, const char* axis) {
    return harmonic_fit(two_sided_path_grid(minus, plus, axis, opt.path_step), mass).omega;
  };
  r.avg_frequency_l = fit(depths.path_minus_l, depths.path_plus_l, "l");
  r.avg_frequency_t = fit(depths.path_minus_t, depths.path_plus_t, "t");

  const double energy = minimum.energy + boltzmann * config.temperature;
  const auto worst = [&](const MinimaPath& a, const MinimaPath& b, double omega) {
    const auto ta = path_tunnelling(a, energy, mass, omega);
    const auto tb = path_tunnelling(b, energy, mass, omega);
    return ta.rate >= tb.rate ? ta : tb;
  };
  const auto tl = worst(depths.path_minus_l, depths.path_plus_l, r.avg_frequency_l);
  const auto tt = worst(depths.path_minus_t, depths.path_plus_t, r.avg_frequency_t);
  r.tunnelling_probability_l = tl.probability;
  r.tunnelling_rate_l = tl.rate;
  r.tunnelling_probability_t = tt.probability;
  r.tunnelling_rate_t = tt.rate;

  const CoherenceReport c = scattering_at_minimum(potential, minimum.position);
  r.gamma_blue = c.gamma_blue;
  r.gamma_red = c.gamma_red;
  r.coherence_time = c.coherence_time;
  return r;
}

// ---------------------------------------------------------------------------
// Output

inline double to_kHz(double omega) { return omega / two_pi / 1e3; }

inline nlohmann::ordered_json report_to_json(const TrapReport& r) {
  using oj = nlohmann::ordered_json;
  const auto finite_or_null = [](double v) { return std::isfinite(v) ? oj(v) : oj(); };
  oj j;
  j["name"] = r.name;
  j["config_hash"] = r.config_hash;
  j["min_position_nm"] = {{"x", r.min_position[0] / nm}, {"y", r.min_position[1] / nm},
                          {"z", r.min_position[2] / nm}};
  j["min_energy_uK"] = to_microkelvin(r.min_energy);
  j["min_energy_J"] = r.min_energy;
  j["depths_uK"] = {{"x", to_microkelvin(r.depth_x)}, {"yz", to_microkelvin(r.depth_yz)},
                    {"l", to_microkelvin(r.depth_l)}, {"t", to_microkelvin(r.depth_t)}};
  j["frequencies_rad_per_s"] = {{"x", r.frequencies[0]}, {"y", r.frequencies[1]}, {"z", r.frequencies[2]}};
  j["frequencies_kHz"] = {{"x", to_kHz(r.frequencies[0])}, {"y", to_kHz(r.frequencies[1])},
                          {"z", to_kHz(r.frequencies[2])}};
  j["aspect_ratio"] = r.aspect_ratio;
  j["avg_frequencies_rad_per_s"] = {{"l", r.avg_frequency_l}, {"t", r.avg_frequency_t}};
  j["avg_frequencies_kHz"] = {{"l", to_kHz(r.avg_frequency_l)}, {"t", to_kHz(r.avg_frequency_t)}};
  j["temperature_uK"] = r.temperature / uK;
  j["tunnelling"] = {{"probability_l", r.tunnelling_probability_l},
                     {"probability_t", r.tunnelling_probability_t},
                     {"rate_l_per_s", r.tunnelling_rate_l},
                     {"rate_t_per_s", r.tunnelling_rate_t},
                     {"displayed_rate_l_per_s", displayed_tunnelling_rate(r.tunnelling_rate_l)},
                     {"displayed_rate_t_per_s", displayed_tunnelling_rate(r.tunnelling_rate_t)}};
  j["scattering"] = {{"gamma_blue_per_s", r.gamma_blue},
                     {"gamma_red_per_s", r.gamma_red},
                     {"coherence_time_s", finite_or_null(r.coherence_time)}};
  return j;
}

namespace detail {

inline std::string fmt(const char* spec, double v) {
  if (std::isinf(v)) return "inf";
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

inline std::string rate_text(double rate) {
  const double shown = displayed_tunnelling_rate(rate);
  return shown == 0.0 ? "0" : fmt("%.3g", shown);
}

}  // namespace detail

inline std::string report_to_text(const TrapReport& r) {
  using detail::fmt;
  const auto row = [](const std::string& label, const std::string& value) {
    std::string line = label;
    line.resize(std::max<std::size_t>(label.size() + 1, 28), ' ');
    return line + value + "\n";
  };
  std::string out = "trap " + r.name + " (config " + r.config_hash + ")\n";
  out += row("minimum x, y, z (nm)", fmt("%.1f", r.min_position[0] / nm) + ", " +
                                         fmt("%.1f", r.min_position[1] / nm) + ", " +
                                         fmt("%.1f", r.min_position[2] / nm));
  out += row("U_min/k_B (uK)", fmt("%.2f", to_microkelvin(r.min_energy)));
  out += row("dU_x/k_B (uK)", fmt("%.2f", to_microkelvin(r.depth_x)));
  out += row("dU_y,z/k_B (uK)", fmt("%.2f", to_microkelvin(r.depth_yz)));
  out += row("dU_l/k_B (uK)", fmt("%.2f", to_microkelvin(r.depth_l)));
  out += row("dU_t/k_B (uK)", fmt("%.2f", to_microkelvin(r.depth_t)));
  out += row("w_x/2pi (kHz)", fmt("%.1f", to_kHz(r.frequencies[0])));
  out += row("w_y/2pi, w_z/2pi (kHz)",
             fmt("%.2f", to_kHz(r.frequencies[1])) + ", " + fmt("%.2f", to_kHz(r.frequencies[2])));
  out += row("gamma_xy", fmt("%.1f", r.aspect_ratio));
  out += row("avg w_l/2pi, w_t/2pi (kHz)",
             fmt("%.2f", to_kHz(r.avg_frequency_l)) + ", " + fmt("%.2f", to_kHz(r.avg_frequency_t)));
  out += row("T (uK)", fmt("%.2f", r.temperature / uK));
  out += row("Gamma_l^tun (1/s)", detail::rate_text(r.tunnelling_rate_l) + "  (raw " +
                                      fmt("%.3g", r.tunnelling_rate_l) + ")");
  out += row("Gamma_t^tun (1/s)", detail::rate_text(r.tunnelling_rate_t) + "  (raw " +
                                      fmt("%.3g", r.tunnelling_rate_t) + ")");
  out += row("Gamma_b^scat (1/s)", fmt("%.3g", r.gamma_blue));
  out += row("Gamma_r^scat (1/s)", fmt("%.3g", r.gamma_red));
  out += row("tau_coh (s)", fmt("%.3g", r.coherence_time));
  return out;
}

struct Table2Column {
  TrapConfig config;
  TrapReport report;
};

/// Rows of the configuration table: the standard rows first, extras after.
inline std::vector<std::vector<std::string>> table2_rows(const std::vector<Table2Column>& cols) {
  using detail::fmt;
  std::vector<std::vector<std::string>> rows;
  const auto add = [&](const std::string& label, auto&& cell) {
    std::vector<std::string> row{label};
    for (const auto& c : cols) row.push_back(cell(c));
    rows.push_back(std::move(row));
  };
  add("Configuration", [](const Table2Column& c) { return c.config.name; });
  add("w_rib (um)", [](const Table2Column& c) { return fmt("%g", c.config.geometry.rib_width / um); });
  add("lambda_b; lambda_r (nm)", [](const Table2Column& c) {
    return fmt("%g", c.config.blue.wavelength() / nm) + "; " + fmt("%g", c.config.red.wavelength() / nm);
  });
  add("I_b; I_r (1e9 W/m^2)", [](const Table2Column& c) {
    return fmt("%.3g", c.config.blue.mode_I.peak_intensity / 1e9) + "; " +
           fmt("%.3g", c.config.red.mode_I.peak_intensity / 1e9);
  });
  add("dU_x/k_B (uK)", [](const Table2Column& c) { return fmt("%.1f", to_microkelvin(c.report.depth_x)); });
  add("dU_y,z/k_B (uK)", [](const Table2Column& c) { return fmt("%.1f", to_microkelvin(c.report.depth_yz)); });
  add("dU_l/k_B (uK)", [](const Table2Column& c) { return fmt("%.2f", to_microkelvin(c.report.depth_l)); });
  add("Gamma_b^scat (1/s)", [](const Table2Column& c) { return fmt("%.2f", c.report.gamma_blue); });
  add("Gamma_r^scat (1/s)", [](const Table2Column& c) { return fmt("%.2f", c.report.gamma_red); });
  add("Gamma_l^tun (1/s)", [](const Table2Column& c) { return detail::rate_text(c.report.tunnelling_rate_l); });
  add("dU_t/k_B (uK)", [](const Table2Column& c) { return fmt("%.2f", to_microkelvin(c.report.depth_t)); });
  add("Gamma_t^tun (1/s)", [](const Table2Column& c) { return detail::rate_text(c.report.tunnelling_rate_t); });
  add("x_min (nm)", [](const Table2Column& c) { return fmt("%.1f", c.report.min_position[0] / nm); });
  add("U_min/k_B (uK)", [](const Table2Column& c) { return fmt("%.1f", to_microkelvin(c.report.min_energy)); });
  add("w_x/2pi (kHz)", [](const Table2Column& c) { return fmt("%.1f", to_kHz(c.report.frequencies[0])); });
  add("w_y,z/2pi (kHz)", [](const Table2Column& c) { return fmt("%.2f", to_kHz(c.report.frequencies[1])); });
  add("gamma_xy", [](const Table2Column& c) { return fmt("%.1f", c.report.aspect_ratio); });
  add("T (uK)", [](const Table2Column& c) { return fmt("%g", c.config.temperature / uK); });
  add("tau_coh (s)", [](const Table2Column& c) { return fmt("%.2f", c.report.coherence_time); });
  return rows;
}

inline std::string table2_markdown(const std::vector<Table2Column>& cols) {
  const auto rows = table2_rows(cols);
  std::string out;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out += "|";
    for (const auto& cell : rows[i]) out += " " + cell + " |";
    out += "\n";
    if (i == 0) {
      out += "|";
      for (std::size_t k = 0; k < rows[i].size(); ++k) out += "---|";
      out += "\n";
    }
  }
  return out;
}

namespace detail {

inline std::string csv_cell(const std::string& cell) {
  if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
  std::string quoted = "\"";
  for (char ch : cell) {
    if (ch == '"') quoted += '"';
    quoted += ch;
  }
  return quoted + "\"";
}

}  // namespace detail

inline std::string table2_csv(const std::vector<Table2Column>& cols) {
  std::string out;
  for (const auto& row : table2_rows(cols)) {
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (k) out += ',';
      out += detail::csv_cell(row[k]);
    }
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------
// Sweeps

inline const std::vector<std::string>& sweep_parameters() {
  static const std::vector<std::string> names{"intensity_scale", "blue_intensity_scale",
                                              "red_intensity_scale", "rib_width_um", "temperature_uK"};
  return names;
}

/// Copy of `base` with one sweep parameter applied.
inline TrapConfig apply_sweep_parameter(const TrapConfig& base, const std::string& parameter, double value) {
  if (!std::isfinite(value)) throw InvalidArgument("sweep: non-finite value for " + parameter);
  TrapConfig c = base;
  if (parameter == "intensity_scale") {
    scale_intensities(c, value, value);
  } else if (parameter == "blue_intensity_scale") {
    scale_intensities(c, value, 1.0);
  } else if (parameter == "red_intensity_scale") {
    scale_intensities(c, 1.0, value);
  } else if (parameter == "rib_width_um") {
    c.geometry.rib_width = value * um;
    c.blue.cross_width = c.red.cross_width = c.geometry.rib_width;
    restamp(c);
  } else if (parameter == "temperature_uK") {
    c.temperature = value * uK;
    restamp(c);
  } else {
    throw InvalidArgument("sweep: unknown parameter '" + parameter + "'");
  }
  return c;
}

struct SweepRow {
  double value = 0.0;
  std::optional<TrapReport> report;
  std::string error;  // set when the point failed
};

inline std::vector<SweepRow> sweep(const TrapConfig& base, const std::string& parameter,
                                   const std::vector<double>& values, const AnalysisOptions& opt = {}) {
  if (std::find(sweep_parameters().begin(), sweep_parameters().end(), parameter) == sweep_parameters().end())
    throw InvalidArgument("sweep: unknown parameter '" + parameter + "'");
  std::vector<SweepRow> rows;
  for (double v : values) {
    SweepRow row{v, std::nullopt, {}};
    try {
      row.report = characterize(apply_sweep_parameter(base, parameter, v), opt);
    } catch (const NoTrap& e) {
      row.error = std::string("NoTrap: ") + e.what();
    } catch (const Error& e) {
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

inline std::string sweep_csv(const std::string& parameter, const std::vector<SweepRow>& rows) {
  using detail::format9;
  std::string out = parameter +
                    ",status,config_hash,x_min_nm,U_min_uK,dU_x_uK,dU_yz_uK,dU_l_uK,dU_t_uK,"
                    "f_x_kHz,f_y_kHz,f_z_kHz,gamma_xy,f_l_kHz,f_t_kHz,rate_l_per_s,rate_t_per_s,"
                    "gamma_blue_per_s,gamma_red_per_s,tau_coh_s,error\n";
  for (const auto& row : rows) {
    out += format9(row.value);
    if (!row.report) {
      out += ",failed";
      for (int k = 0; k < 19; ++k) out += ',';
      out += detail::csv_cell(row.error) + "\n";
      continue;
    }
    const TrapReport& r = *row.report;
    const double cells[] = {r.min_position[0] / nm,        to_microkelvin(r.min_energy),
                            to_microkelvin(r.depth_x),     to_microkelvin(r.depth_yz),
                            to_microkelvin(r.depth_l),     to_microkelvin(r.depth_t),
                            to_kHz(r.frequencies[0]),      to_kHz(r.frequencies[1]),
                            to_kHz(r.frequencies[2]),      r.aspect_ratio,
                            to_kHz(r.avg_frequency_l),     to_kHz(r.avg_frequency_t),
                            r.tunnelling_rate_l,           r.tunnelling_rate_t,
                            r.gamma_blue,                  r.gamma_red,
                            r.coherence_time};
    out += ",ok," + r.config_hash;
    for (double v : cells) out += "," + format9(v);
    out += ",\n";
  }
  return out;
}

}  // namespace cwewt
