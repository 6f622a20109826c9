// cwewt: characterize crossed-waveguide evanescent-wave traps, export potential
// grids and tabulate the bundled configurations.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cwewt/characterize.hpp"
#include "cwewt/config.hpp"
#include "cwewt/grid_io.hpp"
#include "cwewt/potential.hpp"
#include "cwewt/trap_analysis.hpp"

namespace fs = std::filesystem;
using namespace cwewt;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_failure = 1;
constexpr int exit_config = 2;
constexpr int exit_no_trap = 3;

struct Options {
  std::string config_path;
  std::string preset_name;
  std::string out_dir;
  std::size_t resolution = 101;
  std::string plane = "y0x";
  std::string fringe;
  std::string format;
  std::string axis;
  std::string path;
  double half_width_um = 3.0;
  double x_start_nm = 50.0;
  double x_stop_nm = 800.0;
  std::string parameter = "intensity_scale";
  std::string values;
};

TrapConfig load(const Options& o) {
  if (!o.config_path.empty() && !o.preset_name.empty())
    throw ConfigError("give either --config or --preset, not both");
  TrapConfig c;
  if (!o.config_path.empty())
    c = load_config(o.config_path);
  else if (!o.preset_name.empty())
    c = preset(o.preset_name);
  else
    throw ConfigError("no configuration: pass --config PATH or --preset NAME");
  if (!o.fringe.empty()) set_fringe_model(c, fringe_model_from_string(o.fringe));
  return c;
}

std::string format_or(const Options& o, const std::string& fallback) {
  return o.format.empty() ? fallback : o.format;
}

// Writes `text` to DIR/name when --out is given, else to stdout.
void emit(const Options& o, const std::string& name, const std::string& text) {
  if (o.out_dir.empty()) {
    std::cout << text;
    return;
  }
  fs::create_directories(o.out_dir);
  const fs::path p = fs::path(o.out_dir) / name;
  write_text(p, text);
  std::cerr << "wrote " << p.string() << "\n";
}

void write_grid(const Options& o, const std::string& stem, const PotentialGrid& g) {
  const std::string fmt = format_or(o, "csv");
  const fs::path dir = o.out_dir.empty() ? fs::path(".") : fs::path(o.out_dir);
  fs::create_directories(dir);
  const fs::path p = dir / (stem + "." + fmt);
  write_text(p, fmt == "json" ? grid_to_json_text(g) : grid_to_csv_text(g));
  std::cerr << "wrote " << p.string() << "\n";
}

int run_characterize(const Options& o) {
  const TrapConfig c = load(o);
  const TrapReport r = characterize(c);
  const std::string json_text = report_to_json(r).dump(2) + "\n";
  if (!o.out_dir.empty()) {
    fs::create_directories(o.out_dir);
    write_text(fs::path(o.out_dir) / (c.name + "_report.json"), json_text);
  }
  std::cout << (format_or(o, "text") == "json" ? json_text : report_to_text(r));
  return exit_ok;
}

int run_scan(const Options& o) {
  const TrapConfig c = load(o);
  if (o.resolution == 0) throw InvalidArgument("--resolution must be at least 1");
  const TrapPotential potential(c);
  const double half = o.half_width_um * um;
  const double x0 = o.x_start_nm * nm, x1 = o.x_stop_nm * nm;
  if (!(x0 > 0.0 && x1 > x0)) throw InvalidArgument("scan: need 0 < --x-start < --x-stop");

  const auto stamp = [&](PotentialGrid g) {
    g.config_hash = c.hash;
    return g;
  };

  if (!o.axis.empty() || !o.path.empty()) {
    const AnalysisOptions opt = analysis_options_for(c);
    const TrapMinimum m = find_minimum(potential, opt);
    if (!o.axis.empty()) {
      PotentialGrid g;
      if (o.axis == "x") {
        g = line_scan(potential, Vec3{x0, m.position[1], m.position[2]}, unit_direction("x"), x1 - x0,
                      o.resolution, "x");
        g.axes[0].start = x0;
        g.origin = {0.0, m.position[1], m.position[2]};
      } else {
        const Vec3 dir = unit_direction(o.axis);
        g = line_scan(potential, m.position + (-half) * dir, dir, 2.0 * half, o.resolution, o.axis);
        g.axes[0].start = -half;
        g.origin = m.position;
      }
      write_grid(o, c.name + "_" + o.axis + "-axis", stamp(std::move(g)));
    }
    if (!o.path.empty()) {
      if (o.path != "l" && o.path != "t" && o.path != "y" && o.path != "z")
        throw InvalidArgument("--path must be one of l, t, y, z");
      const Vec3 dir = unit_direction(o.path);
      const MinimaPath plus = minima_path(potential, m.position, dir, opt);
      const MinimaPath minus = minima_path(potential, m.position, -1.0 * dir, opt);
      PotentialGrid g = two_sided_path_grid(minus, plus, o.path, opt.path_step);
      g.origin = m.position;
      write_grid(o, c.name + "_" + o.path + "-minima", stamp(std::move(g)));
    }
    return exit_ok;
  }

  if (o.plane == "y0z") {
    MinimaMap map = minima_map(potential, half, half, o.resolution, analysis_options_for(c));
    write_grid(o, c.name + "_y0z", stamp(std::move(map.energy)));
    write_grid(o, c.name + "_y0z_height", stamp(std::move(map.height)));
    return exit_ok;
  }
  PotentialGrid g = grid_scan(potential, Vec3{0.0, 0.0, 0.0}, plane_axes(o.plane, half, x0, x1, o.resolution));
  write_grid(o, c.name + "_" + o.plane, stamp(std::move(g)));
  return exit_ok;
}

std::vector<double> parse_values(const std::string& text) {
  std::vector<double> v;
  // start:stop:count
  if (text.find(':') != std::string::npos) {
    double a = 0, b = 0;
    long n = 0;
    char tail = 0;
    if (std::sscanf(text.c_str(), "%lf:%lf:%ld%c", &a, &b, &n, &tail) != 3 || n < 1)
      throw ConfigError("--values: expected START:STOP:COUNT, got '" + text + "'");
    for (long i = 0; i < n; ++i) v.push_back(n == 1 ? a : a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
    return v;
  }
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError("--values: bad number '" + item + "'");
    }
  }
  if (v.empty()) throw ConfigError("--values: no values given");
  return v;
}

int run_sweep(const Options& o) {
  const TrapConfig c = load(o);
  const auto rows = sweep(c, o.parameter, parse_values(o.values));
  emit(o, c.name + "_sweep_" + o.parameter + ".csv", sweep_csv(o.parameter, rows));
  return exit_ok;
}

int run_table2(const Options& o) {
  std::vector<Table2Column> cols;
  std::vector<std::string> names;
  if (!o.config_path.empty() || !o.preset_name.empty()) {
    const TrapConfig c = load(o);
    cols.push_back({c, characterize(c)});
  } else {
    for (const auto& name : preset_names()) {
      TrapConfig c = preset(name);
      if (!o.fringe.empty()) set_fringe_model(c, fringe_model_from_string(o.fringe));
      cols.push_back({c, characterize(c)});
    }
  }
  const bool csv = format_or(o, "md") == "csv";
  emit(o, csv ? "table2.csv" : "table2.md", csv ? table2_csv(cols) : table2_markdown(cols));
  return exit_ok;
}

int run_presets(const Options& o) {
  if (!o.preset_name.empty()) {
    emit(o, o.preset_name + ".json", std::string(preset_text(o.preset_name)));
    return exit_ok;
  }
  if (!o.out_dir.empty()) {
    for (const auto& name : preset_names()) emit(o, name + ".json", std::string(preset_text(name)));
    return exit_ok;
  }
  for (const auto& name : preset_names()) {
    const TrapConfig c = preset(name);
    std::printf("%-4s w_rib %.0f um, %.0f/%.0f nm, I_b %.3g, I_r %.3g W/m^2, T %g uK  [%s]\n", name.c_str(),
                c.geometry.rib_width / um, c.blue.wavelength() / nm, c.red.wavelength() / nm,
                c.blue.mode_I.peak_intensity, c.red.mode_I.peak_intensity, c.temperature / uK,
                c.hash.c_str());
  }
  return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Crossed-waveguide evanescent-wave atom trap model"};
  app.require_subcommand(1, 1);
  Options o;

  const auto add_source = [&](CLI::App* cmd) {
    cmd->add_option("--config", o.config_path, "Trap configuration (JSON)")->check(CLI::ExistingFile);
    cmd->add_option("--preset", o.preset_name, "Bundled configuration (C1..C4)");
    cmd->add_option("--fringe", o.fringe, "Override the fringe model")
        ->check(CLI::IsMember({"none", "static", "smeared"}));
  };
  const auto add_out = [&](CLI::App* cmd) { cmd->add_option("--out", o.out_dir, "Output directory"); };

  auto* characterize_cmd = app.add_subcommand("characterize", "Full trap report");
  add_source(characterize_cmd);
  add_out(characterize_cmd);
  characterize_cmd->add_option("--format", o.format, "stdout format")->check(CLI::IsMember({"text", "json"}));

  auto* scan_cmd = app.add_subcommand("scan", "Export potential grids");
  add_source(scan_cmd);
  add_out(scan_cmd);
  scan_cmd->add_option("--resolution", o.resolution, "Samples per axis");
  scan_cmd->add_option("--plane", o.plane, "Plane through the trap centre")
      ->check(CLI::IsMember({"y0x", "z0x", "t0x", "l0x", "y0z"}));
  scan_cmd->add_option("--axis", o.axis, "1D scan through the minimum instead of a plane")
      ->check(CLI::IsMember({"x", "y", "z", "t", "l"}));
  scan_cmd->add_option("--path", o.path, "Column-minima path through the minimum")
      ->check(CLI::IsMember({"y", "z", "t", "l"}));
  scan_cmd->add_option("--format", o.format, "File format")->check(CLI::IsMember({"csv", "json"}));
  scan_cmd->add_option("--half-width", o.half_width_um, "Lateral half extent (um)");
  scan_cmd->add_option("--x-start", o.x_start_nm, "Lowest height (nm)");
  scan_cmd->add_option("--x-stop", o.x_stop_nm, "Highest height (nm)");

  auto* sweep_cmd = app.add_subcommand("sweep", "Characterize over a parameter range");
  add_source(sweep_cmd);
  add_out(sweep_cmd);
  sweep_cmd->add_option("--param", o.parameter, "Swept parameter")->check(CLI::IsMember(sweep_parameters()));
  sweep_cmd->add_option("--values", o.values, "Comma list or START:STOP:COUNT")->required();

  auto* table_cmd = app.add_subcommand("table2", "Tabulate the presets (or one config)");
  add_source(table_cmd);
  add_out(table_cmd);
  table_cmd->add_option("--format", o.format, "Table format")->check(CLI::IsMember({"md", "csv"}));

  auto* presets_cmd = app.add_subcommand("presets", "List or dump the bundled configurations");
  presets_cmd->add_option("--preset", o.preset_name, "Print one preset's JSON");
  add_out(presets_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_config;
  }

  try {
    if (*characterize_cmd) return run_characterize(o);
    if (*scan_cmd) return run_scan(o);
    if (*sweep_cmd) return run_sweep(o);
    if (*table_cmd) return run_table2(o);
    if (*presets_cmd) return run_presets(o);
  } catch (const NoTrap& e) {
    std::cerr << "error: no trap: " << e.what() << "\n";
    return exit_no_trap;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return exit_config;
  } catch (const InvalidArgument& e) {
    std::cerr << "invalid argument: " << e.what() << "\n";
    return exit_config;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_failure;
  }
  return exit_failure;
}
