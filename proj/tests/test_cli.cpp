#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "cwewt/config.hpp"
#include "cwewt/grid_io.hpp"

namespace fs = std::filesystem;
using namespace cwewt;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("cwewt_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

int run(const std::string& args, const fs::path& capture = {}) {
  std::string cmd = std::string(CWEWT_CLI_PATH) + " " + args;
  cmd += capture.empty() ? " > /dev/null 2>&1" : " > " + capture.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path write_config(const fs::path& dir, const nlohmann::json& j) {
  const fs::path p = dir / "config.json";
  std::ofstream(p) << j.dump(2);
  return p;
}

}  // namespace

TEST(Cli, CharacterizePresetSucceeds) {
  const fs::path dir = scratch("characterize");
  EXPECT_EQ(run("characterize --preset C2 --format json --out " + dir.string(), dir / "stdout.txt"), 0);
  const auto j = nlohmann::json::parse(read_text(dir / "C2_report.json"));
  EXPECT_EQ(j["config_hash"], preset("C2").hash);
}

TEST(Cli, ScanWritesPlaneFile) {
  const fs::path dir = scratch("scan");
  ASSERT_EQ(run("scan --preset C1 --plane z0x --resolution 11 --out " + dir.string()), 0);
  const PotentialGrid g = grid_from_csv_text(read_text(dir / "C1_z0x.csv"));
  EXPECT_EQ(g.values.size(), 121u);
  EXPECT_EQ(g.config_hash, preset("C1").hash);
  ASSERT_EQ(run("scan --preset C1 --plane y0z --resolution 9 --format json --out " + dir.string()), 0);
  EXPECT_TRUE(fs::exists(dir / "C1_y0z.json"));
  EXPECT_TRUE(fs::exists(dir / "C1_y0z_height.json"));
}

TEST(Cli, ConfigFileAndFringeOverride) {
  const fs::path dir = scratch("config");
  const fs::path cfg = write_config(dir, nlohmann::json::parse(preset_text("C3")));
  EXPECT_EQ(run("scan --config " + cfg.string() + " --fringe smeared --plane y0x --resolution 5 --out " +
                dir.string()),
            0);
  const PotentialGrid g = grid_from_csv_text(read_text(dir / "C3_y0x.csv"));
  EXPECT_NE(g.config_hash, preset("C3").hash);
}

TEST(Cli, ConfigErrorsExitTwo) {
  const fs::path dir = scratch("errors");
  EXPECT_EQ(run("characterize --config " + (dir / "absent.json").string()), 2);
  nlohmann::json j = nlohmann::json::parse(preset_text("C1"));
  j["geometry"]["rib_widht_um"] = 2;
  const fs::path cfg = write_config(dir, j);
  EXPECT_EQ(run("characterize --config " + cfg.string(), dir / "err.txt"), 2);
  EXPECT_NE(read_text(dir / "err.txt").find("geometry.rib_widht_um"), std::string::npos);
  std::ofstream(dir / "broken.json") << "{ \"name\": ";
  EXPECT_EQ(run("characterize --config " + (dir / "broken.json").string()), 2);
  EXPECT_EQ(run("scan --preset C1 --resolution 0 --out " + dir.string()), 2);
  EXPECT_EQ(run("scan --preset C1 --plane q0x"), 2);
  EXPECT_EQ(run("characterize --preset C7"), 2);
  EXPECT_EQ(run("frobnicate"), 2);
}

TEST(Cli, MissingTrapExitsThree) {
  const fs::path dir = scratch("notrap");
  nlohmann::json j = nlohmann::json::parse(preset_text("C2"));
  j["blue"]["intensity_W_per_m2"] = 0.0;
  EXPECT_EQ(run("characterize --config " + write_config(dir, j).string()), 3);
}

TEST(Cli, SweepAndTable) {
  const fs::path dir = scratch("sweep");
  ASSERT_EQ(run("sweep --preset C2 --param intensity_scale --values 0.9,1.1 --out " + dir.string()), 0);
  const std::string csv = read_text(dir / "C2_sweep_intensity_scale.csv");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);
  ASSERT_EQ(run("table2 --preset C4 --format csv --out " + dir.string()), 0);
  EXPECT_EQ(read_text(dir / "table2.csv").rfind("Configuration,C4\n", 0), 0u);
}

TEST(Cli, PresetsListing) {
  const fs::path dir = scratch("presets");
  ASSERT_EQ(run("presets", dir / "list.txt"), 0);
  const std::string listing = read_text(dir / "list.txt");
  for (const auto& n : preset_names()) {
    EXPECT_NE(listing.find(n), std::string::npos);
    EXPECT_NE(listing.find(preset(n).hash), std::string::npos);
  }
  ASSERT_EQ(run("presets --preset C4", dir / "c4.json"), 0);
  EXPECT_EQ(parse_config(read_text(dir / "c4.json")).hash, preset("C4").hash);
}
