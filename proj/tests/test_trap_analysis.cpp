#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>

#include "cwewt/characterize.hpp"
#include "cwewt/config.hpp"
#include "cwewt/trap_analysis.hpp"

using namespace cwewt;

namespace {

constexpr double rb_mass = 1.443160648e-25;

AnalysisOptions options_for(const TrapConfig& c) { return analysis_options_for(c); }

struct Bowl {
  double k;
  Vec3 centre;
  double operator()(double x, double y, double z) const {
    const double dx = x - centre[0], dy = y - centre[1], dz = z - centre[2];
    return 0.5 * k * (dx * dx + dy * dy + dz * dz) - 1e-27;
  }
};

PotentialGrid sampled(const std::function<double(double)>& f, double from, double to, std::size_t n) {
  PotentialGrid g;
  const double step = (to - from) / static_cast<double>(n - 1);
  g.axes = {GridAxis{"s", from, step, n, unit_direction("l")}};
  for (std::size_t i = 0; i < n; ++i) g.values.push_back(f(from + static_cast<double>(i) * step));
  return g;
}

TrapConfig single_waveguide(const std::string& name) {
  TrapConfig c = preset(name);
  c.blue.mode_II.peak_intensity = 0;
  c.red.mode_II.peak_intensity = 0;
  c.blue.mode_II.power.reset();
  c.red.mode_II.power.reset();
  restamp(c);
  return c;
}

}  // namespace

TEST(FindMinimum, QuadraticBowlIsExact) {
  const Bowl bowl{1e-14, {233.3e-9, 41e-9, -17e-9}};
  const TrapMinimum m = find_minimum(bowl);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(m.position[i], bowl.centre[i], 0.01e-9);
  const Vec3 w = vibrational_frequencies(bowl, rb_mass, m.position);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(w[i] / std::sqrt(bowl.k / rb_mass), 1.0, 1e-6);
}

TEST(FindMinimum, ReferencePositionsAndDepth) {
  const TrapConfig c1 = preset("C1");
  const TrapMinimum m1 = find_minimum(TrapPotential(c1), options_for(c1));
  EXPECT_NEAR(m1.position[0], 208e-9, 60e-9);
  EXPECT_NEAR(to_microkelvin(m1.energy) / -90.7, 1.0, 0.25);
  const TrapConfig c2 = preset("C2");
  EXPECT_NEAR(find_minimum(TrapPotential(c2), options_for(c2)).position[0], 239e-9, 60e-9);
}

TEST(FindMinimum, NoTrapWithoutBlueOrRedLight) {
  TrapConfig no_blue = preset("C1");
  scale_intensities(no_blue, 0.0, 1.0);
  EXPECT_THROW(find_minimum(TrapPotential(no_blue), options_for(no_blue)), NoTrap);
  TrapConfig no_red = preset("C1");
  scale_intensities(no_red, 1.0, 0.0);
  EXPECT_THROW(find_minimum(TrapPotential(no_red), options_for(no_red)), NoTrap);
}

TEST(FindMinimum, NotAboveBruteForceGrid) {
  const TrapConfig c = preset("C1");
  const TrapPotential u(c);
  const TrapMinimum m = find_minimum(u, options_for(c));
  double lowest = INFINITY;
  for (double x = 150e-9; x <= 400e-9; x += 2.5e-9)
    for (double y = -0.5e-6; y <= 0.5e-6; y += 12.5e-9)
      for (double z = -0.5e-6; z <= 0.5e-6; z += 12.5e-9) lowest = std::min(lowest, u(x, y, z));
  EXPECT_LE(m.energy, lowest);
  EXPECT_TRUE(is_strict_local_minimum(u, m.position, options_for(c)));
}

TEST(FindMinimum, StableUnderCoarseGridRefinement) {
  for (const char* name : {"C1", "C4"}) {
    const TrapConfig c = preset(name);
    AnalysisOptions fine = options_for(c);
    fine.x_step /= 2;
    fine.lateral_step /= 2;
    const Vec3 a = find_minimum(TrapPotential(c), options_for(c)).position;
    const Vec3 b = find_minimum(TrapPotential(c), fine).position;
    for (int i = 0; i < 3; ++i) EXPECT_NEAR(a[i], b[i], 0.1e-9) << name << " axis " << i;
  }
}

TEST(FindMinimum, MirrorTwinsResolveToTheSameWell) {
  // two identical wells at y = -/+ 300 nm tie on the coarse lattice
  const auto twins = [](double x, double y, double z) {
    const double dy = std::abs(y) - 300e-9;
    return 1e-14 * ((x - 250e-9) * (x - 250e-9) + dy * dy + z * z) - 1e-27;
  };
  const TrapMinimum a = find_minimum(twins);
  const TrapMinimum b = find_minimum(twins);
  EXPECT_EQ(a.position, b.position);
  EXPECT_NEAR(std::abs(a.position[1]), 300e-9, 0.01e-9);
  EXPECT_LT(a.position[1], 0.0);
}

TEST(VibrationalFrequencies, SaddleIsNotAMinimum) {
  const auto saddle = [](double x, double y, double z) { return 1e-14 * (x * x - y * y + z * z); };
  EXPECT_THROW(vibrational_frequencies(saddle, rb_mass, Vec3{1e-7, 0, 0}), NotAMinimum);
}

TEST(VibrationalFrequencies, ReferenceValues) {
  const TrapConfig c1 = preset("C1"), c3 = preset("C3");
  const TrapPotential u1(c1), u3(c3);
  const Vec3 w1 = vibrational_frequencies(u1, rb_mass, find_minimum(u1, options_for(c1)).position);
  EXPECT_NEAR(to_kHz(w1[0]) / 192.0, 1.0, 0.25);
  EXPECT_NEAR(to_kHz(w1[1]) / 6.2, 1.0, 0.35);
  EXPECT_NEAR(w1[1], w1[2], 1e-6 * w1[1]);
  const Vec3 w3 = vibrational_frequencies(u3, rb_mass, find_minimum(u3, options_for(c3)).position);
  EXPECT_NEAR(to_kHz(w3[0]) / 93.9, 1.0, 0.25);
}

TEST(TrapDepths, HalfDepthAlongTheWaveguides) {
  const TrapConfig c = preset("C1");
  const TrapPotential u(c);
  const TrapDepths d = trap_depths(u, find_minimum(u, options_for(c)), options_for(c));
  EXPECT_NEAR(d.x / d.yz, 2.0, 0.2);
  EXPECT_NEAR(to_microkelvin(d.x) / 90.7, 1.0, 0.25);
  EXPECT_NEAR(to_microkelvin(d.yz) / 45.4, 1.0, 0.25);
}

TEST(TrapDepths, OrderingHoldsForEveryPreset) {
  for (const auto& name : preset_names()) {
    const TrapConfig c = preset(name);
    const TrapPotential u(c);
    const TrapDepths d = trap_depths(u, find_minimum(u, options_for(c)), options_for(c));
    EXPECT_GT(d.x, d.yz) << name;
    EXPECT_GT(d.yz, d.l) << name;
    EXPECT_GT(d.l, 0.0) << name;
    EXPECT_GT(d.t, 0.0) << name;
  }
}

TEST(TrapDepths, LongitudinalDiagonalOfC4) {
  const TrapConfig c = preset("C4");
  const TrapPotential u(c);
  const TrapDepths d = trap_depths(u, find_minimum(u, options_for(c)), options_for(c));
  EXPECT_NEAR(to_microkelvin(d.l) / 2.5, 1.0, 0.5);
}

TEST(TrapDepths, CrossingDoublesCentreDepthButNotChannelBarrier) {
  for (const char* name : {"C1", "C2"}) {
    const TrapConfig crossed = preset(name);
    const TrapPotential uc(crossed), us(single_waveguide(name));
    const AnalysisOptions opt = options_for(crossed);
    // depth of the lone waveguide far from the cross region
    const auto channel = column_minimum(us, -6e-6, 0.0, opt);
    ASSERT_TRUE(channel);
    const double channel_depth = -channel->energy;
    const TrapMinimum m = find_minimum(uc, opt);
    const TrapDepths d = trap_depths(uc, m, opt);
    EXPECT_NEAR(d.x / (2 * channel_depth), 1.0, 0.10) << name;
    EXPECT_NEAR(d.yz / channel_depth, 1.0, 0.10) << name;
    // far along a guide the second waveguide contributes nothing
    EXPECT_NEAR(column_minimum(uc, -6e-6, 0.0, opt)->energy / channel->energy, 1.0, 1e-6) << name;
  }
}

TEST(MinimaMap, CentreColumnAgreesWithFindMinimum) {
  const TrapConfig c = preset("C1");
  const TrapPotential u(c);
  const AnalysisOptions opt = options_for(c);
  const TrapMinimum m = find_minimum(u, opt);
  const auto col = column_minimum(u, m.position[1], m.position[2], opt);
  ASSERT_TRUE(col);
  EXPECT_NEAR(col->x, m.position[0], 0.05e-9);
  EXPECT_NEAR(col->energy, m.energy, 1e-9 * std::abs(m.energy));
  const MinimaMap map = minima_map(u, 0.0, 0.0, 1, opt);
  EXPECT_NEAR(map.energy.values[0], column_minimum(u, 0, 0, opt)->energy, 1e-30);
}

TEST(MinimaMap, SymmetricUnderTransposeAndEscapesOnDiagonals) {
  const TrapConfig c = preset("C1");
  const TrapPotential u(c);
  const std::size_t n = 25;
  const MinimaMap map = minima_map(u, 3e-6, 3e-6, n, options_for(c));
  EXPECT_EQ(map.height.quantity, "length");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const double a = map.energy.values[i * n + j], b = map.energy.values[j * n + i];
      if (std::isnan(a)) {
        EXPECT_TRUE(std::isnan(b));
      } else {
        EXPECT_NEAR(a, b, 1e-9 * std::abs(a));
      }
    }
  // corners (far along both diagonals) have lost their minimum; the guides have not
  EXPECT_TRUE(std::isnan(map.energy.values[0]));
  EXPECT_TRUE(std::isnan(map.energy.values[n * n - 1]));
  EXPECT_TRUE(std::isnan(map.energy.values[n - 1]));
  EXPECT_FALSE(std::isnan(map.energy.values[(n / 2) * n]));
  EXPECT_FALSE(std::isnan(map.energy.values[(n / 2) * n + n / 2]));
  EXPECT_THROW(minima_map(u, 1e-6, 1e-6, 0), InvalidArgument);
}

TEST(MinimaPath, DiagonalPathEscapesBeyondCriticalRadius) {
  const TrapConfig c = preset("C1");
  const TrapPotential u(c);
  const AnalysisOptions opt = options_for(c);
  const TrapMinimum m = find_minimum(u, opt);
  const MinimaPath l = minima_path(u, m.position, unit_direction("l"), opt);
  ASSERT_TRUE(l.escape);
  EXPECT_GT(*l.escape, 0.5e-6);
  EXPECT_LT(*l.escape, 5e-6);
  EXPECT_GT(l.barrier_top(), m.energy);
  const MinimaPath y = minima_path(u, m.position, unit_direction("y"), opt);
  EXPECT_FALSE(y.escape);
}

TEST(HarmonicFit, ExactParabola) {
  const double w = 2 * M_PI * 3.1e3;
  const auto parabola = [&](double s) { return -2e-29 + 0.5 * rb_mass * w * w * (s - 0.123e-6) * (s - 0.123e-6); };
  const HarmonicFit f = harmonic_fit(sampled(parabola, -1e-6, 1e-6, 201), rb_mass);
  EXPECT_NEAR(f.omega / w, 1.0, 1e-9);
  EXPECT_NEAR(f.centre, 0.123e-6, 1e-15);
  EXPECT_NEAR(f.energy / -2e-29, 1.0, 1e-9);
}

TEST(HarmonicFit, QuarticWellMatchesDirectLeastSquares) {
  const double c = 3e-5;
  const auto quartic = [&](double s) { return c * s * s * s * s; };
  const PotentialGrid g = sampled(quartic, -1e-6, 1e-6, 101);
  const HarmonicFit f = harmonic_fit(g, rb_mass);
  // all samples lie under the (equal) end barriers, so the window is the whole scan
  Eigen::MatrixXd a(101, 3);
  Eigen::VectorXd b(101);
  for (int i = 0; i < 101; ++i) {
    const double d = g.axes[0].coordinate(static_cast<std::size_t>(i)) - g.axes[0].coordinate(50);
    a(i, 0) = 1;
    a(i, 1) = d;
    a(i, 2) = d * d;
    b(i) = g.values[static_cast<std::size_t>(i)];
  }
  const Eigen::Vector3d coef = a.colPivHouseholderQr().solve(b);
  EXPECT_NEAR(f.omega / std::sqrt(2 * coef(2) / rb_mass), 1.0, 1e-8);
  EXPECT_EQ(f.samples, 101u);
}

TEST(HarmonicFit, FailsWithoutAnInteriorWell) {
  EXPECT_THROW(harmonic_fit(sampled([](double s) { return s * 1e-20; }, -1e-6, 1e-6, 51), rb_mass), FitFailed);
  EXPECT_THROW(harmonic_fit(sampled([](double s) { return -s * s; }, -1e-6, 1e-6, 51), rb_mass), FitFailed);
  // a needle: only the minimum itself lies below the chosen level
  const auto needle = [](double s) { return std::abs(s) < 1e-9 ? -1.0 : 0.0; };
  EXPECT_THROW(harmonic_fit(sampled(needle, -1e-6, 1e-6, 51), rb_mass), FitFailed);
}

TEST(HarmonicFit, DiagonalFrequencyComparableToLateral) {
  const TrapReport r = characterize(preset("C1"));
  EXPECT_GT(r.avg_frequency_l, 0.5 * r.frequencies[1]);
  EXPECT_LT(r.avg_frequency_l, 2.0 * r.frequencies[1]);
  EXPECT_GT(r.avg_frequency_t, 0.5 * r.frequencies[1]);
  EXPECT_LT(r.avg_frequency_t, 2.0 * r.frequencies[1]);
}

TEST(AspectRatio, WithinThirtyPercentOfReference) {
  const std::pair<const char*, double> reference[] = {{"C1", 30.8}, {"C2", 31.3}, {"C3", 39.1}, {"C4", 22.7}};
  for (const auto& [name, gamma] : reference) {
    const TrapReport r = characterize(preset(name));
    EXPECT_NEAR(r.aspect_ratio / gamma, 1.0, 0.30) << name;
    EXPECT_DOUBLE_EQ(r.aspect_ratio, r.frequencies[0] / r.frequencies[1]);
  }
}
