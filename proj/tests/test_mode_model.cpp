#include <gtest/gtest.h>

#include <cmath>

#include "cwewt/mode_model.hpp"
#include "cwewt/slab_solver.hpp"

using namespace cwewt;

namespace {

ModeSpec mode(double lambda_nm, double w_um, double n, double intensity = 1e9) {
  ModeSpec m;
  m.wavelength = lambda_nm * nm;
  m.lateral_width = w_um * um;
  m.n_eff_cross = n;
  m.n_eff_rib = n;
  m.peak_intensity = intensity;
  return m;
}

CrossedModePair pair_of(const ModeSpec& m, double cross_um = 2.0) {
  CrossedModePair p;
  p.mode_I = p.mode_II = m;
  p.cross_width = cross_um * um;
  return p;
}

}  // namespace

TEST(RayleighLength, ReferenceBlueAndRedValues) {
  EXPECT_NEAR(rayleigh_length(mode(720, 1.646, 1.386)) / (16.2 * um), 1.0, 0.02);
  EXPECT_NEAR(rayleigh_length(mode(850, 2.03, 1.347)) / (20.5 * um), 1.0, 0.02);
}

TEST(RayleighLength, QuadraticInWidth) {
  const double base = rayleigh_length(mode(720, 1.646, 1.386));
  EXPECT_NEAR(rayleigh_length(mode(720, 3.292, 1.386)) / base, 4.0, 1e-12);
}

TEST(DecayLength, HandEvaluatedValues) {
  EXPECT_NEAR(decay_length(mode(850, 2, 1.347)) / nm, 149.9, 0.1);
  EXPECT_NEAR(decay_length(mode(720, 2, 1.386)) / nm, 119.4, 0.1);
}

TEST(DecayLength, DivergesAtCriticalAngleAndRejectsNoWave) {
  EXPECT_GT(decay_length(mode(850, 2, 1.0 + 1e-9)), 1e-3);
  ModeSpec m = mode(850, 2, 1.0);
  EXPECT_THROW(decay_length(m), NoEvanescentWave);
  m.n_eff_cross = 0.9;
  EXPECT_THROW(decay_length(m), NoEvanescentWave);
}

TEST(DecayLength, RedLightPenetratesFurtherWithSolvedIndices) {
  const SlabGeometry g;
  for (auto [blue, red] : {std::pair{640.0, 930.0}, {720.0, 850.0}, {640.0, 850.0}}) {
    const double db = decay_length(mode(blue, 2, slab_neff(g, blue * nm)));
    const double dr = decay_length(mode(red, 2, slab_neff(g, red * nm)));
    EXPECT_GT(dr, db);
  }
}

TEST(FringePeriods, InterferenceAndReflection) {
  EXPECT_NEAR(interference_period(mode(720, 1.646, 1.386)) / (371 * nm), 1.0, 0.02);
  EXPECT_NEAR(interference_period(mode(720, 1.646, 1.386)) / nm, 367.3, 0.1);
  EXPECT_NEAR(reflection_period(mode(850, 2.03, 1.265)) / (336 * nm), 1.0, 0.01);
  EXPECT_NEAR(reflection_period(mode(850, 2.03, 1.265)) / nm, 335.97, 0.01);
  const double n720 = slab_neff(SlabGeometry{}, 720 * nm);
  EXPECT_DOUBLE_EQ(reflection_period(mode(720, 1.6, n720)), 720 * nm / (2.0 * n720));
}

TEST(InterferenceFringes, CentreRimAndOutside) {
  ModeSpec m = mode(720, 1.646, 1.386);
  m.fringe_model = FringeModel::static_fringes;
  const CrossedModePair p = pair_of(m);
  EXPECT_DOUBLE_EQ(interference_fringe_factor(p, 0.0), 1.0);
  const double rim = p.cross_width * std::sqrt(2.0) / 2.0;
  const double d = interference_period(m);
  // at t = k d the cosine is 1 and the factor is 1 + a(t)
  const double t = std::floor(rim / d) * d;
  EXPECT_NEAR(interference_fringe_factor(p, t), 1.0 + 0.15 * t / rim, 1e-12);
  EXPECT_DOUBLE_EQ(interference_fringe_factor(p, rim * 1.01), 1.0);
  for (double s = -rim; s <= rim; s += rim / 37) {
    EXPECT_GE(interference_fringe_factor(p, s), 0.85 - 1e-12);
    EXPECT_LE(interference_fringe_factor(p, s), 1.15 + 1e-12);
  }
}

TEST(InterferenceFringes, SmearedNoneAndFastDetuning) {
  ModeSpec m = mode(720, 1.646, 1.386);
  m.fringe_model = FringeModel::smeared;
  EXPECT_DOUBLE_EQ(interference_fringe_factor(pair_of(m), 0.3 * um), 1.0);
  m.fringe_model = FringeModel::none;
  EXPECT_THROW(interference_fringe_factor(pair_of(m), 0.3 * um), FringeModelDisabled);
  m.fringe_model = FringeModel::static_fringes;
  CrossedModePair fast = pair_of(m);
  fast.relative_detuning = 100e6;
  EXPECT_EQ(effective_fringe_model(fast), FringeModel::smeared);
  EXPECT_DOUBLE_EQ(interference_fringe_factor(fast, 0.37 * um), 1.0);
  fast.relative_detuning = 99e6;
  EXPECT_EQ(effective_fringe_model(fast), FringeModel::static_fringes);
}

TEST(ReflectionFringes, IncidentSideOnly) {
  const ModeSpec m = mode(850, 2.03, 1.265);
  EXPECT_DOUBLE_EQ(reflection_fringe_factor(m, 1.234 * um, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(reflection_fringe_factor(m, -0.5 * um, 0.02), 1.0);
  EXPECT_DOUBLE_EQ(reflection_fringe_factor(m, 0.0, 0.02), 1.02);
  EXPECT_NEAR(reflection_fringe_factor(m, reflection_period(m) / 2, 0.02), 0.98, 1e-12);
}

TEST(SurfaceIntensity, CentreIsSumOfPeaksWithoutDiffraction) {
  CrossedModePair p = pair_of(mode(640, 1.43, 1.31, 1.65e10));
  p.mode_II.peak_intensity = 0.7e10;
  p.diffraction = false;
  EXPECT_DOUBLE_EQ(surface_intensity(p, 0, 0), 1.65e10 + 0.7e10);
}

TEST(SurfaceIntensity, CentreWithDiffractionMatchesClosedForm) {
  const CrossedModePair p = pair_of(mode(640, 1.43, 1.31, 1.65e10));
  const double zr = M_PI * 1.43e-6 * 1.43e-6 * 1.31 / 640e-9;
  const double shrink = 1.0 / std::sqrt(1.0 + std::pow(1e-6 / zr, 2));
  EXPECT_NEAR(surface_intensity(p, 0, 0) / (2 * 1.65e10 * shrink), 1.0, 1e-12);
  EXPECT_NEAR(surface_intensity(p, 0, 0) / (2 * 1.65e10), 1.0, 0.005);
}

TEST(SurfaceIntensity, DegeneratePairIsASingleWaveguide) {
  CrossedModePair p = pair_of(mode(640, 1.43, 1.31, 1e10));
  p.mode_II.peak_intensity = 0;
  for (double z : {0.0, 0.4e-6, 1.1e-6}) {
    const double far = surface_intensity(p, -8e-6, z);
    EXPECT_DOUBLE_EQ(surface_intensity(p, -5e-6, z), far);
    EXPECT_DOUBLE_EQ(surface_intensity(p, 9e-6, z), far);
    EXPECT_NEAR(far, 1e10 * std::exp(-2 * z * z / (1.43e-6 * 1.43e-6)), 1e-3);
  }
}

TEST(SurfaceIntensity, FarAlongGuideEqualsItsPeakPlusWing) {
  const CrossedModePair p = pair_of(mode(640, 1.43, 1.31, 1.65e10));
  const double wing = 1.65e10 * std::exp(-2.0 * 100.0 / (1.43 * 1.43));
  EXPECT_NEAR(surface_intensity(p, 10e-6, 0) / (1.65e10 + wing), 1.0, 0.10);
}

TEST(SurfaceIntensity, SymmetricUnderSwapForIdenticalModes) {
  for (auto fm : {FringeModel::none, FringeModel::static_fringes}) {
    ModeSpec m = mode(720, 1.646, 1.386, 2e9);
    m.fringe_model = fm;
    const CrossedModePair p = pair_of(m);
    for (double y = -2.5e-6; y <= 2.5e-6; y += 0.37e-6)
      for (double z = -2.5e-6; z <= 2.5e-6; z += 0.41e-6)
        EXPECT_EQ(surface_intensity(p, y, z), surface_intensity(p, z, y)) << y << " " << z;
  }
}

TEST(SurfaceIntensity, NonNegativeWithFringes) {
  ModeSpec m = mode(720, 1.646, 1.386, 2e9);
  m.fringe_model = FringeModel::static_fringes;
  m.reflection_amplitude = 1.0;
  const CrossedModePair p = pair_of(m);
  for (double y = -4e-6; y <= 4e-6; y += 0.13e-6)
    for (double z = -4e-6; z <= 4e-6; z += 0.17e-6) EXPECT_GE(surface_intensity(p, y, z), 0.0);
}

TEST(SurfaceIntensity, LateralIntegralConservedThroughCross) {
  const ModeSpec m = mode(640, 1.43, 1.31, 1e10);
  const auto lateral_integral = [&](double along) {
    double sum = 0;
    const double h = 1e-9;
    for (double z = -12e-6; z <= 12e-6; z += h) sum += single_mode_intensity(m, z, along, 2e-6, true, false) * h;
    return sum;
  };
  const double analytic = 1e10 * 1.43e-6 * std::sqrt(M_PI / 2.0);
  EXPECT_NEAR(lateral_integral(-3e-6) / analytic, 1.0, 0.01);
  EXPECT_NEAR(lateral_integral(0.0) / analytic, 1.0, 0.01);
  EXPECT_NEAR(lateral_integral(0.9e-6) / lateral_integral(-3e-6), 1.0, 1e-6);
}

TEST(ModeSpec, ValidationCatchesInconsistentPower) {
  ModeSpec m = mode(640, 1.43, 1.31, 1.65e10);
  m.power = 25.7e-3;
  m.effective_area = 25.7e-3 / 1.65e10;
  EXPECT_NO_THROW(m.validate());
  m.effective_area = 2.0 * 25.7e-3 / 1.65e10;
  EXPECT_THROW(m.validate(), InvalidArgument);
  EXPECT_THROW(fringe_model_from_string("moving"), InvalidArgument);
  EXPECT_EQ(fringe_model_from_string(to_string(FringeModel::smeared)), FringeModel::smeared);
}
