#pragma once

// Analytic surface-intensity model of two crossed guided modes: Gaussian
// lateral profiles, Rayleigh-length spreading through the unguided cross
// region, and optional interference / reflection fringes.

#include <cmath>
#include <optional>
#include <string>

#include "cwewt/constants.hpp"
#include "cwewt/errors.hpp"

namespace cwewt {

enum class FringeModel { none, static_fringes, smeared };

inline std::string to_string(FringeModel m) {
  switch (m) {
    case FringeModel::none: return "none";
    case FringeModel::static_fringes: return "static";
    case FringeModel::smeared: return "smeared";
  }
  return "none";
}

inline FringeModel fringe_model_from_string(const std::string& s) {
  if (s == "none") return FringeModel::none;
  if (s == "static") return FringeModel::static_fringes;
  if (s == "smeared") return FringeModel::smeared;
  throw InvalidArgument("unknown fringe model '" + s + "' (expected none, static, smeared)");
}

/// Relative detuning above which moving interference fringes are averaged out by the atoms.
inline constexpr double fringe_smearing_detuning = 100e6;  // Hz

/// Relative amplitude of the interference fringes at the rim of the cross region.
inline constexpr double interference_edge_amplitude = 0.15;

struct ModeSpec {
  double wavelength = 0.0;     // m
  double lateral_width = 0.0;  // m, 1/e^2 intensity radius inside the rib
  double n_eff_rib = 0.0;
  double n_eff_cross = 0.0;
  double peak_intensity = 0.0;  // W/m^2 at the surface, single waveguide
  std::optional<double> power;           // W
  std::optional<double> effective_area;  // m^2
  FringeModel fringe_model = FringeModel::none;
  double reflection_amplitude = 0.02;

  void validate() const {
    if (!(wavelength > 0.0)) throw InvalidArgument("mode: wavelength must be > 0");
    if (!(lateral_width > 0.0)) throw InvalidArgument("mode: lateral width must be > 0");
    if (!(n_eff_cross > 1.0)) throw NoEvanescentWave("mode: n_eff_cross must exceed 1");
    if (!(peak_intensity >= 0.0)) throw InvalidArgument("mode: intensity must be >= 0");
    if (!(reflection_amplitude >= 0.0 && reflection_amplitude <= 1.0))
      throw InvalidArgument("mode: reflection amplitude must lie in [0, 1]");
    if (power && effective_area) {
      const double derived = peak_intensity * *effective_area;
      if (std::abs(derived - *power) > 1e-6 * std::max(std::abs(*power), 1e-30))
        throw InvalidArgument("mode: power != intensity * effective_area");
    }
  }
};

struct CrossedModePair {
  ModeSpec mode_I;   // waveguide along y
  ModeSpec mode_II;  // waveguide along z
  double relative_detuning = 0.0;  // Hz
  double cross_width = 2e-6;       // m, rib width = side of the square cross region
  bool diffraction = true;         // Rayleigh spreading inside the cross region

  double wavelength() const { return mode_I.wavelength; }

  void validate() const {
    mode_I.validate();
    mode_II.validate();
    if (mode_I.wavelength != mode_II.wavelength)
      throw InvalidArgument("crossed pair: both modes must share one wavelength");
    if (!(relative_detuning >= 0.0)) throw InvalidArgument("crossed pair: detuning must be >= 0");
    if (!(cross_width > 0.0)) throw InvalidArgument("crossed pair: cross width must be > 0");
  }
};

/// Fringe model seen by the atoms: static fringes driven by a large relative
/// detuning move too fast to be resolved and act as smeared.
inline FringeModel effective_fringe_model(const CrossedModePair& pair) {
  const FringeModel m = pair.mode_I.fringe_model;
  if (m == FringeModel::static_fringes && pair.relative_detuning >= fringe_smearing_detuning)
    return FringeModel::smeared;
  return m;
}

inline double rayleigh_length(const ModeSpec& mode) {
  return pi * mode.lateral_width * mode.lateral_width * mode.n_eff_cross / mode.wavelength;
}

/// 1/e depth of the evanescent field amplitude; intensity falls as exp(-2x/d).
inline double decay_length(const ModeSpec& mode) {
  if (!(mode.n_eff_cross > 1.0))
    throw NoEvanescentWave("decay_length: n_eff must exceed 1 for an evanescent wave");
  return mode.wavelength / (two_pi * std::sqrt(mode.n_eff_cross * mode.n_eff_cross - 1.0));
}

/// Mode radius at propagation coordinate `along` (waveguide axis, cross centred at 0).
/// The waist sits at the entry edge of the cross region.
inline double mode_width_at(const ModeSpec& mode, double along, double cross_width,
                            bool diffraction) {
  const double half = cross_width / 2.0;
  if (!diffraction || std::abs(along) > half) return mode.lateral_width;
  const double from_edge = (along + half) / rayleigh_length(mode);
  return mode.lateral_width * std::sqrt(1.0 + from_edge * from_edge);
}

inline double interference_period(const ModeSpec& mode) {
  return mode.wavelength / (std::numbers::sqrt2 * mode.n_eff_cross);
}

inline double reflection_period(const ModeSpec& mode) {
  return mode.wavelength / (2.0 * mode.n_eff_cross);
}

/// Multiplier along the transverse diagonal t = (y - z)/sqrt(2) inside the cross region.
inline double interference_fringe_factor(const CrossedModePair& pair, double t) {
  switch (effective_fringe_model(pair)) {
    case FringeModel::none:
      throw FringeModelDisabled("interference_fringe_factor: fringe model is 'none'");
    case FringeModel::smeared:
      return 1.0;
    case FringeModel::static_fringes:
      break;
  }
  const double rim = pair.cross_width * std::numbers::sqrt2 / 2.0;
  if (std::abs(t) > rim) return 1.0;
  const double amplitude = interference_edge_amplitude * std::abs(t) / rim;
  return 1.0 + amplitude * std::cos(two_pi * t / interference_period(pair.mode_I));
}

/// Standing-wave multiplier at distance s upstream of the cross (s >= 0 on the incident side).
inline double reflection_fringe_factor(const ModeSpec& mode, double s, double amplitude) {
  if (s < 0.0 || amplitude == 0.0) return 1.0;
  return 1.0 + amplitude * std::cos(two_pi * s / reflection_period(mode));
}

/// Surface intensity of one waveguide's mode; `lateral` is the coordinate
/// across the waveguide, `along` the propagation coordinate.
inline double single_mode_intensity(const ModeSpec& mode, double lateral, double along,
                                    double cross_width, bool diffraction,
                                    bool reflection_fringes) {
  if (mode.peak_intensity == 0.0) return 0.0;
  const double w = mode_width_at(mode, along, cross_width, diffraction);
  double intensity = mode.peak_intensity * std::exp(-2.0 * lateral * lateral / (w * w)) *
                     (mode.lateral_width / w);
  if (reflection_fringes)
    intensity *= reflection_fringe_factor(mode, -cross_width / 2.0 - along,
                                          mode.reflection_amplitude);
  return intensity;
}

namespace detail {

inline bool cross_fringes_active(const CrossedModePair& pair) {
  return effective_fringe_model(pair) == FringeModel::static_fringes;
}

inline bool reflection_active(const ModeSpec& mode) {
  return mode.fringe_model != FringeModel::none && mode.reflection_amplitude > 0.0;
}

}  // namespace detail

/// Intensity contributed by waveguide I (along y) at the surface point (y, z).
inline double surface_intensity_I(const CrossedModePair& pair, double y, double z) {
  return single_mode_intensity(pair.mode_I, z, y, pair.cross_width, pair.diffraction,
                               detail::reflection_active(pair.mode_I));
}

/// Intensity contributed by waveguide II (along z) at the surface point (y, z).
inline double surface_intensity_II(const CrossedModePair& pair, double y, double z) {
  return single_mode_intensity(pair.mode_II, y, z, pair.cross_width, pair.diffraction,
                               detail::reflection_active(pair.mode_II));
}

/// Interference multiplier applied to the summed intensity at (y, z).
inline double cross_fringe_multiplier(const CrossedModePair& pair, double y, double z) {
  const double half = pair.cross_width / 2.0;
  if (!detail::cross_fringes_active(pair) || std::abs(y) > half || std::abs(z) > half) return 1.0;
  return interference_fringe_factor(pair, (y - z) / std::numbers::sqrt2);
}

/// Total surface intensity (W/m^2) of the crossed pair at (y, z).
inline double surface_intensity(const CrossedModePair& pair, double y, double z) {
  return (surface_intensity_I(pair, y, z) + surface_intensity_II(pair, y, z)) *
         cross_fringe_multiplier(pair, y, z);
}

}  // namespace cwewt
