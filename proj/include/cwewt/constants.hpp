#pragma once

#include <numbers>

namespace cwewt {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

// CODATA 2018
inline constexpr double speed_of_light = 299792458.0;       // m/s
inline constexpr double hbar = 1.054571817e-34;             // J s
inline constexpr double boltzmann = 1.380649e-23;           // J/K
inline constexpr double standard_gravity = 9.80665;         // m/s^2

inline constexpr double nm = 1e-9;
inline constexpr double um = 1e-6;
inline constexpr double uK = 1e-6;

/// Energy in joules expressed as a temperature in microkelvin.
constexpr double to_microkelvin(double energy_J) { return energy_J / boltzmann / uK; }
constexpr double from_microkelvin(double temperature_uK) { return temperature_uK * uK * boltzmann; }

}  // namespace cwewt
