#pragma once

// Photon scattering at the trap minimum and the resulting coherence time.

#include <limits>

#include "cwewt/atomic_physics.hpp"
#include "cwewt/errors.hpp"
#include "cwewt/potential.hpp"

namespace cwewt {

struct CoherenceReport {
  double gamma_blue = 0.0;  // 1/s
  double gamma_red = 0.0;   // 1/s
  double coherence_time = std::numeric_limits<double>::infinity();  // s

  bool unbounded() const { return coherence_time == std::numeric_limits<double>::infinity(); }
};

/// Coherence time as the inverse total spontaneous scattering rate.
inline CoherenceReport coherence_from_rates(double gamma_blue, double gamma_red) {
  if (!(gamma_blue >= 0.0 && gamma_red >= 0.0))
    throw InvalidArgument("coherence_from_rates: rates must be >= 0");
  CoherenceReport r{gamma_blue, gamma_red, std::numeric_limits<double>::infinity()};
  const double total = gamma_blue + gamma_red;
  if (total > 0.0) r.coherence_time = 1.0 / total;
  return r;
}

inline CoherenceReport scattering_at_minimum(const TrapPotential& potential, const Vec3& position) {
  const auto& cfg = potential.config();
  const double gb = scattering_coefficient(cfg.species, cfg.blue.wavelength()) *
                    potential.blue_intensity(position[0], position[1], position[2]);
  const double gr = scattering_coefficient(cfg.species, cfg.red.wavelength()) *
                    potential.red_intensity(position[0], position[1], position[2]);
  return coherence_from_rates(gb, gr);
}

}  // namespace cwewt
