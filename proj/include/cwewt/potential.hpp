#pragma once

// Total trapping potential above the crossed waveguides: two-colour
// evanescent light shift, Casimir-Polder surface attraction and gravity.
// Sampling onto lines, planes and volumes.

#include <array>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <string>
#include <vector>

#include "cwewt/atomic_physics.hpp"
#include "cwewt/constants.hpp"
#include "cwewt/errors.hpp"
#include "cwewt/mode_model.hpp"
#include "cwewt/slab_solver.hpp"

namespace cwewt {

using Vec3 = std::array<double, 3>;  // (x, y, z); x is the height above the surface

inline Vec3 operator+(const Vec3& a, const Vec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
inline Vec3 operator*(double s, const Vec3& a) { return {s * a[0], s * a[1], s * a[2]}; }

/// Anything that maps (x, y, z) to an energy in joules.
template <class F>
concept PotentialField = requires(const F& f, double v) {
  { f(v, v, v) } -> std::convertible_to<double>;
};

struct TrapConfig {
  std::string name;
  SlabGeometry geometry;
  CrossedModePair blue;
  CrossedModePair red;
  AtomSpecies species;
  int gravity_sign = +1;          // +1 as printed (+mgx), -1 reversed, 0 off
  double temperature = 1e-6;      // K, atom temperature used for tunnelling estimates
  std::string hash;               // canonical-config hash, stamped by the loader

  void validate() const {
    geometry.validate();
    blue.validate();
    red.validate();
    species.validate();
    if (!(blue.wavelength() < red.wavelength()))
      throw InvalidArgument("config: blue wavelength must be shorter than red wavelength");
    if (blue.cross_width != geometry.rib_width || red.cross_width != geometry.rib_width)
      throw InvalidArgument("config: both pairs must share the waveguide geometry");
    if (gravity_sign < -1 || gravity_sign > 1)
      throw InvalidArgument("config: gravity_sign must be -1, 0 or +1");
    if (!(temperature >= 0.0)) throw InvalidArgument("config: temperature must be >= 0");
  }
};

/// Casimir-Polder interpolation between the x^-3 van der Waals and x^-4 retarded regimes.
inline double casimir_polder(const AtomSpecies& species, double x) {
  const double reduced = species.lambda_eff / two_pi;
  return -(species.c3 * reduced) / (x * x * x * (x + reduced));
}

inline double casimir_polder_dx(const AtomSpecies& species, double x) {
  const double reduced = species.lambda_eff / two_pi;
  const double s = x + reduced;
  return species.c3 * reduced * (4.0 * x + 3.0 * reduced) / (x * x * x * x * s * s);
}

/// Trap potential with the per-colour coefficients resolved once.
class TrapPotential {
 public:
  explicit TrapPotential(TrapConfig config) : config_(std::move(config)) {
    config_.validate();
    blue_ = resolve(config_.blue);
    red_ = resolve(config_.red);
  }

  const TrapConfig& config() const { return config_; }
  double mass() const { return config_.species.mass; }
  double alpha_blue() const { return blue_.alpha; }
  double alpha_red() const { return red_.alpha; }

  double operator()(double x, double y, double z) const {
    check_point(x);
    return optical(x, y, z) + surface(x) + gravity(x);
  }

  double optical(double x, double y, double z) const {
    return colour_shift(blue_, x, y, z) + colour_shift(red_, x, y, z);
  }
  double blue_shift(double x, double y, double z) const { return colour_shift(blue_, x, y, z); }
  double red_shift(double x, double y, double z) const { return colour_shift(red_, x, y, z); }
  double surface(double x) const { return casimir_polder(config_.species, x); }
  double gravity(double x) const {
    return config_.gravity_sign * config_.species.mass * standard_gravity * x;
  }

  /// Surface intensities with the evanescent decay to height x applied (W/m^2).
  double blue_intensity(double x, double y, double z) const { return intensity(blue_, x, y, z); }
  double red_intensity(double x, double y, double z) const { return intensity(red_, x, y, z); }

  /// Closed-form dU/dx.
  double d_dx(double x, double y, double z) const {
    check_point(x);
    return colour_shift_dx(blue_, x, y, z) + colour_shift_dx(red_, x, y, z) +
           casimir_polder_dx(config_.species, x) +
           config_.gravity_sign * config_.species.mass * standard_gravity;
  }

 private:
  struct Colour {
    CrossedModePair pair;
    double alpha = 0.0;
    double decay_I = 0.0;
    double decay_II = 0.0;
  };

  Colour resolve(const CrossedModePair& pair) const {
    return {pair, dipole_coefficient(config_.species, pair.wavelength()),
            decay_length(pair.mode_I), decay_length(pair.mode_II)};
  }

  static void check_point(double x) {
    if (!(x > 0.0)) throw NonPhysicalPoint("potential: x must be > 0 (vacuum side)");
  }

  static double intensity(const Colour& c, double x, double y, double z) {
    const CrossedModePair& p = c.pair;
    return (surface_intensity_I(p, y, z) * std::exp(-2.0 * x / c.decay_I) +
            surface_intensity_II(p, y, z) * std::exp(-2.0 * x / c.decay_II)) *
           cross_fringe_multiplier(p, y, z);
  }

  static double colour_shift(const Colour& c, double x, double y, double z) {
    return c.alpha * intensity(c, x, y, z);
  }

  static double colour_shift_dx(const Colour& c, double x, double y, double z) {
    const CrossedModePair& p = c.pair;
    return c.alpha * cross_fringe_multiplier(p, y, z) *
           (-2.0 / c.decay_I * surface_intensity_I(p, y, z) * std::exp(-2.0 * x / c.decay_I) -
            2.0 / c.decay_II * surface_intensity_II(p, y, z) * std::exp(-2.0 * x / c.decay_II));
  }

  TrapConfig config_;
  Colour blue_;
  Colour red_;
};

inline double potential_at(const TrapConfig& config, double x, double y, double z) {
  return TrapPotential(config)(x, y, z);
}

// ---------------------------------------------------------------------------
// Sampled grids

struct GridAxis {
  std::string name;
  double start = 0.0;  // m, offset along `direction` from the grid origin
  double step = 0.0;   // m
  std::size_t count = 0;
  Vec3 direction{1.0, 0.0, 0.0};

  double coordinate(std::size_t i) const { return start + static_cast<double>(i) * step; }
};

/// Values on a regular lattice spanned by `axes` around `origin`; row-major, last axis fastest.
/// quantity "energy" stores joules; "length" stores metres (minima-height maps).
/// Non-finite entries mark escaped columns in minima maps.
struct PotentialGrid {
  Vec3 origin{0.0, 0.0, 0.0};
  std::vector<GridAxis> axes;
  std::vector<double> values;
  std::string quantity = "energy";
  std::string config_hash;

  std::size_t size() const {
    std::size_t n = axes.empty() ? 0 : 1;
    for (const auto& a : axes) n *= a.count;
    return n;
  }

  std::vector<std::size_t> unravel(std::size_t flat) const {
    std::vector<std::size_t> idx(axes.size());
    for (std::size_t k = axes.size(); k-- > 0;) {
      idx[k] = flat % axes[k].count;
      flat /= axes[k].count;
    }
    return idx;
  }

  Vec3 point(std::size_t flat) const {
    const auto idx = unravel(flat);
    Vec3 p = origin;
    for (std::size_t k = 0; k < axes.size(); ++k)
      p = p + axes[k].coordinate(idx[k]) * axes[k].direction;
    return p;
  }

  void validate() const {
    if (axes.empty()) throw InvalidArgument("grid: no axes");
    for (const auto& a : axes)
      if (a.count == 0) throw InvalidArgument("grid: axis '" + a.name + "' has zero samples");
    if (values.size() != size()) throw InvalidArgument("grid: value count != product of axis counts");
  }
};

inline Vec3 unit_direction(const std::string& axis) {
  constexpr double r = 0.70710678118654752440;
  if (axis == "x") return {1.0, 0.0, 0.0};
  if (axis == "y") return {0.0, 1.0, 0.0};
  if (axis == "z") return {0.0, 0.0, 1.0};
  if (axis == "t") return {0.0, r, -r};  // t = (y - z)/sqrt(2)
  if (axis == "l") return {0.0, r, r};   // l = (y + z)/sqrt(2)
  throw InvalidArgument("unknown axis '" + axis + "' (expected x, y, z, t, l)");
}

/// Evaluate `field` on the lattice spanned by `axes` about `origin`.
template <PotentialField F>
PotentialGrid grid_scan(const F& field, const Vec3& origin, std::vector<GridAxis> axes) {
  PotentialGrid grid;
  grid.origin = origin;
  grid.axes = std::move(axes);
  if (grid.axes.empty()) throw InvalidArgument("grid_scan: no axes");
  for (const auto& a : grid.axes)
    if (a.count == 0) throw InvalidArgument("grid_scan: axis '" + a.name + "' has zero samples");
  const std::size_t n = grid.size();
  grid.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec3 p = grid.point(i);
    if (!(p[0] > 0.0))
      throw NonPhysicalPoint("grid_scan: sample at x = " + std::to_string(p[0]) + " m is not above the surface");
    grid.values[i] = field(p[0], p[1], p[2]);
  }
  return grid;
}

/// Uniform 1D scan from `start` along the unit vector `direction` over `length`.
template <PotentialField F>
PotentialGrid line_scan(const F& field, const Vec3& start, const Vec3& direction, double length,
                        std::size_t samples, const std::string& axis_name = "s") {
  if (samples == 0) throw InvalidArgument("line_scan: zero samples requested");
  const double norm = std::sqrt(direction[0] * direction[0] + direction[1] * direction[1] +
                                direction[2] * direction[2]);
  if (!(norm > 0.0)) throw InvalidArgument("line_scan: zero direction vector");
  const Vec3 dir = (1.0 / norm) * direction;
  const double step = samples > 1 ? length / static_cast<double>(samples - 1) : 0.0;
  return grid_scan(field, start, {GridAxis{axis_name, 0.0, step, samples, dir}});
}

/// Lattice for one of the named planes y0x, z0x, t0x, l0x: the lateral axis
/// spans [-lateral_half_extent, +lateral_half_extent], the x axis [x_start, x_stop].
inline std::vector<GridAxis> plane_axes(const std::string& plane, double lateral_half_extent,
                                        double x_start, double x_stop, std::size_t resolution) {
  if (resolution == 0) throw InvalidArgument("plane_axes: zero samples requested");
  if (plane.size() != 3 || plane.substr(1) != "0x")
    throw InvalidArgument("unknown plane '" + plane + "' (expected y0x, z0x, t0x, l0x)");
  const std::string lateral = plane.substr(0, 1);
  const auto step_of = [&](double span) {
    return resolution > 1 ? span / static_cast<double>(resolution - 1) : 0.0;
  };
  return {GridAxis{"x", x_start, step_of(x_stop - x_start), resolution, unit_direction("x")},
          GridAxis{lateral, -lateral_half_extent, step_of(2.0 * lateral_half_extent), resolution,
                   unit_direction(lateral)}};
}

}  // namespace cwewt
