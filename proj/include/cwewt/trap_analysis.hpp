#pragma once

// Trap characterization: global minimum, harmonic frequencies, per-column
// minima along x, escape-channel barriers and harmonic fits to 1D profiles.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/tools/minima.hpp>

#include "cwewt/constants.hpp"
#include "cwewt/errors.hpp"
#include "cwewt/potential.hpp"

namespace cwewt {

/// Numerical recipe knobs. Lengths in metres.
struct AnalysisOptions {
  // coarse global search
  double x_start = 50e-9;
  double x_stop = 600e-9;
  double x_step = 10e-9;
  double lateral_step = 100e-9;
  double lateral_half_extent = 1e-6;  // cross region half width
  double position_tolerance = 0.01e-9;

  // finite differences for the Hessian diagonal
  double fd_step_x = 1e-9;
  double fd_step_lateral = 20e-9;

  // per-column minimization along x
  double column_x_start = 50e-9;
  double column_x_stop = 800e-9;
  double column_x_step = 2e-9;

  // escape paths
  double path_step = 10e-9;
  double path_max_length = 15e-6;
  double escape_tolerance = 0.1e-9;

  // optical terms below this fraction of |U_min| count as "vanished" for the x depth
  double vanishing_fraction = 0.01;
};

struct TrapMinimum {
  Vec3 position{0.0, 0.0, 0.0};
  double energy = 0.0;  // J
};

struct ColumnMinimum {
  double x = 0.0;
  double energy = 0.0;
};

namespace detail {

// Brent on [lo, hi], run on the unit interval: Boost's stopping rule carries an
// absolute floor that would swamp metre-scale brackets.
template <class F1>
std::pair<double, double> brent(const F1& f, double lo, double hi) {
  std::uintmax_t iterations = 200;
  const double span = hi - lo;
  const auto [t, u] = boost::math::tools::brent_find_minima(
      [&](double t) { return f(lo + t * span); }, 0.0, 1.0, std::numeric_limits<double>::digits / 2,
      iterations);
  return {lo + t * span, u};
}

inline double second_difference(double minus, double centre, double plus, double h) {
  return (plus - 2.0 * centre + minus) / (h * h);
}

}  // namespace detail

/// Second derivative of `field` along `axis` at `p` by central differences with
/// one Richardson extrapolation step.
template <PotentialField F>
double curvature(const F& field, const Vec3& p, int axis, double h) {
  const auto along = [&](double offset) {
    Vec3 q = p;
    q[axis] += offset;
    return field(q[0], q[1], q[2]);
  };
  const double centre = along(0.0);
  const double coarse = detail::second_difference(along(-h), centre, along(h), h);
  const double fine = detail::second_difference(along(-h / 2), centre, along(h / 2), h / 2);
  return (4.0 * fine - coarse) / 3.0;
}

/// True if every axis shows a positive second difference at `p`.
template <PotentialField F>
bool is_strict_local_minimum(const F& field, const Vec3& p, const AnalysisOptions& opt) {
  const double steps[3] = {opt.fd_step_x, opt.fd_step_lateral, opt.fd_step_lateral};
  const double centre = field(p[0], p[1], p[2]);
  for (int axis = 0; axis < 3; ++axis) {
    Vec3 lo = p, hi = p;
    lo[axis] -= steps[axis];
    hi[axis] += steps[axis];
    if (lo[0] <= 0.0) return false;
    const double a = field(lo[0], lo[1], lo[2]);
    const double b = field(hi[0], hi[1], hi[2]);
    if (!(a > centre && b > centre)) return false;
  }
  return true;
}

/// Global minimum: coarse lattice over the cross region, then coordinate-descent
/// Brent refinement. Throws NoTrap when no interior bound minimum exists.
template <PotentialField F>
TrapMinimum find_minimum(const F& field, const AnalysisOptions& opt = {}) {
  const auto count_of = [](double span, double step) {
    return static_cast<std::size_t>(std::llround(span / step)) + 1;
  };
  const std::size_t nx = count_of(opt.x_stop - opt.x_start, opt.x_step);
  const std::size_t nl = count_of(2.0 * opt.lateral_half_extent, opt.lateral_step);
  if (nx < 3) throw InvalidArgument("find_minimum: x window needs at least three samples");

  // coarse stage: lowest interior local minimum along x over all columns; the
  // surface-attraction region at the bottom of the window never qualifies
  // lateral coordinates are exact mirrors of each other so symmetric wells tie exactly
  const auto lateral = [&](std::size_t i) {
    return 0.5 * (2.0 * static_cast<double>(i) - static_cast<double>(nl - 1)) * opt.lateral_step;
  };
  Vec3 best{};
  double best_u = std::numeric_limits<double>::infinity();
  std::vector<double> column(nx);
  for (std::size_t iy = 0; iy < nl; ++iy) {
    const double y = lateral(iy);
    for (std::size_t iz = 0; iz < nl; ++iz) {
      const double z = lateral(iz);
      for (std::size_t ix = 0; ix < nx; ++ix)
        column[ix] = field(opt.x_start + static_cast<double>(ix) * opt.x_step, y, z);
      for (std::size_t ix = 1; ix + 1 < nx; ++ix) {
        const double u = column[ix];
        if (!(u < column[ix - 1] && u <= column[ix + 1])) continue;
        const double x = opt.x_start + static_cast<double>(ix) * opt.x_step;
        // ties: smallest x, then smallest |y| + |z|, then the first in scan order (lowest y, then z)
        const bool better =
            u < best_u || (u == best_u && (x < best[0] || (x == best[0] &&
                                                           std::abs(y) + std::abs(z) <
                                                               std::abs(best[1]) + std::abs(best[2]))));
        if (better) {
          best_u = u;
          best = {x, y, z};
        }
      }
    }
  }
  if (!std::isfinite(best_u))
    throw NoTrap("find_minimum: no interior minimum along x (atoms reach the surface or are unbound)");

  Vec3 p = best;
  double u = best_u;
  const double spans[3] = {opt.x_step, opt.lateral_step, opt.lateral_step};
  for (int sweep = 0; sweep < 200; ++sweep) {
    double moved = 0.0;
    for (int axis = 0; axis < 3; ++axis) {
      const auto along = [&](double c) {
        Vec3 q = p;
        q[axis] = c;
        return field(q[0], q[1], q[2]);
      };
      double lo = p[axis] - spans[axis];
      const double hi = p[axis] + spans[axis];
      if (axis == 0) lo = std::max(lo, 0.5 * p[0]);
      const auto [c, uc] = detail::brent(along, lo, hi);
      if (uc <= u) {
        moved = std::max(moved, std::abs(c - p[axis]));
        p[axis] = c;
        u = uc;
      }
    }
    if (moved < 0.1 * opt.position_tolerance) break;
  }
  if (!(u < 0.0)) throw NoTrap("find_minimum: minimum energy is not below the free-atom level");
  if (!is_strict_local_minimum(field, p, opt))
    throw NoTrap("find_minimum: refined point is not a strict local minimum");
  return {p, u};
}

/// Angular vibrational frequencies (rad/s) along x, y, z from the Hessian diagonal.
template <PotentialField F>
Vec3 vibrational_frequencies(const F& field, double mass, const Vec3& position,
                             const AnalysisOptions& opt = {}) {
  const double steps[3] = {opt.fd_step_x, opt.fd_step_lateral, opt.fd_step_lateral};
  Vec3 omega{};
  for (int axis = 0; axis < 3; ++axis) {
    const double k = curvature(field, position, axis, steps[axis]);
    if (!(k > 0.0))
      throw NotAMinimum("vibrational_frequencies: non-positive curvature along axis " +
                        std::to_string(axis));
    omega[axis] = std::sqrt(k / mass);
  }
  return omega;
}

/// Lowest interior local minimum along x of the column above (y, z), or nothing if the
/// column has none (the atom is pulled onto the surface).
template <PotentialField F>
std::optional<ColumnMinimum> column_minimum(const F& field, double y, double z,
                                            const AnalysisOptions& opt = {}) {
  const std::size_t n = static_cast<std::size_t>(std::llround(
                            (opt.column_x_stop - opt.column_x_start) / opt.column_x_step)) + 1;
  std::vector<double> u(n);
  for (std::size_t i = 0; i < n; ++i)
    u[i] = field(opt.column_x_start + static_cast<double>(i) * opt.column_x_step, y, z);
  std::optional<std::size_t> pick;
  for (std::size_t i = 1; i + 1 < n; ++i)
    if (u[i] < u[i - 1] && u[i] <= u[i + 1] && (!pick || u[i] < u[*pick])) pick = i;
  if (!pick) return std::nullopt;
  const double lo = opt.column_x_start + static_cast<double>(*pick - 1) * opt.column_x_step;
  const double hi = lo + 2.0 * opt.column_x_step;
  const auto [x, e] = detail::brent([&](double xx) { return field(xx, y, z); }, lo, hi);
  return ColumnMinimum{x, e};
}

/// Per-column minima along x over a (y, z) window: energies and heights.
/// Escaped columns hold NaN.
struct MinimaMap {
  PotentialGrid energy;  // J
  PotentialGrid height;  // m
};

template <PotentialField F>
MinimaMap minima_map(const F& field, double y_half_extent, double z_half_extent,
                     std::size_t resolution, const AnalysisOptions& opt = {}) {
  if (resolution == 0) throw InvalidArgument("minima_map: zero samples requested");
  const auto step_of = [&](double half) {
    return resolution > 1 ? 2.0 * half / static_cast<double>(resolution - 1) : 0.0;
  };
  std::vector<GridAxis> axes{
      GridAxis{"y", -y_half_extent, step_of(y_half_extent), resolution, unit_direction("y")},
      GridAxis{"z", -z_half_extent, step_of(z_half_extent), resolution, unit_direction("z")}};
  MinimaMap map;
  map.energy.axes = axes;
  map.height.axes = axes;
  map.height.quantity = "length";
  const std::size_t n = resolution * resolution;
  map.energy.values.resize(n);
  map.height.values.resize(n);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  // columns are independent; written by flat index so the result is order-free
  for (std::size_t i = 0; i < n; ++i) {
    const Vec3 p = map.energy.point(i);
    const auto col = column_minimum(field, p[1], p[2], opt);
    map.energy.values[i] = col ? col->energy : nan;
    map.height.values[i] = col ? col->x : nan;
  }
  return map;
}

/// Column minima followed outward from the trap centre along a lateral direction.
struct MinimaPath {
  Vec3 direction{0.0, 1.0, 0.0};
  std::vector<double> s;       // m, distance from the centre along `direction`
  std::vector<double> energy;  // J, column minimum
  std::vector<double> height;  // m, x of the column minimum
  std::optional<double> escape;  // distance where the column minimum merges with the surface well

  double barrier_top() const { return *std::max_element(energy.begin(), energy.end()); }
};

template <PotentialField F>
MinimaPath minima_path(const F& field, const Vec3& centre, const Vec3& direction,
                       const AnalysisOptions& opt = {}) {
  MinimaPath path;
  path.direction = direction;
  const auto column_at = [&](double s) {
    return column_minimum(field, centre[1] + s * direction[1], centre[2] + s * direction[2], opt);
  };
  const std::size_t steps = static_cast<std::size_t>(std::llround(opt.path_max_length / opt.path_step));
  for (std::size_t k = 0; k <= steps; ++k) {
    const double s = static_cast<double>(k) * opt.path_step;
    const auto col = column_at(s);
    if (!col) {
      if (k == 0) throw NoTrap("minima_path: no column minimum at the trap centre");
      double lo = path.s.back(), hi = s;
      ColumnMinimum last{path.height.back(), path.energy.back()};
      while (hi - lo > opt.escape_tolerance) {
        const double mid = 0.5 * (lo + hi);
        if (const auto c = column_at(mid)) {
          lo = mid;
          last = *c;
        } else {
          hi = mid;
        }
      }
      if (lo > path.s.back()) {
        path.s.push_back(lo);
        path.energy.push_back(last.energy);
        path.height.push_back(last.x);
      }
      path.escape = lo;
      return path;
    }
    path.s.push_back(s);
    path.energy.push_back(col->energy);
    path.height.push_back(col->x);
  }
  return path;
}

/// Minima path on both sides of the centre as a uniform 1D energy grid in s,
/// running from the far end of -direction to the far end of +direction.
inline PotentialGrid two_sided_path_grid(const MinimaPath& minus, const MinimaPath& plus,
                                         const std::string& axis_name, double step) {
  const auto uniform_count = [&](const MinimaPath& p) {
    std::size_t n = 0;
    while (n < p.s.size() && std::abs(p.s[n] - static_cast<double>(n) * step) < 1e-6 * step) ++n;
    return n;
  };
  const std::size_t nm_ = uniform_count(minus), np_ = uniform_count(plus);
  if (nm_ == 0 || np_ == 0) throw InvalidArgument("two_sided_path_grid: empty path");
  PotentialGrid g;
  g.axes = {GridAxis{axis_name, -static_cast<double>(nm_ - 1) * step, step, nm_ + np_ - 1,
                     plus.direction}};
  for (std::size_t k = nm_; k-- > 1;) g.values.push_back(minus.energy[k]);
  for (std::size_t k = 0; k < np_; ++k) g.values.push_back(plus.energy[k]);
  return g;
}

struct HarmonicFit {
  double omega = 0.0;   // rad/s
  double centre = 0.0;  // m, s0
  double energy = 0.0;  // J, U0
  std::size_t samples = 0;
};

/// Least-squares fit of U = U0 + m w^2 (s - s0)^2 / 2 to a 1D scan, over the window
/// between the classical turning points at `fit_energy` (default: the lower of the
/// two barrier tops either side of the minimum).
inline HarmonicFit harmonic_fit(const PotentialGrid& scan, double mass,
                                std::optional<double> fit_energy = std::nullopt) {
  if (scan.axes.size() != 1) throw InvalidArgument("harmonic_fit: scan must be one-dimensional");
  scan.validate();
  const auto& u = scan.values;
  const std::size_t n = u.size();
  std::size_t imin = 0;
  for (std::size_t i = 1; i < n; ++i)
    if (u[i] < u[imin]) imin = i;
  if (imin == 0 || imin + 1 == n) throw FitFailed("harmonic_fit: minimum lies on the scan boundary");
  const double left_top = *std::max_element(u.begin(), u.begin() + static_cast<std::ptrdiff_t>(imin));
  const double right_top = *std::max_element(u.begin() + static_cast<std::ptrdiff_t>(imin) + 1, u.end());
  const double level = fit_energy.value_or(std::min(left_top, right_top));

  std::size_t lo = imin, hi = imin;
  while (lo > 0 && u[lo - 1] <= level) --lo;
  while (hi + 1 < n && u[hi + 1] <= level) ++hi;
  if (hi - lo + 1 < 3) throw FitFailed("harmonic_fit: fewer than three samples inside the window");
  const auto below = std::count_if(u.begin() + static_cast<std::ptrdiff_t>(lo),
                                   u.begin() + static_cast<std::ptrdiff_t>(hi) + 1,
                                   [level](double v) { return v < level; });
  if (below < 3) throw FitFailed("harmonic_fit: fewer than three samples below the fit level");

  // normal equations for a + b d + c d^2, d = s - s_min
  const auto& axis = scan.axes[0];
  const double s_ref = axis.coordinate(imin);
  double m[3][4] = {};
  for (std::size_t i = lo; i <= hi; ++i) {
    const double d = axis.coordinate(i) - s_ref;
    const double basis[3] = {1.0, d, d * d};
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) m[r][c] += basis[r] * basis[c];
      m[r][3] += basis[r] * u[i];
    }
  }
  for (int col = 0; col < 3; ++col) {
    int piv = col;
    for (int r = col + 1; r < 3; ++r)
      if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
    std::swap(m[col], m[piv]);
    if (m[col][col] == 0.0) throw FitFailed("harmonic_fit: singular normal equations");
    for (int r = 0; r < 3; ++r) {
      if (r == col) continue;
      const double f = m[r][col] / m[col][col];
      for (int c = col; c < 4; ++c) m[r][c] -= f * m[col][c];
    }
  }
  const double a = m[0][3] / m[0][0], b = m[1][3] / m[1][1], c = m[2][3] / m[2][2];
  if (!(c > 0.0)) throw FitFailed("harmonic_fit: non-positive curvature");
  const double shift = -b / (2.0 * c);
  return {std::sqrt(2.0 * c / mass), s_ref + shift, a - b * b / (4.0 * c), hi - lo + 1};
}

/// Characterization of one trap configuration.
struct TrapReport {
  std::string name;
  std::string config_hash;
  Vec3 min_position{};
  double min_energy = 0.0;     // J
  double depth_x = 0.0;        // J
  double depth_yz = 0.0;       // J
  double depth_l = 0.0;        // J
  double depth_t = 0.0;        // J
  Vec3 frequencies{};          // rad/s along x, y, z
  double aspect_ratio = 0.0;   // omega_x / omega_y
  double avg_frequency_l = 0.0;  // rad/s
  double avg_frequency_t = 0.0;  // rad/s
  double temperature = 0.0;      // K
  double tunnelling_probability_l = 0.0;
  double tunnelling_probability_t = 0.0;
  double tunnelling_rate_l = 0.0;  // 1/s
  double tunnelling_rate_t = 0.0;  // 1/s
  double gamma_blue = 0.0;         // 1/s
  double gamma_red = 0.0;          // 1/s
  double coherence_time = 0.0;     // s; infinity when nothing scatters
};

struct TrapDepths {
  double x = 0.0;
  double yz = 0.0;
  double l = 0.0;
  double t = 0.0;
  MinimaPath path_plus_l, path_minus_l, path_plus_t, path_minus_t;
};

/// Barrier heights (J) from the minimum: vertically to free space, along the two
/// waveguide channels, and along the two diagonals.
inline TrapDepths trap_depths(const TrapPotential& potential, const TrapMinimum& minimum,
                              const AnalysisOptions& opt = {}) {
  const Vec3& p = minimum.position;
  const double u_min = minimum.energy;
  TrapDepths d;

  // vertical: walk out until the light shift is negligible; gravity is not a barrier
  const auto no_gravity = [&](double x) { return potential.optical(x, p[1], p[2]) + potential.surface(x); };
  double x = p[0];
  double top = no_gravity(x);
  const double step = opt.fd_step_x;
  for (int i = 0; i < 1000000; ++i) {
    x += step;
    top = std::max(top, no_gravity(x));
    if (std::abs(potential.optical(x, p[1], p[2])) < opt.vanishing_fraction * std::abs(u_min)) break;
  }
  d.x = top - u_min;

  const auto barrier = [&](const Vec3& dir) { return minima_path(potential, p, dir, opt); };
  double yz = std::numeric_limits<double>::infinity();
  for (const char* axis : {"y", "z"}) {
    const Vec3 dir = unit_direction(axis);
    yz = std::min(yz, barrier(dir).barrier_top() - u_min);
    yz = std::min(yz, barrier(-1.0 * dir).barrier_top() - u_min);
  }
  d.yz = yz;
  d.path_plus_l = barrier(unit_direction("l"));
  d.path_minus_l = barrier(-1.0 * unit_direction("l"));
  d.path_plus_t = barrier(unit_direction("t"));
  d.path_minus_t = barrier(-1.0 * unit_direction("t"));
  d.l = std::min(d.path_plus_l.barrier_top(), d.path_minus_l.barrier_top()) - u_min;
  d.t = std::min(d.path_plus_t.barrier_top(), d.path_minus_t.barrier_top()) - u_min;
  return d;
}

}  // namespace cwewt
