#pragma once

// Semiclassical barrier penetration along a one-dimensional escape path.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <utility>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "cwewt/constants.hpp"
#include "cwewt/errors.hpp"
#include "cwewt/potential.hpp"

namespace cwewt {

/// Tunnelling rates below this are shown as zero in tabulated output.
inline constexpr double negligible_tunnelling_rate = 1e-3;  // 1/s

/// A potential profile U(s) on [begin, end] and the energy of the incident atom.
/// The turning points bound the classically forbidden stretch (U > E) that
/// contains the barrier maximum; either may coincide with the path end.
struct BarrierScan {
  std::function<double(double)> potential;  // J as a function of path coordinate (m)
  double begin = 0.0;
  double end = 0.0;
  double energy = 0.0;  // J
  double mass = 0.0;    // kg
  std::pair<double, double> turning_points{0.0, 0.0};
  bool has_barrier = false;
};

namespace detail {

inline double refine_crossing(const std::function<double(double)>& f, double energy, double inside,
                              double outside) {
  // f(inside) > energy >= f(outside)
  for (int it = 0; it < 200 && std::abs(outside - inside) > 1e-16 * (1.0 + std::abs(inside)); ++it) {
    const double mid = 0.5 * (inside + outside);
    if (f(mid) > energy)
      inside = mid;
    else
      outside = mid;
  }
  return inside;
}

}  // namespace detail

/// Locates the turning points by sampling `samples` points on [begin, end] and
/// bisecting the crossings next to the highest sample.
inline BarrierScan make_barrier(std::function<double(double)> potential, double begin, double end,
                                double energy, double mass, std::size_t samples = 4001) {
  if (!(end > begin)) throw InvalidArgument("make_barrier: empty interval");
  if (!(mass > 0.0)) throw InvalidArgument("make_barrier: mass must be > 0");
  if (samples < 3) throw InvalidArgument("make_barrier: need at least three samples");
  BarrierScan scan{std::move(potential), begin, end, energy, mass, {begin, end}, false};
  const double h = (end - begin) / static_cast<double>(samples - 1);
  std::size_t top = 0;
  double top_u = -std::numeric_limits<double>::infinity();
  std::vector<double> u(samples);
  for (std::size_t i = 0; i < samples; ++i) {
    u[i] = scan.potential(begin + static_cast<double>(i) * h);
    if (u[i] > top_u) {
      top_u = u[i];
      top = i;
    }
  }
  if (!(top_u > energy)) return scan;
  std::size_t lo = top, hi = top;
  while (lo > 0 && u[lo - 1] > energy) --lo;
  while (hi + 1 < samples && u[hi + 1] > energy) ++hi;
  const double s_lo = begin + static_cast<double>(lo) * h;
  const double s_hi = begin + static_cast<double>(hi) * h;
  scan.turning_points.first =
      lo == 0 ? begin : detail::refine_crossing(scan.potential, energy, s_lo, s_lo - h);
  scan.turning_points.second =
      hi + 1 == samples ? end : detail::refine_crossing(scan.potential, energy, s_hi, s_hi + h);
  scan.has_barrier = true;
  return scan;
}

/// Barrier from a sampled 1D profile, linearly interpolated between samples.
inline BarrierScan make_barrier(const PotentialGrid& path, double energy, double mass) {
  if (path.axes.size() != 1) throw InvalidArgument("make_barrier: path must be one-dimensional");
  path.validate();
  const GridAxis axis = path.axes[0];
  if (axis.count < 2 || !(axis.step > 0.0))
    throw InvalidArgument("make_barrier: path needs two or more increasing samples");
  const std::vector<double> values = path.values;
  auto interp = [axis, values](double s) {
    const double f = (s - axis.start) / axis.step;
    const double clamped = std::clamp(f, 0.0, static_cast<double>(axis.count - 1));
    const std::size_t i = std::min(static_cast<std::size_t>(clamped), axis.count - 2);
    const double w = clamped - static_cast<double>(i);
    return (1.0 - w) * values[i] + w * values[i + 1];
  };
  return make_barrier(interp, axis.start, axis.coordinate(axis.count - 1), energy, mass,
                      4 * axis.count + 1);
}

struct TunnellingResult {
  double probability = 1.0;  // in [0, 1]
  double action = 0.0;       // J s, S = int sqrt(2 m (U - E)) ds
  bool no_barrier = true;    // set when U <= E everywhere; probability is then 1
};

/// WKB transmission T = exp(-2 S / hbar). The cosine substitution
/// s = a + (b - a)(1 - cos th)/2 removes the square-root behaviour at the turning points.
inline TunnellingResult tunnelling_probability(const BarrierScan& scan) {
  if (!scan.has_barrier) return {};
  const auto [a, b] = scan.turning_points;
  const double half = 0.5 * (b - a);
  const auto integrand = [&](double theta) {
    const double s = a + half * (1.0 - std::cos(theta));
    const double excess = scan.potential(s) - scan.energy;
    return excess > 0.0 ? std::sqrt(2.0 * scan.mass * excess) * half * std::sin(theta) : 0.0;
  };
  double error = 0.0;
  const double action = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      integrand, 0.0, pi, 15, 1e-10, &error);
  return {std::exp(-2.0 * action / hbar), action, false};
}

/// Escape rate (1/s): attempt frequency omega_bar / 2 pi times the transmission.
inline double tunnelling_rate(double probability, double omega_bar) {
  if (!(probability >= 0.0 && probability <= 1.0))
    throw InvalidArgument("tunnelling_rate: probability must lie in [0, 1]");
  if (!(omega_bar > 0.0)) throw InvalidArgument("tunnelling_rate: omega_bar must be > 0");
  return omega_bar / two_pi * probability;
}

/// Rate as shown in Table-2 style output: negligible rates print as zero.
inline double displayed_tunnelling_rate(double rate) {
  return rate < negligible_tunnelling_rate ? 0.0 : rate;
}

}  // namespace cwewt
