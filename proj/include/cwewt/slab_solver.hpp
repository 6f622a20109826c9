#pragma once

// Fused-silica dispersion and guided-mode effective indices of a symmetric
// suspended slab, with the effective-index split for a shallow rib.

#include <cmath>
#include <string>

#include "cwewt/constants.hpp"
#include "cwewt/errors.hpp"

namespace cwewt {

enum class Polarization { TE, TM };

struct SlabGeometry {
  double core_thickness = 300e-9;  // m, membrane thickness h
  double rib_height = 0.0;         // m
  double rib_width = 2e-6;         // m
  double core_index = 0.0;         // <= 0 selects the fused-silica Sellmeier model
  double cladding_index = 1.0;     // vacuum on both sides

  double core_index_at(double wavelength) const;

  void validate() const {
    if (!(core_thickness > 0.0)) throw InvalidArgument("slab: core_thickness must be > 0");
    if (!(rib_height >= 0.0)) throw InvalidArgument("slab: rib_height must be >= 0");
    if (!(rib_width > 0.0)) throw InvalidArgument("slab: rib_width must be > 0");
    if (!(cladding_index >= 1.0)) throw InvalidArgument("slab: cladding_index must be >= 1");
    if (core_index > 0.0 && !(core_index > cladding_index))
      throw InvalidArgument("slab: core_index must exceed cladding_index");
  }
};

/// Malitson (1965) three-term Sellmeier fit for fused silica.
inline double silica_index(double wavelength) {
  const double lambda_um = wavelength / um;
  if (!(lambda_um > 0.2 && lambda_um < 2.0))
    throw OutOfRange("silica_index: wavelength " + std::to_string(lambda_um) +
                     " um outside (0.2, 2) um");
  const double l2 = lambda_um * lambda_um;
  const double n2 = 1.0 + 0.6961663 * l2 / (l2 - 0.0684043 * 0.0684043) +
                    0.4079426 * l2 / (l2 - 0.1162414 * 0.1162414) +
                    0.8974794 * l2 / (l2 - 9.896161 * 9.896161);
  return std::sqrt(n2);
}

inline double SlabGeometry::core_index_at(double wavelength) const {
  return core_index > 0.0 ? core_index : silica_index(wavelength);
}

namespace detail {

struct SlabProblem {
  double half_thickness_k;  // k h / 2
  double n_core;
  double n_clad;
  double pol_ratio;  // 1 for TE, (n_core/n_clad)^2 for TM
  int order;

  double radius() const {
    return half_thickness_k * std::sqrt(n_core * n_core - n_clad * n_clad);
  }

  // Residual in the normalized transverse wavenumber u = kappa h / 2.
  double residual_u(double u) const {
    const double r = radius();
    const double w = std::sqrt(std::max(r * r - u * u, 0.0));
    if (order % 2 == 0) return u * std::tan(u) - pol_ratio * w;
    return -u / std::tan(u) - pol_ratio * w;
  }

  double neff_from_u(double u) const {
    const double kappa_over_k = u / half_thickness_k;
    return std::sqrt(n_core * n_core - kappa_over_k * kappa_over_k);
  }

  double u_from_neff(double n_eff) const {
    return half_thickness_k * std::sqrt(std::max(n_core * n_core - n_eff * n_eff, 0.0));
  }
};

inline SlabProblem make_problem(const SlabGeometry& g, double thickness, double wavelength,
                                Polarization pol, int order) {
  g.validate();
  if (!(wavelength > 0.0)) throw InvalidArgument("slab: wavelength must be > 0");
  if (order < 0) throw InvalidArgument("slab: mode order must be >= 0");
  const double n_core = g.core_index_at(wavelength);
  if (!(n_core > g.cladding_index)) throw InvalidArgument("slab: core index must exceed cladding");
  const double k = two_pi / wavelength;
  const double ratio =
      pol == Polarization::TE ? 1.0 : (n_core / g.cladding_index) * (n_core / g.cladding_index);
  return {k * thickness / 2.0, n_core, g.cladding_index, ratio, order};
}

inline double solve_slab(const SlabProblem& p) {
  const double r = p.radius();
  const double lo_edge = p.order * pi / 2.0;
  if (!(r > lo_edge))
    throw ModeCutoff("slab: mode order " + std::to_string(p.order) + " is cut off (V/2 = " +
                     std::to_string(r) + ")");
  double lo = lo_edge;
  double hi = std::min((p.order + 1) * pi / 2.0, r);
  // Step inside the tan/cot poles; f(lo) < 0 < f(hi) on the open interval.
  const double pole_margin = 1e-15 * (1.0 + hi);
  if (hi == (p.order + 1) * pi / 2.0) hi -= pole_margin;
  if (p.order > 0) lo += pole_margin;
  double f_lo = p.residual_u(lo);
  for (int it = 0; it < 400; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double f_mid = p.residual_u(mid);
    if (std::abs(f_mid) < 1e-12 || mid == lo || mid == hi) return p.neff_from_u(mid);
    if ((f_mid < 0.0) == (f_lo < 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  return p.neff_from_u(0.5 * (lo + hi));
}

}  // namespace detail

/// Dispersion residual of the symmetric slab of thickness `thickness`, as a
/// function of a trial effective index. Zero at a guided mode.
inline double slab_dispersion_residual(const SlabGeometry& geometry, double thickness,
                                       double wavelength, Polarization pol, int order,
                                       double n_eff) {
  auto p = detail::make_problem(geometry, thickness, wavelength, pol, order);
  return p.residual_u(p.u_from_neff(n_eff));
}

/// Effective index of the guided mode of the bare membrane (thickness h).
inline double slab_neff(const SlabGeometry& geometry, double wavelength,
                        Polarization pol = Polarization::TE, int order = 0) {
  return detail::solve_slab(
      detail::make_problem(geometry, geometry.core_thickness, wavelength, pol, order));
}

struct RibIndices {
  double rib;   // vertical solve under the rib, thickness h + h_rib
  double slab;  // vertical solve beside the rib, thickness h
};

inline RibIndices rib_neff(const SlabGeometry& geometry, double wavelength,
                           Polarization pol = Polarization::TE, int order = 0) {
  const double slab = slab_neff(geometry, wavelength, pol, order);
  if (geometry.rib_height == 0.0) return {slab, slab};
  const double rib = detail::solve_slab(detail::make_problem(
      geometry, geometry.core_thickness + geometry.rib_height, wavelength, pol, order));
  return {rib, slab};
}

}  // namespace cwewt
