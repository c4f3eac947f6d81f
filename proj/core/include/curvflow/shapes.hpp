#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "curvflow/spaceform.hpp"
#include "curvflow/sphere_grid.hpp"

namespace curvflow {

/// Build the initial radial field from a shape spec string. Supported:
///
///   sphere(r)                      any space form
///   ellipsoid(a,b)                 n = 1, Euclidean only (exact polar graph)
///   ellipsoid(a,b,c)               n = 2, Euclidean only
///   fourier(r0=1, a2=0.2, b3=...)  n = 1: rho = r0 (1 + sum a_m cos m\theta + b_m sin m\theta)
///   harmonic(r0=1, e10=0.2, ...)   n = 2: rho = r0 (1 + sum c_lm T_lm), T_lm the
///                                  P_l^m(cos)-based real harmonics, l <= 4;
///                                  keys eLM (cos m\phi) and fLM (sin m\phi)
///   random(r0, amp, lmax[, seed])  seeded coefficients on the same basis,
///                                  amplitude halved until the field passes the
///                                  star-shapedness gate; seed defaults to the
///                                  config seed
///
/// The result is validated (domain + star-shapedness); a failing spec is
/// rejected with the offending node reported.
std::vector<double> build_initial_shape(const std::string& spec, const SphereGrid& grid,
                                        const SpaceForm& sf, std::uint64_t default_seed);

/// Exact polar graph of the axis-aligned ellipsoid: the positive root of
/// |diag(1/a..)^ -1 ...| along the ray with direction (theta[, phi]).
double ellipsoid_radius(std::span<const double> semi_axes, double theta, double phi, int dim);

/// Unnormalized real surface harmonic P_l^m(cos theta) * {cos, sin}(m phi),
/// l <= 4, 0 <= m <= l (sine variant needs m >= 1). Smooth across the poles.
double surface_harmonic(int l, int m, bool sine, double theta, double phi);

}  // namespace curvflow
