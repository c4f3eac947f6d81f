#pragma once

#include <span>
#include <vector>

#include "curvflow/sphere_grid.hpp"

namespace curvflow {

/// Ring-wise zonal Fourier truncation for the lat-long grid.
///
/// Explicit stepping with dt ~ cfl * dtheta^2 is unstable against zonal modes
/// whose effective spacing sin(theta) * dphi is finer than dtheta. The
/// standard finite-difference remedy on global grids is applied here: on each
/// ring, zero the Fourier modes m with
///   1 - cos(m * dphi) > 2 * (sin(theta) * dphi / dtheta)^2
/// (equivalently m > ~2*min(theta, pi-theta)/dphi; m <= 1 is always kept).
/// After truncation the zonal spectral radius is bounded by the meridional
/// one, so the combined explicit step is stable for cfl <= 0.25.
///
/// The filter is a sharp projection: kept modes are untouched and ring means
/// (mode 0) are preserved exactly, so quadrature integrals of a filtered
/// field match the unfiltered ones to roundoff. For fields that are smooth on
/// the sphere the removed amplitudes are O(sin^m theta) at the affected
/// rings, within the scheme's O(h^2).
///
/// Steppers apply this to tendencies (and once to the initial state). No-op
/// for dim == 1 and on rings that keep the whole spectrum.
class ZonalFilter {
 public:
  explicit ZonalFilter(const SphereGrid& grid);
  ~ZonalFilter();
  ZonalFilter(const ZonalFilter&) = delete;
  ZonalFilter& operator=(const ZonalFilter&) = delete;

  /// In-place; uses an internal ring buffer, so not thread-safe.
  void apply(std::span<double> field);

  bool active() const noexcept { return !filtered_rings_.empty(); }
  /// Largest kept zonal wavenumber on a ring (n_phi/2 when untouched).
  int max_kept_mode(int ring) const { return m_max_[ring]; }

 private:
  const SphereGrid* grid_ = nullptr;
  std::vector<int> m_max_;
  std::vector<int> filtered_rings_;
  void* plan_fwd_ = nullptr;  // fftw_plan, opaque here
  void* plan_bwd_ = nullptr;
  double* buf_ = nullptr;
};

}  // namespace curvflow
