#include "curvflow/zonal_filter.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstring>

namespace curvflow {

ZonalFilter::ZonalFilter(const SphereGrid& grid) : grid_(&grid) {
  if (grid.dim != 2) return;
  const int np = grid.n_phi;
  const int nyquist = np / 2;
  m_max_.resize(grid.n_theta, nyquist);
  for (int i = 0; i < grid.n_theta; ++i) {
    const double s = grid.sin_theta[i] * grid.dphi / grid.dtheta;
    const double budget = 2.0 * s * s;
    int m = nyquist;
    while (m > 1 && (1.0 - std::cos(m * grid.dphi)) > budget) --m;
    m_max_[i] = m;
    if (m < nyquist) filtered_rings_.push_back(i);
  }
  if (filtered_rings_.empty()) return;

  buf_ = fftw_alloc_real(np);
  std::memset(buf_, 0, sizeof(double) * np);
  plan_fwd_ = fftw_plan_r2r_1d(np, buf_, buf_, FFTW_R2HC, FFTW_ESTIMATE);
  plan_bwd_ = fftw_plan_r2r_1d(np, buf_, buf_, FFTW_HC2R, FFTW_ESTIMATE);
}

ZonalFilter::~ZonalFilter() {
  if (plan_fwd_) fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
  if (plan_bwd_) fftw_destroy_plan(static_cast<fftw_plan>(plan_bwd_));
  if (buf_) fftw_free(buf_);
}

void ZonalFilter::apply(std::span<double> field) {
  if (filtered_rings_.empty()) return;
  const int np = grid_->n_phi;
  const double scale = 1.0 / np;
  for (const int i : filtered_rings_) {
    double* row = field.data() + static_cast<std::size_t>(i) * np;
    std::memcpy(buf_, row, sizeof(double) * np);
    fftw_execute(static_cast<fftw_plan>(plan_fwd_));
    // Halfcomplex layout: re[0..np/2], im[m] at index np - m for 0 < m < np/2.
    const int keep = m_max_[i];
    for (int m = keep + 1; m <= np / 2; ++m) {
      buf_[m] = 0.0;
      if (m < np / 2) buf_[np - m] = 0.0;
    }
    fftw_execute(static_cast<fftw_plan>(plan_bwd_));
    for (int j = 0; j < np; ++j) row[j] = buf_[j] * scale;
  }
}

}  // namespace curvflow
