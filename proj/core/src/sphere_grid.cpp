#include "curvflow/sphere_grid.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "curvflow/errors.hpp"
#include "parallel_for.hpp"

namespace curvflow {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}  // namespace

SphereGrid SphereGrid::circle(int m) {
  if (m < 8) throw std::invalid_argument("circle grid needs at least 8 nodes");
  SphereGrid g;
  g.dim = 1;
  g.n_theta = m;
  g.n_phi = 1;
  g.dtheta = kTwoPi / m;
  g.dphi = 0.0;
  g.theta.resize(m);
  for (int j = 0; j < m; ++j) g.theta[j] = j * g.dtheta;
  g.ring_weight.assign(m, kTwoPi / m);
  return g;
}

SphereGrid SphereGrid::sphere(int n_theta, int n_phi) {
  if (n_theta < 4) throw std::invalid_argument("sphere grid needs n_theta >= 4");
  if (n_phi < 8 || n_phi % 2 != 0)
    throw std::invalid_argument("sphere grid needs even n_phi >= 8 (pole pairing uses phi + pi)");
  SphereGrid g;
  g.dim = 2;
  g.n_theta = n_theta;
  g.n_phi = n_phi;
  g.dtheta = kPi / n_theta;
  g.dphi = kTwoPi / n_phi;
  g.theta.resize(n_theta);
  g.sin_theta.resize(n_theta);
  g.cos_theta.resize(n_theta);
  g.cot_theta.resize(n_theta);
  g.sin_face.resize(n_theta + 1);
  g.ring_weight.resize(n_theta);
  // Faces at i*dtheta; the pole faces carry exact zeros so that divergence
  // fluxes vanish there identically.
  std::vector<double> cos_face(n_theta + 1);
  for (int i = 0; i <= n_theta; ++i) {
    const double tf = i * g.dtheta;
    g.sin_face[i] = (i == 0 || i == n_theta) ? 0.0 : std::sin(tf);
    cos_face[i] = (i == 0) ? 1.0 : (i == n_theta ? -1.0 : std::cos(tf));
  }
  for (int i = 0; i < n_theta; ++i) {
    g.theta[i] = (i + 0.5) * g.dtheta;
    g.sin_theta[i] = std::sin(g.theta[i]);
    g.cos_theta[i] = std::cos(g.theta[i]);
    g.cot_theta[i] = g.cos_theta[i] / g.sin_theta[i];
    // Exact cell area: (cos(theta_{i-1/2}) - cos(theta_{i+1/2})) * dphi.
    g.ring_weight[i] = (cos_face[i] - cos_face[i + 1]) * g.dphi;
  }
  return g;
}

double SphereGrid::spacing() const noexcept {
  return dim == 1 ? dtheta : std::min(dtheta, dphi);
}

double SphereGrid::total_area() const noexcept {
  double s = 0.0;
  for (int i = 0; i < n_theta; ++i) s += ring_weight[i];
  return s * n_phi;
}

void ScalarField::require_finite() const {
  for (int k = 0; k < static_cast<int>(values.size()); ++k) {
    if (!std::isfinite(values[k])) {
      const int i = k / grid->n_phi, j = k % grid->n_phi;
      throw ValidationError("non-finite field value at node " + std::to_string(k), k,
                            grid->theta[grid->dim == 1 ? k : i],
                            grid->dim == 1 ? 0.0 : j * grid->dphi);
    }
  }
}

namespace {

// Row-stencil kernel for the 2-sphere. For interior rows neighbor rows are
// i +/- 1; at the pole rows the missing row is the same ring shifted by pi in
// longitude, which is the smooth continuation of a scalar through the pole.
struct RowStencil {
  const SphereGrid& g;
  std::span<const double> f;
  int i;
  const double* up;    // row toward theta = 0 (ghost at i = 0)
  const double* down;  // row toward theta = pi (ghost at i = n-1)
  bool up_shift;       // ghost rows are read with a half-turn shift
  bool down_shift;

  RowStencil(const SphereGrid& grid, std::span<const double> field, int row)
      : g(grid), f(field), i(row) {
    up_shift = (i == 0);
    down_shift = (i == g.n_theta - 1);
    up = f.data() + (up_shift ? 0 : (i - 1) * g.n_phi);
    down = f.data() + (down_shift ? (g.n_theta - 1) * g.n_phi : (i + 1) * g.n_phi);
  }

  double at_up(int j) const { return up[up_shift ? (j + g.n_phi / 2) % g.n_phi : j]; }
  double at_down(int j) const { return down[down_shift ? (j + g.n_phi / 2) % g.n_phi : j]; }
};

}  // namespace

void frame_derivatives(const SphereGrid& grid, std::span<const double> f, std::span<double> g1,
                       std::span<double> g2, std::span<double> h11, std::span<double> h12,
                       std::span<double> h22) {
  if (grid.dim == 1) {
    const int m = grid.n_theta;
    const double inv2h = 1.0 / (2.0 * grid.dtheta);
    const double invh2 = 1.0 / (grid.dtheta * grid.dtheta);
    for (int j = 0; j < m; ++j) {
      const double fp = f[(j + 1) % m], fm = f[(j + m - 1) % m];
      g1[j] = (fp - fm) * inv2h;
      h11[j] = (fp - 2.0 * f[j] + fm) * invh2;
      if (!g2.empty()) g2[j] = 0.0;
      if (!h12.empty()) h12[j] = 0.0;
      if (!h22.empty()) h22[j] = 0.0;
    }
    return;
  }

  const int np = grid.n_phi;
  const double inv2t = 1.0 / (2.0 * grid.dtheta);
  const double invt2 = 1.0 / (grid.dtheta * grid.dtheta);
  const double inv2p = 1.0 / (2.0 * grid.dphi);
  const double invp2 = 1.0 / (grid.dphi * grid.dphi);
  const double inv4tp = 1.0 / (4.0 * grid.dtheta * grid.dphi);

  detail::parallel_rows(grid.n_theta, [&](int i) {
    const RowStencil s(grid, f, i);
    const double* row = f.data() + i * np;
    const double sint = grid.sin_theta[i];
    const double cott = grid.cot_theta[i];
    const double inv_sin = 1.0 / sint;
    const int base = i * np;
    for (int j = 0; j < np; ++j) {
      const int jp = (j + 1) % np, jm = (j + np - 1) % np;
      const double fu = s.at_up(j), fd = s.at_down(j);
      const double fc = row[j], fjp = row[jp], fjm = row[jm];

      const double ft = (fd - fu) * inv2t;
      const double ftt = (fd - 2.0 * fc + fu) * invt2;
      const double fp = (fjp - fjm) * inv2p;
      const double fpp = (fjp - 2.0 * fc + fjm) * invp2;
      const double ftp = (s.at_down(jp) - s.at_down(jm) - s.at_up(jp) + s.at_up(jm)) * inv4tp;

      const int k = base + j;
      g1[k] = ft;
      g2[k] = fp * inv_sin;
      h11[k] = ftt;
      h12[k] = (ftp - cott * fp) * inv_sin;
      h22[k] = fpp * inv_sin * inv_sin + cott * ft;
    }
  });
}

void covariant_gradient(const SphereGrid& grid, std::span<const double> f, std::span<double> g1,
                        std::span<double> g2) {
  if (grid.dim == 1) {
    const int m = grid.n_theta;
    const double inv2h = 1.0 / (2.0 * grid.dtheta);
    for (int j = 0; j < m; ++j) {
      g1[j] = (f[(j + 1) % m] - f[(j + m - 1) % m]) * inv2h;
      if (!g2.empty()) g2[j] = 0.0;
    }
    return;
  }
  const int np = grid.n_phi;
  const double inv2t = 1.0 / (2.0 * grid.dtheta);
  const double inv2p = 1.0 / (2.0 * grid.dphi);
  detail::parallel_rows(grid.n_theta, [&](int i) {
    const RowStencil s(grid, f, i);
    const double* row = f.data() + i * np;
    const double inv_sin = 1.0 / grid.sin_theta[i];
    const int base = i * np;
    for (int j = 0; j < np; ++j) {
      const int jp = (j + 1) % np, jm = (j + np - 1) % np;
      g1[base + j] = (s.at_down(j) - s.at_up(j)) * inv2t;
      g2[base + j] = (row[jp] - row[jm]) * inv2p * inv_sin;
    }
  });
}

void covariant_hessian(const SphereGrid& grid, std::span<const double> f, std::span<double> h11,
                       std::span<double> h12, std::span<double> h22) {
  std::vector<double> g1(grid.node_count()), g2(grid.dim == 2 ? grid.node_count() : 0);
  frame_derivatives(grid, f, g1, g2, h11, h12, h22);
}

void laplace_beltrami(const SphereGrid& grid, std::span<const double> f, std::span<double> out) {
  const int n = grid.node_count();
  std::vector<double> g1(n), g2(grid.dim == 2 ? n : 0), h11(n), h12(grid.dim == 2 ? n : 0),
      h22(grid.dim == 2 ? n : 0);
  frame_derivatives(grid, f, g1, g2, h11, h12, h22);
  if (grid.dim == 1) {
    for (int k = 0; k < n; ++k) out[k] = h11[k];
  } else {
    for (int k = 0; k < n; ++k) out[k] = h11[k] + h22[k];
  }
}

double integrate(const SphereGrid& grid, std::span<const double> f) {
  // Neumaier compensated sum, serial in node order: deterministic and
  // accurate enough for the 1e-12 quadrature invariants.
  double sum = 0.0, comp = 0.0;
  const int np = grid.n_phi;
  for (int i = 0; i < grid.n_theta; ++i) {
    const double w = grid.ring_weight[i];
    for (int j = 0; j < np; ++j) {
      const double term = f[i * np + j] * w;
      const double t = sum + term;
      comp += (std::abs(sum) >= std::abs(term)) ? (sum - t) + term : (term - t) + sum;
      sum = t;
    }
  }
  return sum + comp;
}

}  // namespace curvflow
