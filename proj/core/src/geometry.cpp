#include "curvflow/geometry.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "curvflow/errors.hpp"
#include "parallel_for.hpp"

namespace curvflow {

namespace {

void require_admissible_rho(const SpaceForm& sf, const SphereGrid& grid,
                            std::span<const double> rho) {
  for (int k = 0; k < grid.node_count(); ++k) {
    if (!std::isfinite(rho[k]) || !sf.in_domain(rho[k])) {
      const int i = grid.dim == 1 ? k : k / grid.n_phi;
      const double th = grid.theta[i];
      const double ph = grid.dim == 1 ? 0.0 : (k % grid.n_phi) * grid.dphi;
      throw ValidationError("rho out of space-form domain at node " + std::to_string(k) +
                                " (theta=" + std::to_string(th) + ", phi=" + std::to_string(ph) +
                                ", rho=" + std::to_string(rho[k]) + ")",
                            k, th, ph);
    }
  }
}

}  // namespace

void principal_curvatures(double w11, double w12, double w21, double w22, double& kappa_min,
                          double& kappa_max) {
  const double tr = w11 + w22;
  const double det = w11 * w22 - w12 * w21;
  double disc = tr * tr - 4.0 * det;
  if (disc < 0.0) {
    if (disc < -1e-12) {
      throw InternalConsistencyError("Weingarten eigenvalue discriminant " + std::to_string(disc) +
                                     " below the symmetrization guard");
    }
    disc = 0.0;
  }
  const double s = std::sqrt(disc);
  kappa_min = 0.5 * (tr - s);
  kappa_max = 0.5 * (tr + s);
}

NodeGeometry node_geometry(const SpaceForm& sf, int dim, double rho, double g1, double g2,
                           double h11, double h12, double h22) {
  NodeGeometry n;
  sf.phi_pair(rho, n.phi, n.phi_prime);
  const double phi = n.phi, phip = n.phi_prime;
  const double phi2 = phi * phi;

  if (dim == 1) {
    n.grad2 = g1 * g1;
    const double wt2 = phi2 + n.grad2;
    n.omega_tilde = std::sqrt(wt2);
    n.omega = n.omega_tilde / phi;
    n.u = phi2 / n.omega_tilde;
    n.h11 = (-phi * h11 + 2.0 * phip * g1 * g1 + phi2 * phip) / n.omega_tilde;
    n.w11 = n.h11 / wt2;  // g^{-1} h, curve metric g = phi^2 + rho'^2
    n.w12 = n.w21 = n.w22 = 0.0;
    n.H = n.w11;
    n.sigma2 = 0.0;
    n.kappa1 = n.kappa2 = n.w11;
    n.area_element = n.omega_tilde;  // phi * omega
    return n;
  }

  n.grad2 = g1 * g1 + g2 * g2;
  const double wt2 = phi2 + n.grad2;
  n.omega_tilde = std::sqrt(wt2);
  n.omega = n.omega_tilde / phi;
  n.u = phi2 / n.omega_tilde;

  const double inv_wt = 1.0 / n.omega_tilde;
  n.h11 = (-phi * h11 + 2.0 * phip * g1 * g1 + phi2 * phip) * inv_wt;
  n.h12 = (-phi * h12 + 2.0 * phip * g1 * g2) * inv_wt;
  n.h22 = (-phi * h22 + 2.0 * phip * g2 * g2 + phi2 * phip) * inv_wt;

  const double inv_phi2 = 1.0 / phi2;
  const double inv_wt2 = inv_wt * inv_wt;
  const double gi11 = (1.0 - g1 * g1 * inv_wt2) * inv_phi2;
  const double gi12 = (-g1 * g2 * inv_wt2) * inv_phi2;
  const double gi22 = (1.0 - g2 * g2 * inv_wt2) * inv_phi2;

  n.w11 = gi11 * n.h11 + gi12 * n.h12;
  n.w12 = gi11 * n.h12 + gi12 * n.h22;
  n.w21 = gi12 * n.h11 + gi22 * n.h12;
  n.w22 = gi12 * n.h12 + gi22 * n.h22;
  n.H = n.w11 + n.w22;
  n.sigma2 = n.w11 * n.w22 - n.w12 * n.w21;
  principal_curvatures(n.w11, n.w12, n.w21, n.w22, n.kappa1, n.kappa2);
  n.area_element = phi * n.omega_tilde;  // phi^2 * omega
  return n;
}

SurfaceGeometry build_geometry(const SpaceForm& sf, const SphereGrid& grid,
                               std::span<const double> rho) {
  require_admissible_rho(sf, grid, rho);

  const int n = grid.node_count();
  SurfaceGeometry g;
  g.grid = &grid;
  g.sf = sf;
  g.rho.assign(rho.begin(), rho.end());
  g.g1.resize(n);
  g.g2.resize(n);
  g.u.resize(n);
  g.omega.resize(n);
  g.omega_tilde.resize(n);
  g.h11.resize(n);
  g.h12.resize(n);
  g.h22.resize(n);
  g.w11.resize(n);
  g.w12.resize(n);
  g.w21.resize(n);
  g.w22.resize(n);
  g.H.resize(n);
  g.sigma2.resize(n);
  g.kappa1.resize(n);
  g.kappa2.resize(n);
  g.area_element.resize(n);

  std::vector<double> c11(n), c12(grid.dim == 2 ? n : 0), c22(grid.dim == 2 ? n : 0);
  frame_derivatives(grid, rho, g.g1, g.g2, c11, c12, c22);

  const int rows = grid.dim == 1 ? 1 : grid.n_theta;
  const int cols = grid.dim == 1 ? n : grid.n_phi;
  detail::parallel_rows(rows, [&](int i) {
    for (int j = 0; j < cols; ++j) {
      const int k = i * cols + j;
      const NodeGeometry ng =
          node_geometry(sf, grid.dim, rho[k], g.g1[k], grid.dim == 2 ? g.g2[k] : 0.0, c11[k],
                        grid.dim == 2 ? c12[k] : 0.0, grid.dim == 2 ? c22[k] : 0.0);
      g.u[k] = ng.u;
      g.omega[k] = ng.omega;
      g.omega_tilde[k] = ng.omega_tilde;
      g.h11[k] = ng.h11;
      g.h12[k] = ng.h12;
      g.h22[k] = ng.h22;
      g.w11[k] = ng.w11;
      g.w12[k] = ng.w12;
      g.w21[k] = ng.w21;
      g.w22[k] = ng.w22;
      g.H[k] = ng.H;
      g.sigma2[k] = ng.sigma2;
      g.kappa1[k] = ng.kappa1;
      g.kappa2[k] = ng.kappa2;
      g.area_element[k] = ng.area_element;
    }
  });

  // Star-shapedness gate: u > 0 is the flow's standing parabolicity
  // hypothesis; abort with the offending node instead of producing NaNs.
  for (int k = 0; k < n; ++k) {
    if (!(g.u[k] > star_shape_u_min)) {
      const int i = grid.dim == 1 ? k : k / grid.n_phi;
      const double th = grid.theta[i];
      const double ph = grid.dim == 1 ? 0.0 : (k % grid.n_phi) * grid.dphi;
      throw ValidationError("star-shapedness gate failed: u = " + std::to_string(g.u[k]) +
                                " <= " + std::to_string(star_shape_u_min) + " at node " +
                                std::to_string(k),
                            k, th, ph);
    }
  }
  return g;
}

double enclosed_volume(const SpaceForm& sf, const SphereGrid& grid, std::span<const double> rho) {
  require_admissible_rho(sf, grid, rho);
  std::vector<double> radial(grid.node_count());
  for (int k = 0; k < grid.node_count(); ++k)
    radial[k] = sf.radial_volume_integral(grid.dim, rho[k]);
  return integrate(grid, radial);
}

double quermassintegral(const SurfaceGeometry& geom, int k) {
  const SphereGrid& grid = *geom.grid;
  if (k < 0 || k > grid.dim - 1)
    throw std::invalid_argument("quermassintegral: k must lie in [0, n-1]");
  if (k == 0) return integrate(grid, geom.area_element);
  std::vector<double> f(grid.node_count());
  for (int i = 0; i < grid.node_count(); ++i) f[i] = geom.H[i] * geom.area_element[i];
  return integrate(grid, f);
}

ScalarSummary summarize(const SurfaceGeometry& geom) {
  ScalarSummary s;
  s.area = integrate(*geom.grid, geom.area_element);
  s.volume = enclosed_volume(geom.sf, *geom.grid, geom.rho);
  s.quermass.resize(geom.grid->dim);
  s.quermass[0] = s.area;
  if (geom.grid->dim == 2) s.quermass[1] = quermassintegral(geom, 1);
  return s;
}

double minkowski_residual(const SurfaceGeometry& geom, int k) {
  const SphereGrid& grid = *geom.grid;
  const int n = grid.dim;
  if (k < 0 || k > n - 1) throw std::invalid_argument("minkowski_residual: k must lie in [0, n-1]");
  std::vector<double> lhs(grid.node_count()), rhs(grid.node_count());
  for (int i = 0; i < grid.node_count(); ++i) {
    const double sigma_k = (k == 0) ? 1.0 : geom.H[i];
    const double sigma_k1 = (k == 0) ? geom.H[i] : geom.sigma2[i];
    double phi, phip;
    geom.sf.phi_pair(geom.rho[i], phi, phip);
    lhs[i] = sigma_k1 * geom.u[i] * geom.area_element[i];
    rhs[i] = phip * sigma_k * geom.area_element[i];
  }
  return (k + 1) * integrate(grid, lhs) - (n - k) * integrate(grid, rhs);
}

namespace {

// Shared algebra of the gamma-variable Weingarten expression
//   h^i_j = (1/(phi omega)) (e^ik - gamma_i gamma_k / omega^2)
//           (-gamma_kj + phi' gamma_k gamma_j + phi' e_kj).
void gamma_form_at_node(double phi, double phip, int dim, double G1, double G2, double G11,
                        double G12, double G22, double& w11, double& w12, double& w21,
                        double& w22) {
  const double grad2 = dim == 1 ? G1 * G1 : G1 * G1 + G2 * G2;
  const double omega2 = 1.0 + grad2;
  const double omega = std::sqrt(omega2);
  const double pref = 1.0 / (phi * omega);
  if (dim == 1) {
    const double a = -G11 + phip * G1 * G1 + phip;
    w11 = pref * (1.0 - G1 * G1 / omega2) * a;
    w12 = w21 = w22 = 0.0;
    return;
  }
  const double a11 = -G11 + phip * G1 * G1 + phip;
  const double a12 = -G12 + phip * G1 * G2;
  const double a22 = -G22 + phip * G2 * G2 + phip;
  const double p11 = 1.0 - G1 * G1 / omega2;
  const double p12 = -G1 * G2 / omega2;
  const double p22 = 1.0 - G2 * G2 / omega2;
  w11 = pref * (p11 * a11 + p12 * a12);
  w12 = pref * (p11 * a12 + p12 * a22);
  w21 = pref * (p12 * a11 + p22 * a12);
  w22 = pref * (p12 * a12 + p22 * a22);
}

}  // namespace

void weingarten_gamma_form(const SpaceForm& sf, const SphereGrid& grid, std::span<const double> rho,
                           bool derivatives_from_gamma_field, std::span<double> w11,
                           std::span<double> w12, std::span<double> w21, std::span<double> w22) {
  require_admissible_rho(sf, grid, rho);
  const int n = grid.node_count();
  std::vector<double> G1(n), G2(grid.dim == 2 ? n : 0), G11(n), G12(grid.dim == 2 ? n : 0),
      G22(grid.dim == 2 ? n : 0);

  if (derivatives_from_gamma_field) {
    std::vector<double> gamma(n);
    for (int k = 0; k < n; ++k) gamma[k] = sf.gamma_of_rho(rho[k]);
    frame_derivatives(grid, gamma, G1, G2, G11, G12, G22);
  } else {
    // Exact chain rule from the rho derivatives:
    // gamma_i = rho_i / phi, gamma_ij = rho_ij / phi - phi' rho_i rho_j / phi^2.
    std::vector<double> r1(n), r2(grid.dim == 2 ? n : 0), c11(n), c12(grid.dim == 2 ? n : 0),
        c22(grid.dim == 2 ? n : 0);
    frame_derivatives(grid, rho, r1, r2, c11, c12, c22);
    for (int k = 0; k < n; ++k) {
      double phi, phip;
      sf.phi_pair(rho[k], phi, phip);
      const double inv_phi = 1.0 / phi;
      const double q = phip * inv_phi * inv_phi;
      G1[k] = r1[k] * inv_phi;
      G11[k] = c11[k] * inv_phi - q * r1[k] * r1[k];
      if (grid.dim == 2) {
        G2[k] = r2[k] * inv_phi;
        G12[k] = c12[k] * inv_phi - q * r1[k] * r2[k];
        G22[k] = c22[k] * inv_phi - q * r2[k] * r2[k];
      }
    }
  }

  for (int k = 0; k < n; ++k) {
    double phi, phip;
    sf.phi_pair(rho[k], phi, phip);
    gamma_form_at_node(phi, phip, grid.dim, G1[k], grid.dim == 2 ? G2[k] : 0.0, G11[k],
                       grid.dim == 2 ? G12[k] : 0.0, grid.dim == 2 ? G22[k] : 0.0, w11[k], w12[k],
                       w21[k], w22[k]);
  }
}

void support_function(const SpaceForm& sf, const SphereGrid& grid, std::span<const double> rho,
                      std::span<double> out) {
  require_admissible_rho(sf, grid, rho);
  const int n = grid.node_count();
  std::vector<double> g1(n), g2(grid.dim == 2 ? n : 0);
  covariant_gradient(grid, rho, g1, g2);
  for (int k = 0; k < n; ++k) {
    double phi, phip;
    sf.phi_pair(rho[k], phi, phip);
    const double g2v = grid.dim == 2 ? g2[k] : 0.0;
    out[k] = phi * phi / std::sqrt(phi * phi + g1[k] * g1[k] + g2v * g2v);
  }
}

void mean_curvature(const SpaceForm& sf, const SphereGrid& grid, std::span<const double> rho,
                    std::span<double> out) {
  const int n = grid.node_count();
  std::vector<double> w11(n), w12(n), w21(n), w22(n);
  weingarten_gamma_form(sf, grid, rho, /*derivatives_from_gamma_field=*/false, w11, w12, w21, w22);
  for (int k = 0; k < n; ++k) out[k] = grid.dim == 1 ? w11[k] : w11[k] + w22[k];
}

}  // namespace curvflow
