#pragma once

#include <span>
#include <vector>

#include "curvflow/spaceform.hpp"
#include "curvflow/sphere_grid.hpp"

namespace curvflow {

/// Everything the flow and the audits need at one node of a radial graph
/// {(rho(z), z)}: support function, graph factors, second fundamental form,
/// Weingarten map, principal curvatures, area element. Tensor components are
/// in the orthonormal frame of the round metric, so
///   g_ij      = phi^2 delta_ij + rho_i rho_j,
///   h_ij      = (-phi rho_;ij + 2 phi' rho_i rho_j + phi^2 phi' delta_ij) / omega_tilde,
///   W = g^-1 h, with g^ij = (delta_ij - rho_i rho_j / omega_tilde^2) / phi^2,
/// and omega_tilde = sqrt(phi^2 + |grad rho|^2) = phi * omega.
struct NodeGeometry {
  double phi = 0, phi_prime = 0;
  double grad2 = 0;  // |grad rho|^2, frame
  double omega = 0, omega_tilde = 0;
  double u = 0;  // support function phi^2 / omega_tilde = phi / omega
  double h11 = 0, h12 = 0, h22 = 0;
  double w11 = 0, w12 = 0, w21 = 0, w22 = 0;  // Weingarten h^i_j
  double H = 0;                               // trace of W
  double sigma2 = 0;                          // det of W (dim 2)
  double kappa1 = 0, kappa2 = 0;              // sorted ascending; kappa2 = kappa1 at dim 1
  double area_element = 0;                    // phi^n * omega
};

/// Pure per-node algebra. Caller guarantees rho is inside the space-form
/// domain; no validation happens here. dim == 1 ignores g2/h12/h22.
NodeGeometry node_geometry(const SpaceForm& sf, int dim, double rho, double g1, double g2,
                           double h11, double h12, double h22);

/// Eigenvalues of a 2x2 Weingarten matrix via the trace/determinant closed
/// form. Discriminants in [-1e-12, 0) are clamped to zero (symmetrization
/// guard); anything more negative throws InternalConsistencyError.
void principal_curvatures(double w11, double w12, double w21, double w22, double& kappa_min,
                          double& kappa_max);

/// Full per-node geometry of a radial graph, plus the star-shapedness gate:
/// construction throws ValidationError (with the offending node) when rho
/// leaves the domain, a value is non-finite, or u <= u_min.
struct SurfaceGeometry {
  const SphereGrid* grid = nullptr;
  SpaceForm sf;
  std::vector<double> rho;
  std::vector<double> g1, g2;  // frame gradient of rho
  std::vector<double> u, omega, omega_tilde;
  std::vector<double> h11, h12, h22;
  std::vector<double> w11, w12, w21, w22;
  std::vector<double> H, sigma2;
  std::vector<double> kappa1, kappa2;
  std::vector<double> area_element;
};

inline constexpr double star_shape_u_min = 1e-8;

SurfaceGeometry build_geometry(const SpaceForm& sf, const SphereGrid& grid,
                               std::span<const double> rho);

/// Integral quantities of Prop. 3.4 / Prop. 3.6.
struct ScalarSummary {
  double area = 0;
  double volume = 0;
  std::vector<double> quermass;  // int sigma_k dmu for k = 0..n-1
};

ScalarSummary summarize(const SurfaceGeometry& geom);

/// Enclosed volume through the ambient radial volume element:
/// V = int_{S^n} int_0^{rho(z)} phi(r)^n dr dz, inner integral closed-form.
double enclosed_volume(const SpaceForm& sf, const SphereGrid& grid, std::span<const double> rho);

/// int sigma_k(kappa) dmu, 0 <= k <= n-1.
double quermassintegral(const SurfaceGeometry& geom, int k);

/// (k+1) int sigma_{k+1} u - (n-k) int phi' sigma_k; identically zero for any
/// closed radial graph in the continuum.
double minkowski_residual(const SurfaceGeometry& geom, int k);

/// Weingarten map from the gamma-variable expression. With
/// derivatives_from_gamma_field = false the gamma derivatives are obtained
/// from the rho derivatives by the exact chain rule, and the result must match
/// build_geometry's W to near roundoff; with true, gamma = gamma(rho) is
/// differenced on the grid as its own field, an independent discrete route
/// that agrees to O(h^2).
void weingarten_gamma_form(const SpaceForm& sf, const SphereGrid& grid, std::span<const double> rho,
                           bool derivatives_from_gamma_field, std::span<double> w11,
                           std::span<double> w12, std::span<double> w21, std::span<double> w22);

/// Support function u = phi^2 / sqrt(phi^2 + |grad rho|^2) = phi / omega per
/// node (= <V, nu> for the conformal field V = phi d_rho).
void support_function(const SpaceForm& sf, const SphereGrid& grid, std::span<const double> rho,
                      std::span<double> out);

/// Mean curvature by the gamma-form contraction
///   H = (1/(phi omega)) (e^ij - gamma_i gamma_j / omega^2)
///       (-gamma_ij + phi' gamma_i gamma_j + phi' e_ij),
/// chain-ruled derivatives; equals trace(W) to roundoff.
void mean_curvature(const SpaceForm& sf, const SphereGrid& grid, std::span<const double> rho,
                    std::span<double> out);

}  // namespace curvflow
