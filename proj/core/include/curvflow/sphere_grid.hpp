#pragma once

#include <span>
#include <vector>

namespace curvflow {

/// Structured discretization of the round sphere S^n, n = 1 or 2.
///
/// n = 1: M equispaced angles theta_j = 2*pi*j/M, periodic.
/// n = 2: lat-long grid with half-step pole offset, theta_i = (i+1/2)*pi/N_theta
/// crossed with phi_j = 2*pi*j/N_phi. No node sits on a pole; stencils that
/// reach past a pole continue on the opposite meridian (phi -> phi + pi),
/// which is the smooth extension of a scalar through the pole.
///
/// Quadrature weights are exact spherical cell areas,
///   w_ij = (cos(theta_{i-1/2}) - cos(theta_{i+1/2})) * dphi,
/// so they sum to |S^2| = 4*pi by telescoping (and to 2*pi for n = 1).
///
/// Tensor components produced by the operators below are in the per-node
/// orthonormal frame {d_theta, (1/sin theta) d_phi} of the round metric.
struct SphereGrid {
  int dim = 0;      // 1 or 2
  int n_theta = 0;  // node count (n=1) or number of rings (n=2)
  int n_phi = 1;    // 1 when dim == 1
  double dtheta = 0.0;
  double dphi = 0.0;

  std::vector<double> theta;      // colatitudes (n=2) or angles (n=1)
  std::vector<double> sin_theta;  // per ring (n=2)
  std::vector<double> cos_theta;
  std::vector<double> cot_theta;
  std::vector<double> sin_face;     // sin at theta faces, exact zeros at the poles (n=2)
  std::vector<double> ring_weight;  // quadrature weight of one node on ring i

  static SphereGrid circle(int m);
  static SphereGrid sphere(int n_theta, int n_phi);

  int node_count() const noexcept { return n_theta * n_phi; }
  int index(int i, int j) const noexcept { return i * n_phi + j; }
  /// Grid spacing h entering all h-scaled tolerances: min(dtheta, dphi).
  double spacing() const noexcept;
  double node_weight(int node) const noexcept { return ring_weight[node / n_phi]; }
  /// Sum of all weights: 2*pi (n=1) or 4*pi (n=2), exact by construction.
  double total_area() const noexcept;
};

/// A real-valued sample per grid node, row-major over (ring, longitude).
struct ScalarField {
  const SphereGrid* grid = nullptr;
  std::vector<double> values;

  ScalarField() = default;
  explicit ScalarField(const SphereGrid& g) : grid(&g), values(g.node_count(), 0.0) {}
  /// Throws ValidationError on the first non-finite node.
  void require_finite() const;
};

/// Gradient in the orthonormal frame; second-order central differences.
/// For dim == 1 only g1 is written (g2 may be empty).
void covariant_gradient(const SphereGrid& grid, std::span<const double> f, std::span<double> g1,
                        std::span<double> g2);

/// Covariant Hessian w.r.t. the round metric, orthonormal-frame components
/// (h11, h12, h22); symmetric by construction, one off-diagonal stored.
/// For dim == 1 only h11 is written.
void covariant_hessian(const SphereGrid& grid, std::span<const double> f, std::span<double> h11,
                       std::span<double> h12, std::span<double> h22);

/// Trace of the covariant Hessian.
void laplace_beltrami(const SphereGrid& grid, std::span<const double> f, std::span<double> out);

/// Gradient and Hessian in one stencil pass (the flow's hot path).
void frame_derivatives(const SphereGrid& grid, std::span<const double> f, std::span<double> g1,
                       std::span<double> g2, std::span<double> h11, std::span<double> h12,
                       std::span<double> h22);

/// Quadrature: sum of f * node weight.
double integrate(const SphereGrid& grid, std::span<const double> f);

}  // namespace curvflow
