#pragma once

#include <string>
#include <string_view>

namespace curvflow {

/// One of the three simply connected space forms N^{n+1}(K), realized as
/// R^{n+1} with the warped metric ds^2 = drho^2 + phi^2(rho) dz^2 where
/// phi = rho, sin(rho), sinh(rho) for K = 0, +1, -1.
///
/// The radial domain is open: (0, rho_max), with rho_max = pi for K = +1
/// and +infinity otherwise. phi > 0 on the whole domain, which is what the
/// flow's parabolicity relies on; fields touching the endpoints are rejected
/// at validation rather than clamped.
struct SpaceForm {
  int curvature = 0;   // K in {-1, 0, +1}
  double rho_max = 0;  // pi for K = +1, +inf otherwise

  static SpaceForm euclidean();
  static SpaceForm sphere();
  static SpaceForm hyperbolic();
  static SpaceForm from_curvature(int k);
  /// Accepts the config names "euclidean", "sphere", "hyperbolic".
  static SpaceForm from_name(std::string_view name);

  const char* name() const;

  bool in_domain(double rho) const noexcept;
  /// Throws std::domain_error when rho is outside (0, rho_max).
  void require_in_domain(double rho) const;

  /// Warping function phi(rho): rho, sin(rho), sinh(rho).
  double phi(double rho) const;
  /// phi'(rho): 1, cos(rho), cosh(rho). Satisfies (phi')^2 + K phi^2 = 1.
  double phi_prime(double rho) const;
  /// Antiderivative Phi(rho) = int_0^rho phi, normalized so Phi(0) = 0:
  /// rho^2/2, 1 - cos(rho), cosh(rho) - 1.
  double capital_phi(double rho) const;

  /// The graph variable gamma with d(gamma)/d(rho) = 1/phi:
  /// log(rho), log(tan(rho/2)), log(tanh(rho/2)).
  double gamma_of_rho(double rho) const;
  double rho_of_gamma(double gamma) const;

  /// int_0^rho phi(r)^n dr in closed form; the ambient radial volume element
  /// integral behind enclosed volumes (n = 1 or 2).
  double radial_volume_integral(int n, double rho) const;

  /// Unchecked phi and phi' in one call; hot-loop kernel. Caller guarantees
  /// rho is in domain.
  void phi_pair(double rho, double& phi_out, double& phi_prime_out) const noexcept;
};

}  // namespace curvflow
