#include "curvflow/spaceform.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace curvflow {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();
}  // namespace

SpaceForm SpaceForm::euclidean() { return {0, kInf}; }
SpaceForm SpaceForm::sphere() { return {+1, kPi}; }
SpaceForm SpaceForm::hyperbolic() { return {-1, kInf}; }

SpaceForm SpaceForm::from_curvature(int k) {
  switch (k) {
    case 0:
      return euclidean();
    case +1:
      return sphere();
    case -1:
      return hyperbolic();
    default:
      throw std::invalid_argument("space form curvature must be -1, 0, or +1");
  }
}

SpaceForm SpaceForm::from_name(std::string_view name) {
  if (name == "euclidean") return euclidean();
  if (name == "sphere") return sphere();
  if (name == "hyperbolic") return hyperbolic();
  throw std::invalid_argument("unknown space_form \"" + std::string(name) +
                              "\" (expected euclidean, sphere, or hyperbolic)");
}

const char* SpaceForm::name() const {
  switch (curvature) {
    case +1:
      return "sphere";
    case -1:
      return "hyperbolic";
    default:
      return "euclidean";
  }
}

bool SpaceForm::in_domain(double rho) const noexcept {
  return std::isfinite(rho) && rho > 0.0 && rho < rho_max;
}

void SpaceForm::require_in_domain(double rho) const {
  if (!in_domain(rho)) {
    throw std::domain_error("rho = " + std::to_string(rho) + " outside radial domain (0, " +
                            (curvature == +1 ? std::string("pi") : std::string("inf")) + ")");
  }
}

double SpaceForm::phi(double rho) const {
  require_in_domain(rho);
  switch (curvature) {
    case +1:
      return std::sin(rho);
    case -1:
      return std::sinh(rho);
    default:
      return rho;
  }
}

double SpaceForm::phi_prime(double rho) const {
  require_in_domain(rho);
  switch (curvature) {
    case +1:
      return std::cos(rho);
    case -1:
      return std::cosh(rho);
    default:
      return 1.0;
  }
}

double SpaceForm::capital_phi(double rho) const {
  require_in_domain(rho);
  switch (curvature) {
    case +1: {
      // 1 - cos(rho), written to stay accurate near 0.
      const double s = std::sin(0.5 * rho);
      return 2.0 * s * s;
    }
    case -1: {
      const double s = std::sinh(0.5 * rho);
      return 2.0 * s * s;
    }
    default:
      return 0.5 * rho * rho;
  }
}

double SpaceForm::gamma_of_rho(double rho) const {
  require_in_domain(rho);
  switch (curvature) {
    case +1:
      return std::log(std::tan(0.5 * rho));
    case -1:
      // log(tanh(rho/2)) = log1p(-e^-rho) - log1p(e^-rho); the direct form
      // loses all precision once tanh is within 1e-16 of 1.
      return std::log1p(-std::exp(-rho)) - std::log1p(std::exp(-rho));
    default:
      return std::log(rho);
  }
}

double SpaceForm::rho_of_gamma(double gamma) const {
  if (!std::isfinite(gamma)) throw std::domain_error("gamma must be finite");
  switch (curvature) {
    case +1:
      return 2.0 * std::atan(std::exp(gamma));
    case -1: {
      // tanh(rho/2) = e^gamma requires gamma < 0. 2 atanh(e^gamma) written as
      // log1p(e^gamma) - log(-expm1(gamma)) to stay exact as gamma -> 0-.
      if (gamma >= 0.0) throw std::domain_error("hyperbolic gamma must be negative");
      return std::log1p(std::exp(gamma)) - std::log(-std::expm1(gamma));
    }
    default:
      return std::exp(gamma);
  }
}

double SpaceForm::radial_volume_integral(int n, double rho) const {
  require_in_domain(rho);
  if (n != 1 && n != 2) throw std::invalid_argument("radial_volume_integral: n must be 1 or 2");
  switch (curvature) {
    case +1:
      return n == 1 ? capital_phi(rho) : 0.5 * (rho - std::sin(rho) * std::cos(rho));
    case -1:
      return n == 1 ? capital_phi(rho) : 0.5 * (std::sinh(rho) * std::cosh(rho) - rho);
    default:
      return std::pow(rho, n + 1) / static_cast<double>(n + 1);
  }
}

void SpaceForm::phi_pair(double rho, double& phi_out, double& phi_prime_out) const noexcept {
  switch (curvature) {
    case +1:
      phi_out = std::sin(rho);
      phi_prime_out = std::cos(rho);
      break;
    case -1:
      phi_out = std::sinh(rho);
      phi_prime_out = std::cosh(rho);
      break;
    default:
      phi_out = rho;
      phi_prime_out = 1.0;
      break;
  }
}

}  // namespace curvflow
