#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "curvflow/spaceform.hpp"
#include "oracles.hpp"

using curvflow::SpaceForm;
using curvflow::test::simpson;

namespace {
constexpr double kPi = std::numbers::pi;

std::vector<double> log_spaced(double lo, double hi, int n) {
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i)
    out[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
  return out;
}
}  // namespace

TEST_CASE("warping function values") {
  CHECK(SpaceForm::euclidean().phi(2.0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(SpaceForm::sphere().phi(kPi / 2) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(SpaceForm::hyperbolic().phi(1.0) == doctest::Approx(1.1752011936438014).epsilon(1e-14));

  CHECK(SpaceForm::euclidean().phi_prime(0.37) == 1.0);
  CHECK(std::abs(SpaceForm::sphere().phi_prime(kPi / 2)) < 1e-12);
  CHECK(SpaceForm::hyperbolic().phi_prime(1.0) == doctest::Approx(1.5430806348152437).epsilon(1e-14));
}

TEST_CASE("warping function domain is open") {
  for (const SpaceForm sf : {SpaceForm::euclidean(), SpaceForm::sphere(), SpaceForm::hyperbolic()}) {
    CHECK_THROWS_AS(sf.phi(0.0), std::domain_error);
    CHECK_THROWS_AS(sf.phi(-1.0), std::domain_error);
    CHECK_THROWS_AS(sf.capital_phi(std::nan("")), std::domain_error);
  }
  CHECK_THROWS_AS(SpaceForm::sphere().phi(kPi), std::domain_error);
  CHECK_THROWS_AS(SpaceForm::sphere().phi(3.5), std::domain_error);
  CHECK_NOTHROW(SpaceForm::hyperbolic().phi(50.0));
}

TEST_CASE("structure identity (phi')^2 + K phi^2 = 1") {
  // 1e-12 absolute where the squared terms stay resolvable in doubles;
  // beyond that (hyperbolic rho >> 1, cosh^2 ~ 1e16) the identity is a
  // difference of huge near-equal terms and only the relative form is
  // meaningful.
  for (const SpaceForm sf : {SpaceForm::euclidean(), SpaceForm::sphere(), SpaceForm::hyperbolic()}) {
    const double hi = sf.curvature == +1 ? kPi - 1e-3 : 4.0;
    for (const double rho : log_spaced(1e-6, hi, 200)) {
      const double p = sf.phi(rho), q = sf.phi_prime(rho);
      CHECK(std::abs(q * q + sf.curvature * p * p - 1.0) < 1e-12);
    }
  }
  for (const double rho : log_spaced(4.0, 20.0, 40)) {
    const SpaceForm sf = SpaceForm::hyperbolic();
    const double p = sf.phi(rho), q = sf.phi_prime(rho);
    CHECK(std::abs(q * q - p * p - 1.0) < 1e-15 * q * q);
  }
}

TEST_CASE("antiderivative: values, normalization, derivative") {
  CHECK(SpaceForm::euclidean().capital_phi(2.0) == doctest::Approx(2.0).epsilon(1e-15));
  // 1 - cos(rho) -> 2 at the domain endpoint.
  CHECK(SpaceForm::sphere().capital_phi(kPi - 1e-9) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(SpaceForm::hyperbolic().capital_phi(1e-8) < 1e-15);  // Phi(0) = 0

  // d/drho Phi = phi by central differences at 1e-6 step, 1e-8 absolute.
  for (const SpaceForm sf : {SpaceForm::euclidean(), SpaceForm::sphere(), SpaceForm::hyperbolic()}) {
    for (const double rho : {0.2, 0.9, 1.7, 2.9}) {
      const double fd = (sf.capital_phi(rho + 1e-6) - sf.capital_phi(rho - 1e-6)) / 2e-6;
      CHECK(std::abs(fd - sf.phi(rho)) < 1e-8);
    }
  }

  // (phi')^2 - phi'' phi = 1 with phi'' taken by finite differences.
  for (const SpaceForm sf : {SpaceForm::euclidean(), SpaceForm::sphere(), SpaceForm::hyperbolic()}) {
    for (const double rho : {0.4, 1.1, 2.2}) {
      const double h = 1e-4;
      const double pp = (sf.phi(rho + h) - 2.0 * sf.phi(rho) + sf.phi(rho - h)) / (h * h);
      const double q = sf.phi_prime(rho);
      CHECK(std::abs(q * q - pp * sf.phi(rho) - 1.0) < 1e-6);
    }
  }
}

TEST_CASE("graph variable gamma and its inverse") {
  CHECK(SpaceForm::euclidean().gamma_of_rho(1.0) == 0.0);
  CHECK(std::abs(SpaceForm::sphere().gamma_of_rho(kPi / 2)) < 1e-15);
  CHECK(SpaceForm::euclidean().gamma_of_rho(std::exp(1.0)) == doctest::Approx(1.0).epsilon(1e-14));

  for (const SpaceForm sf : {SpaceForm::euclidean(), SpaceForm::sphere(), SpaceForm::hyperbolic()}) {
    const double hi = sf.curvature == +1 ? kPi - 1e-3 : 30.0;
    double prev = -std::numeric_limits<double>::infinity();
    for (const double rho : log_spaced(1e-3, hi, 100)) {
      const double g = sf.gamma_of_rho(rho);
      CHECK(g > prev);  // strictly increasing
      prev = g;
      const double back = sf.rho_of_gamma(g);
      CHECK(std::abs(back - rho) <= 1e-12 * rho);
    }
  }
  CHECK_THROWS_AS(SpaceForm::hyperbolic().rho_of_gamma(0.1), std::domain_error);

  // d gamma / d rho = 1 / phi.
  for (const SpaceForm sf : {SpaceForm::euclidean(), SpaceForm::sphere(), SpaceForm::hyperbolic()}) {
    for (const double rho : {0.3, 1.2, 2.4}) {
      const double fd = (sf.gamma_of_rho(rho + 1e-6) - sf.gamma_of_rho(rho - 1e-6)) / 2e-6;
      CHECK(std::abs(fd - 1.0 / sf.phi(rho)) < 1e-7);
    }
  }
}

TEST_CASE("radial volume integral against quadrature") {
  for (const SpaceForm sf : {SpaceForm::euclidean(), SpaceForm::sphere(), SpaceForm::hyperbolic()}) {
    for (const int n : {1, 2}) {
      for (const double rho : {0.3, 1.0, 2.8}) {
        const double closed = sf.radial_volume_integral(n, rho);
        const double quad = simpson(
            [&](double r) { return r < 1e-300 ? 0.0 : std::pow(sf.phi(std::max(r, 1e-300)), n); },
            1e-12, rho, 2000);
        CHECK(closed == doctest::Approx(quad).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("space form construction and naming") {
  CHECK(SpaceForm::from_name("euclidean").curvature == 0);
  CHECK(SpaceForm::from_name("sphere").curvature == 1);
  CHECK(SpaceForm::from_name("hyperbolic").curvature == -1);
  CHECK_THROWS(SpaceForm::from_name("flat"));
  CHECK_THROWS(SpaceForm::from_curvature(2));
  CHECK(SpaceForm::sphere().rho_max == doctest::Approx(kPi));
  CHECK(std::isinf(SpaceForm::euclidean().rho_max));
}
