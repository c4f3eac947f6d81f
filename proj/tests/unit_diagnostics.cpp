#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "curvflow/diagnostics.hpp"
#include "curvflow/geometry.hpp"
#include "curvflow/sphere_grid.hpp"

using namespace curvflow;

namespace {

constexpr double kPi = std::numbers::pi;

// Hand-built trajectory scaffold: everything healthy unless a test breaks it.
std::vector<DiagnosticsRecord> healthy_traj(int n, int dim = 2) {
  std::vector<DiagnosticsRecord> recs(n);
  for (int i = 0; i < n; ++i) {
    DiagnosticsRecord& r = recs[i];
    r.t = 0.05 * i;
    r.volume = 4.0 * kPi / 3.0;
    r.area = 13.0 - 0.3 * (1.0 - std::exp(-2.0 * r.t));
    r.quermass = {r.area, 25.0};
    r.quermass.resize(dim);
    if (dim == 2) r.quermass[1] = 25.0;
    r.maxgrad2 = 0.04 * std::exp(-4.0 * r.t);
    r.min_kappa = 0.4;
    r.max_H = 2.1;
    r.max_pinch = 0.5 * std::exp(-2.0 * r.t);
    r.mink_residuals.assign(dim, 1e-5);
    r.mink_scale.assign(dim, 25.0);
    r.dAdt = -0.6 * std::exp(-2.0 * r.t);
    r.dissipation_rhs = -0.6 * std::exp(-2.0 * r.t);
    r.min_rho = 0.9;
    r.max_rho = 1.2;
    r.max_phi_omega = 1.3;
  }
  return recs;
}

}  // namespace

TEST_CASE("volume conservation verdict") {
  const double h = 0.03;
  auto traj = healthy_traj(10);
  CHECK(check_volume_conservation(traj, h, 1e-4).status == Verdict::Status::pass);
  traj[5].volume *= 1.5;
  const Verdict v = check_volume_conservation(traj, h, 1e-4);
  CHECK(v.status == Verdict::Status::fail);
  CHECK(v.residual == doctest::Approx(0.5));
  CHECK(check_volume_conservation({traj.data(), 1}, h, 0.0).status ==
        Verdict::Status::indeterminate);
}

TEST_CASE("area monotonicity verdict") {
  const double h = 0.03;
  auto traj = healthy_traj(10);
  CHECK(check_area_monotone(traj, h).status == Verdict::Status::pass);
  traj[7].area = traj[6].area + 1.0;
  CHECK(check_area_monotone(traj, h).status == Verdict::Status::fail);
}

TEST_CASE("dissipation identity verdict") {
  const double h = 0.03;
  auto traj = healthy_traj(10);
  CHECK(check_dissipation_identity(traj, h, 0.05).status == Verdict::Status::pass);
  for (auto& r : traj) r.dissipation_rhs *= 3.0;  // break the identity
  CHECK(check_dissipation_identity(traj, 1e-3, 0.0).status == Verdict::Status::fail);
  CHECK(check_dissipation_identity({traj.data(), 2}, h, 0.05).status ==
        Verdict::Status::indeterminate);
}

TEST_CASE("quermassintegral monotonicity gates") {
  const double h = 0.03;
  auto traj = healthy_traj(10);
  CHECK(check_quermass_monotone(traj, 2, 0, h).status == Verdict::Status::pass);
  // Conditional statements outside their hypotheses are indeterminate.
  CHECK(check_quermass_monotone(traj, 1, 0, h).status == Verdict::Status::indeterminate);
  CHECK(check_quermass_monotone(traj, 2, -1, h).status == Verdict::Status::indeterminate);
  auto nonconvex = healthy_traj(10);
  for (auto& r : nonconvex) r.min_kappa = -0.3;
  CHECK(check_quermass_monotone(nonconvex, 2, 0, h).status == Verdict::Status::indeterminate);
  // Convexity loss after a convex start is a failure.
  auto lost = healthy_traj(10);
  lost[6].min_kappa = -1e-3;
  CHECK(check_quermass_monotone(lost, 2, 0, h).status == Verdict::Status::fail);
}

TEST_CASE("hyperbolic mean curvature bound verdict") {
  const double h = 0.03;
  auto traj = healthy_traj(10);
  CHECK(check_H_bound_hyperbolic(traj, -1, h).status == Verdict::Status::pass);
  CHECK(check_H_bound_hyperbolic(traj, 0, h).status == Verdict::Status::indeterminate);
  traj[4].max_H = traj[0].max_H + 1.0;
  CHECK(check_H_bound_hyperbolic(traj, -1, h).status == Verdict::Status::fail);
}

TEST_CASE("C0 and pinching verdicts") {
  const double h = 0.03;
  auto traj = healthy_traj(10);
  CHECK(check_c0_bounds(traj, h).status == Verdict::Status::pass);
  traj[3].max_rho = traj[0].max_rho + 1.0;
  CHECK(check_c0_bounds(traj, h).status == Verdict::Status::fail);

  auto traj2 = healthy_traj(40);
  traj2.back().max_pinch = 1e-4;
  CHECK(check_pinching(traj2, 2, 1e-8, true).status == Verdict::Status::pass);
  CHECK(check_pinching(traj2, 2, 1e-8, false).status == Verdict::Status::indeterminate);
  CHECK(check_pinching(traj2, 1, 1e-8, true).status == Verdict::Status::indeterminate);
  traj2.back().max_pinch = 0.5;
  CHECK(check_pinching(traj2, 2, 1e-8, true).status == Verdict::Status::fail);

  const Verdict both = check_C0_and_pinching(traj2, 2, h, 1e-8, true);
  CHECK(both.status == Verdict::Status::fail);  // pinching side broke
}

TEST_CASE("gradient decay verdict") {
  const double h = 0.03;
  auto traj = healthy_traj(10);
  CHECK(check_gradient_decay(traj, h).status == Verdict::Status::pass);
  traj[5].maxgrad2 = traj[4].maxgrad2 + 1.0;
  CHECK(check_gradient_decay(traj, h).status == Verdict::Status::fail);
}

TEST_CASE("minkowski audit verdict") {
  const double h = 0.03;
  auto traj = healthy_traj(10);
  CHECK(check_minkowski_audit(traj, h).status == Verdict::Status::pass);
  traj[8].mink_residuals[1] = 1.0;  // relative 4e-2 > 10 h^2
  CHECK(check_minkowski_audit(traj, h).status == Verdict::Status::fail);
}

TEST_CASE("Alexandrov-Fenchel constant and static check") {
  const double c20 = alexandrov_fenchel_constant(2, 0);
  CHECK(c20 == doctest::Approx(std::cbrt(4.0 * kPi / 3.0) / std::sqrt(4.0 * kPi)).epsilon(1e-15));
  CHECK_THROWS(alexandrov_fenchel_constant(2, 1));
  CHECK_THROWS(alexandrov_fenchel_constant(1, 0));

  SUBCASE("equality on the unit ball") {
    const SphereGrid g = SphereGrid::sphere(32, 64);
    std::vector<double> rho(g.node_count(), 1.0);
    const SurfaceGeometry geom = build_geometry(SpaceForm::euclidean(), g, rho);
    const Verdict v = check_alexandrov_fenchel(geom, 0);
    CHECK(v.status == Verdict::Status::pass);
    CHECK(std::abs(v.residual) < 1e-12);
  }

  SUBCASE("strict inequality on a synthetic convex summary") {
    ScalarSummary s;
    s.volume = 2.0 * kPi;          // ellipsoid (1,1,1.5)
    s.quermass = {16.9775, 0.0};   // its area
    const Verdict v = check_alexandrov_fenchel(s, 0.44, 2, 0, 0);
    CHECK(v.status == Verdict::Status::pass);
    CHECK(v.residual < -1e-3);  // genuine deficit
  }

  SUBCASE("hypotheses gate to indeterminate") {
    ScalarSummary s;
    s.volume = 1.0;
    s.quermass = {5.0, 0.0};
    CHECK(check_alexandrov_fenchel(s, -0.1, 2, 0, 0).status == Verdict::Status::indeterminate);
    CHECK(check_alexandrov_fenchel(s, 0.1, 2, -1, 0).status == Verdict::Status::indeterminate);
    CHECK(check_alexandrov_fenchel(s, 0.1, 1, 0, 0).status == Verdict::Status::indeterminate);
  }
}

TEST_CASE("Alexandrov-Fenchel flow deficit verdict") {
  auto traj = healthy_traj(10);
  // Make the deficit genuinely shrink: area falls toward the ball area of the
  // fixed volume.
  CHECK(check_af_trajectory(traj, 2, 0, 0.4).status == Verdict::Status::pass);
  CHECK(check_af_trajectory(traj, 2, -1, 0.4).status == Verdict::Status::indeterminate);
  CHECK(check_af_trajectory(traj, 2, 0, -0.1).status == Verdict::Status::indeterminate);
  auto rising = healthy_traj(10);
  for (int i = 0; i < 10; ++i) rising[i].quermass[0] = rising[i].area = 13.0 + 0.5 * i;
  CHECK(check_af_trajectory(rising, 2, 0, 0.4).status == Verdict::Status::fail);
}

TEST_CASE("checks are pure functions of the trajectory") {
  const double h = 0.03;
  const auto traj = healthy_traj(25);
  for (int rep = 0; rep < 2; ++rep) {
    const Verdict a = check_volume_conservation(traj, h, 1e-4);
    const Verdict b = check_volume_conservation(traj, h, 1e-4);
    CHECK(a.status == b.status);
    CHECK(a.residual == b.residual);
    CHECK(a.tolerance == b.tolerance);
    CHECK(a.name == b.name);
    CHECK(a.note == b.note);
  }
}

TEST_CASE("verdict status names") {
  CHECK(std::string(to_string(Verdict::Status::pass)) == "pass");
  CHECK(std::string(to_string(Verdict::Status::fail)) == "fail");
  CHECK(std::string(to_string(Verdict::Status::indeterminate)) == "indeterminate");
}
