#include "curvflow/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace curvflow {

namespace {

Verdict make(const std::string& name, Verdict::Status st, double residual, double tol,
             std::string note = {}) {
  Verdict v;
  v.name = name;
  v.status = st;
  v.residual = residual;
  v.tolerance = tol;
  v.note = std::move(note);
  return v;
}

Verdict from_residual(const std::string& name, double residual, double tol,
                      std::string note = {}) {
  return make(name, residual <= tol ? Verdict::Status::pass : Verdict::Status::fail, residual, tol,
              std::move(note));
}

}  // namespace

const char* to_string(Verdict::Status s) {
  switch (s) {
    case Verdict::Status::pass:
      return "pass";
    case Verdict::Status::fail:
      return "fail";
    default:
      return "indeterminate";
  }
}

Verdict check_volume_conservation(std::span<const DiagnosticsRecord> traj, double h, double dt) {
  const double tol = 100.0 * h * h + 10.0 * dt;
  if (traj.size() < 2)
    return make("volume_conservation", Verdict::Status::indeterminate, 0.0, tol,
                "needs at least 2 records");
  const double v0 = traj.front().volume;
  double worst = 0.0;
  for (const auto& r : traj) worst = std::max(worst, std::abs(r.volume - v0) / std::abs(v0));
  return from_residual("volume_conservation", worst, tol);
}

Verdict check_area_monotone(std::span<const DiagnosticsRecord> traj, double h) {
  const double tol = 100.0 * h * h;
  if (traj.size() < 2)
    return make("area_monotone", Verdict::Status::indeterminate, 0.0, tol,
                "needs at least 2 records");
  double worst = 0.0;
  for (std::size_t j = 0; j + 1 < traj.size(); ++j)
    worst = std::max(worst, traj[j + 1].area - traj[j].area);
  return from_residual("area_monotone", worst, tol);
}

Verdict check_dissipation_identity(std::span<const DiagnosticsRecord> traj, double h,
                                   double record_dt) {
  const double tol = 100.0 * h * h + 10.0 * record_dt;
  if (traj.size() < 3)
    return make("dissipation_identity", Verdict::Status::indeterminate, 0.0, tol,
                "needs at least 3 records");
  double worst = 0.0;
  for (std::size_t j = 1; j + 1 < traj.size(); ++j) {
    const double scale = std::max(std::abs(traj[j].dissipation_rhs), traj[j].area);
    worst = std::max(worst, std::abs(traj[j].dAdt - traj[j].dissipation_rhs) / scale);
  }
  return from_residual("dissipation_identity", worst, tol);
}

Verdict check_quermass_monotone(std::span<const DiagnosticsRecord> traj, int dim, int curvature,
                                double h) {
  const double tol_area = 100.0 * h * h;
  const double tol_kappa = 1e-6;
  if (dim != 2 || curvature != 0)
    return make("quermass_monotone", Verdict::Status::indeterminate, 0.0, tol_area,
                "applies to Euclidean surfaces only");
  if (traj.empty() || traj.front().min_kappa < 0.0)
    return make("quermass_monotone", Verdict::Status::indeterminate, 0.0, tol_area,
                "initial data not convex; hypothesis unmet");
  double area_rise = 0.0, kappa_dip = 0.0;
  for (std::size_t j = 0; j < traj.size(); ++j) {
    if (j + 1 < traj.size())
      area_rise = std::max(area_rise, traj[j + 1].quermass[0] - traj[j].quermass[0]);
    kappa_dip = std::max(kappa_dip, -traj[j].min_kappa);
  }
  const bool ok = area_rise <= tol_area && kappa_dip <= tol_kappa;
  return make("quermass_monotone", ok ? Verdict::Status::pass : Verdict::Status::fail,
              std::max(area_rise, kappa_dip), tol_area,
              "area rise " + std::to_string(area_rise) + ", min-kappa dip " +
                  std::to_string(kappa_dip) + " (tol 1e-6)");
}

Verdict check_H_bound_hyperbolic(std::span<const DiagnosticsRecord> traj, int curvature, double h) {
  const double tol = 100.0 * h * h;
  if (curvature != -1)
    return make("h_bound_hyperbolic", Verdict::Status::indeterminate, 0.0, tol,
                "applies to hyperbolic space only");
  if (traj.empty())
    return make("h_bound_hyperbolic", Verdict::Status::indeterminate, 0.0, tol, "empty trajectory");
  const double h0 = traj.front().max_H;
  double worst = 0.0;
  for (const auto& r : traj) worst = std::max(worst, r.max_H - h0);
  return from_residual("h_bound_hyperbolic", worst, tol);
}

Verdict check_c0_bounds(std::span<const DiagnosticsRecord> traj, double h) {
  const double tol = 10.0 * h * h;
  if (traj.empty())
    return make("c0_bounds", Verdict::Status::indeterminate, 0.0, tol, "empty trajectory");
  const double lo = traj.front().min_rho, hi = traj.front().max_rho;
  double worst = 0.0;
  for (const auto& r : traj) {
    worst = std::max(worst, r.max_rho - hi);
    worst = std::max(worst, lo - r.min_rho);
  }
  return from_residual("c0_bounds", worst, tol);
}

Verdict check_pinching(std::span<const DiagnosticsRecord> traj, int dim, double grad_tol,
                       bool converged) {
  const double tol = 10.0 * std::sqrt(grad_tol);
  if (dim != 2)
    return make("pinching", Verdict::Status::indeterminate, 0.0, tol, "curve runs have no pairs");
  if (!converged || traj.empty())
    return make("pinching", Verdict::Status::indeterminate, 0.0, tol,
                "final-time statement; run did not converge");
  return from_residual("pinching", traj.back().max_pinch, tol,
                       "operational form of the eventual-pinching claim at t_final");
}

Verdict check_C0_and_pinching(std::span<const DiagnosticsRecord> traj, int dim, double h,
                              double grad_tol, bool converged) {
  const Verdict c0 = check_c0_bounds(traj, h);
  const Verdict pinch = check_pinching(traj, dim, grad_tol, converged);
  Verdict v;
  v.name = "c0_and_pinching";
  if (c0.status == Verdict::Status::fail || pinch.status == Verdict::Status::fail)
    v.status = Verdict::Status::fail;
  else if (c0.status == Verdict::Status::pass)
    v.status = Verdict::Status::pass;
  else
    v.status = Verdict::Status::indeterminate;
  v.residual = std::max(c0.residual / std::max(c0.tolerance, 1e-300),
                        pinch.status == Verdict::Status::indeterminate
                            ? 0.0
                            : pinch.residual / std::max(pinch.tolerance, 1e-300));
  v.tolerance = 1.0;  // residual reported as fraction of the component tolerances
  v.note = "c0 " + std::string(to_string(c0.status)) + " (" + std::to_string(c0.residual) +
           "), pinching " + to_string(pinch.status) + " (" + std::to_string(pinch.residual) + ")";
  return v;
}

Verdict check_gradient_decay(std::span<const DiagnosticsRecord> traj, double h) {
  const double tol = 10.0 * h * h;  // allowed rise per unit time
  if (traj.size() < 2)
    return make("gradient_decay", Verdict::Status::indeterminate, 0.0, tol,
                "needs at least 2 records");
  double worst = 0.0;
  for (std::size_t j = 0; j + 1 < traj.size(); ++j) {
    const double dt = traj[j + 1].t - traj[j].t;
    if (dt <= 0.0) continue;
    worst = std::max(worst, (traj[j + 1].maxgrad2 - traj[j].maxgrad2) / dt);
  }
  return from_residual("gradient_decay", worst, tol);
}

Verdict check_minkowski_audit(std::span<const DiagnosticsRecord> traj, double h) {
  const double tol = 10.0 * h * h;
  if (traj.empty())
    return make("minkowski_audit", Verdict::Status::indeterminate, 0.0, tol, "empty trajectory");
  double worst = 0.0;
  for (const auto& r : traj) {
    for (std::size_t k = 0; k < r.mink_residuals.size(); ++k) {
      const double scale = std::max(std::abs(r.mink_scale[k]), 1e-300);
      worst = std::max(worst, std::abs(r.mink_residuals[k]) / scale);
    }
  }
  return from_residual("minkowski_audit", worst, tol);
}

double alexandrov_fenchel_constant(int n, int k) {
  if (n != 1 && n != 2) throw std::invalid_argument("alexandrov_fenchel_constant: n must be 1 or 2");
  if (k < 0 || k >= n - 1)
    throw std::invalid_argument("alexandrov_fenchel_constant: requires 0 <= k < n-1");
  const double pi = std::numbers::pi;
  const double v_ball = (n == 2) ? 4.0 * pi / 3.0 : pi;
  const double a_ball = (n == 2) ? 4.0 * pi : 2.0 * pi;
  // sigma_k(1,...,1) = C(n, k); only k = 0 is reachable at these dimensions.
  const double sigma_k = 1.0;
  return std::pow(v_ball, 1.0 / (n + 1)) / std::pow(sigma_k * a_ball, 1.0 / (n - k));
}

Verdict check_alexandrov_fenchel(const ScalarSummary& summary, double min_kappa, int dim,
                                 int curvature, int k) {
  if (curvature != 0 || dim != 2 || k != 0)
    return make("alexandrov_fenchel", Verdict::Status::indeterminate, 0.0, 0.0,
                "stated for convex Euclidean domains with 0 <= k < n-1");
  if (min_kappa < 0.0)
    return make("alexandrov_fenchel", Verdict::Status::indeterminate, 0.0, 0.0,
                "geometry not convex; hypothesis unmet");
  const double c = alexandrov_fenchel_constant(dim, k);
  const double lhs = std::pow(summary.volume, 1.0 / (dim + 1));
  const double rhs = c * std::pow(summary.quermass[k], 1.0 / (dim - k));
  const double tol = 1e-10 * rhs;
  return from_residual("alexandrov_fenchel", lhs - rhs, tol,
                       "deficit " + std::to_string(rhs - lhs));
}

Verdict check_alexandrov_fenchel(const SurfaceGeometry& geom, int k) {
  double min_kappa = geom.kappa1.empty() ? 0.0 : geom.kappa1[0];
  for (const double v : geom.kappa1) min_kappa = std::min(min_kappa, v);
  return check_alexandrov_fenchel(summarize(geom), min_kappa, geom.grid->dim, geom.sf.curvature, k);
}

Verdict check_af_trajectory(std::span<const DiagnosticsRecord> traj, int dim, int curvature,
                            double initial_min_kappa) {
  if (curvature != 0 || dim != 2)
    return make("alexandrov_fenchel_flow", Verdict::Status::indeterminate, 0.0, 0.0,
                "stated for convex Euclidean domains");
  if (initial_min_kappa < 0.0 || traj.empty())
    return make("alexandrov_fenchel_flow", Verdict::Status::indeterminate, 0.0, 0.0,
                "initial data not convex; hypothesis unmet");
  const double c = alexandrov_fenchel_constant(2, 0);
  auto gap = [&](const DiagnosticsRecord& r) {
    return c * std::sqrt(r.quermass[0]) - std::cbrt(r.volume);
  };
  const double gap0 = gap(traj.front());
  const double tol = 1e-3 * std::max(gap0, 0.0) + 1e-12;
  double worst = 0.0;
  double prev = gap0;
  for (const auto& r : traj) {
    const double g = gap(r);
    worst = std::max(worst, -g);         // inequality itself
    worst = std::max(worst, g - prev);   // deficit must shrink along the flow
    prev = g;
  }
  return from_residual("alexandrov_fenchel_flow", worst, tol,
                       "gap(0) = " + std::to_string(gap0));
}

}  // namespace curvflow
