#pragma once

#include <span>
#include <string>
#include <vector>

#include "curvflow/geometry.hpp"

namespace curvflow {

/// Per-record scalars of a trajectory. The first block mirrors the
/// timeseries.csv columns; the trailing fields are carried in memory for the
/// audits (C0 re-check, Minkowski normalization, decay-rate candidate) and
/// are not serialized.
struct DiagnosticsRecord {
  double t = 0;
  double volume = 0;
  double area = 0;
  std::vector<double> quermass;  // int sigma_k dmu, k = 0..n-1
  double maxgrad2 = 0;           // max_node |grad gamma|^2 = max(omega^2 - 1)
  double min_kappa = 0;
  double max_H = 0;
  double max_pinch = 0;                // max_node (kappa_2 - kappa_1), 0 for curves
  std::vector<double> mink_residuals;  // raw (k+1) int s_{k+1} u - (n-k) int phi' s_k
  double dAdt = 0;                     // centered difference over records, filled post-run
  double dissipation_rhs = 0;          // -(1/(n-1)) int sum_{i<j} (k_i-k_j)^2 u dmu  (n=2)

  double min_rho = 0, max_rho = 0;
  double max_phi_omega = 0;             // max_node phi*omega = max omega_tilde
  std::vector<double> mink_scale;       // n * int phi' sigma_k dmu, the residual normalizer
};

/// Outcome of one audited statement. "indeterminate" is first-class: it marks
/// hypotheses that do not apply to the run (wrong curvature, non-convex data,
/// not enough decay), never a failure.
struct Verdict {
  enum class Status { pass, fail, indeterminate };
  std::string name;
  Status status = Status::indeterminate;
  double residual = 0;  // reported even on pass
  double tolerance = 0;
  std::string note;
};

const char* to_string(Verdict::Status s);

// Every tolerance below is an explicit function of the grid spacing h (and
// the step/record spacing where time differencing enters); the audited
// statements are exact in the continuum and the audit must not mistake
// discretization error for a counterexample.

/// Prop. "volume is constant": max_t |V - V0| / V0 <= 100 h^2 + 10 dt.
Verdict check_volume_conservation(std::span<const DiagnosticsRecord> traj, double h, double dt);

/// Area nonincreasing within 100 h^2 per record step.
Verdict check_area_monotone(std::span<const DiagnosticsRecord> traj, double h);

/// |dA/dt - dissipation_rhs| <= (100 h^2 + 10 dt_rec) * max(|rhs|, A) at
/// interior records.
Verdict check_dissipation_identity(std::span<const DiagnosticsRecord> traj, double h,
                                   double record_dt);

/// Euclidean convex data only: W_0 nonincreasing and min kappa >= -1e-6
/// (convexity preservation monitor). Indeterminate when hypotheses unmet.
Verdict check_quermass_monotone(std::span<const DiagnosticsRecord> traj, int dim, int curvature,
                                double h);

/// Hyperbolic only: max_t max_H <= max_H(0) + 100 h^2.
Verdict check_H_bound_hyperbolic(std::span<const DiagnosticsRecord> traj, int curvature, double h);

/// rho(t) stays within [min rho_0 - 10 h^2, max rho_0 + 10 h^2].
Verdict check_c0_bounds(std::span<const DiagnosticsRecord> traj, double h);

/// Final-time pinching max_{i<j}|kappa_i - kappa_j| <= 10 sqrt(grad_tol) for
/// converged surface runs (operational form of the eventual-pinching claim).
Verdict check_pinching(std::span<const DiagnosticsRecord> traj, int dim, double grad_tol,
                       bool converged);

/// Combined C0 + pinching audit (single verdict; components in the note).
Verdict check_C0_and_pinching(std::span<const DiagnosticsRecord> traj, int dim, double h,
                              double grad_tol, bool converged);

/// max|grad gamma|^2 near-monotone decay: increments <= 10 h^2 per unit time.
Verdict check_gradient_decay(std::span<const DiagnosticsRecord> traj, double h);

/// Minkowski residuals stay O(h^2) (relative tolerance 10 h^2) at every
/// record, not only at t = 0.
Verdict check_minkowski_audit(std::span<const DiagnosticsRecord> traj, double h);

/// c_{n,k} fixed by equality on the unit ball:
/// c = V_ball^{1/(n+1)} / (sigma_k(1,...,1) * A_ball)^{1/(n-k)}.
double alexandrov_fenchel_constant(int n, int k);

/// V^{1/(n+1)} <= c_{n,k} (int sigma_k dmu)^{1/(n-k)} for convex Euclidean
/// geometry, 0 <= k < n-1; equality slack 1e-10.
Verdict check_alexandrov_fenchel(const ScalarSummary& summary, double min_kappa, int dim,
                                 int curvature, int k);
Verdict check_alexandrov_fenchel(const SurfaceGeometry& geom, int k);

/// Along a convex Euclidean trajectory the deficit c A^{1/2} - V^{1/3} stays
/// nonnegative and shrinks monotonically within 1e-3 * gap(0).
Verdict check_af_trajectory(std::span<const DiagnosticsRecord> traj, int dim, int curvature,
                            double initial_min_kappa);

}  // namespace curvflow
