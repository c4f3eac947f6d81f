#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "curvflow/diagnostics.hpp"
#include "curvflow/geometry.hpp"
#include "curvflow/spaceform.hpp"
#include "curvflow/sphere_grid.hpp"
#include "curvflow/zonal_filter.hpp"

namespace curvflow {

/// Spatial discretization of the radial flow equation.
/// direct:      rho_t = (n phi' - H u) omega, H from the graph tensors.
/// divergence:  rho_t = phi div((1/(phi omega_tilde)) grad rho)
///                      + (n+1) phi' |grad rho|^2 / (phi omega_tilde),
/// the flux-form quasilinear equation, face-centered coefficients.
enum class Formulation { direct, divergence };

enum class TimeScheme { euler, rk2 };

struct FlowConfig {
  Formulation formulation = Formulation::direct;
  TimeScheme scheme = TimeScheme::rk2;
  double cfl_factor = 0.2;  // (0, 0.5]; the 2-sphere explicit schemes want <= 0.25
  double t_end = 1.0;
  double grad_tol = 1e-8;  // convergence threshold on max |grad gamma|^2
  int record_every = 50;   // diagnostics cadence in steps

  /// Test hook (fault-injection canary): multiplies the gradient source term
  /// of the divergence formulation. Anything but +1 is a deliberate bug and
  /// must be caught by the dual-formulation agreement check.
  double divergence_source_sign = 1.0;

  void validate() const;  // throws ConfigError
};

struct FlowState {
  double t = 0.0;
  int step_count = 0;
  double dt_last = 0.0;
  std::vector<double> rho;
};

enum class Termination { converged, reached_t_end, aborted_stability, aborted_validation };

const char* to_string(Termination t);

struct DecayFit {
  bool determinate = false;
  double alpha = 0.0;      // fitted decay rate of max |grad gamma|^2
  double r_squared = 0.0;  // fit quality over the trajectory tail
  int samples = 0;
};

struct RunResult {
  std::vector<DiagnosticsRecord> records;
  FlowState final_state;
  Termination termination = Termination::reached_t_end;
  double r_infinity = 0.0;  // equal-volume sphere radius; NaN unless converged
  DecayFit fit;
  double alpha_candidate = 0.0;  // 2(n-1)/max(phi omega), the a-priori bound shape
  int h_bound_flags = 0;         // hyperbolic soft monitor: records with max_H rise > 10 h^2
  std::string abort_detail;
};

/// Explicit time integrator for the initial value problem on S^n. Owns its
/// workspace; one solver serves one run at a time (independent solvers may
/// run concurrently).
class FlowSolver {
 public:
  FlowSolver(const SpaceForm& sf, const SphereGrid& grid, FlowConfig cfg);

  /// Normal speed times the graph factor, (n phi' - H u) omega, per node.
  void speed(std::span<const double> rho, std::span<double> out);

  /// Parabolic stability bound cfl * h^2 * min_node(phi omega); the diffusion
  /// coefficient of the gamma equation is 1/(phi omega).
  double dt_stable(std::span<const double> rho);

  /// One explicit step (Euler or midpoint RK2 per config). Throws
  /// StabilityError when dt exceeds dt_stable, ValidationError when the
  /// stepped field leaves the admissible set.
  void step_direct(FlowState& state, double dt);
  void step_divergence(FlowState& state, double dt);
  void step(FlowState& state, double dt);  // dispatches on config.formulation

  /// Integrate from rho0 until t_end or convergence (max |grad gamma|^2 <
  /// grad_tol), recording diagnostics every record_every steps plus the
  /// endpoints. Aborts are reported in the result, with the partial
  /// trajectory retained. on_record, when set, fires at every stored record
  /// (snapshot emission).
  using RecordObserver = std::function<void(const FlowState&, const DiagnosticsRecord&)>;
  RunResult run(std::span<const double> rho0, const RecordObserver& on_record = {});

  /// Flux part of the divergence form alone; integrates to zero against the
  /// quadrature weights by telescoping.
  void divergence_flux_part(std::span<const double> rho, std::span<double> out);

  DiagnosticsRecord make_record(double t, std::span<const double> rho) const;

  const SphereGrid& grid() const noexcept { return *grid_; }
  const SpaceForm& space_form() const noexcept { return sf_; }
  const FlowConfig& config() const noexcept { return cfg_; }

 private:
  struct EvalStats {
    double maxgrad2 = 0.0;
    double min_omega_tilde = 0.0;
    double min_u = 0.0;
  };

  EvalStats rhs(std::span<const double> rho, std::span<double> out);
  EvalStats rhs_direct(std::span<const double> rho, std::span<double> out);
  EvalStats rhs_divergence(std::span<const double> rho, std::span<double> out);
  void require_star_gate(const EvalStats& stats, std::span<const double> rho) const;
  void require_admissible(std::span<const double> rho) const;
  void advance(FlowState& state, double dt);  // one step, no stability check

  SpaceForm sf_;
  const SphereGrid* grid_;
  FlowConfig cfg_;
  ZonalFilter filter_;

  // workspace
  std::vector<double> g1_, g2_, c11_, c12_, c22_;
  std::vector<double> coef_, src_, phi_;
  std::vector<double> f1_, f2_, mid_;
  std::vector<double> row_maxgrad2_, row_min_wt_, row_min_u_;
};

/// Least-squares slope of log(max |grad gamma|^2) against t over the tail
/// half of the records; alpha = -slope. Indeterminate without >= 20 samples
/// or without decay below 1e-2 of the initial value.
DecayFit fit_decay_rate(std::span<const DiagnosticsRecord> records);

/// Radius of the geodesic ball with the given enclosed volume, bisected to
/// 1e-12 (absolute, in the radius).
double equal_volume_radius(const SpaceForm& sf, int dim, double volume);

}  // namespace curvflow
