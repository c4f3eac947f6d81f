#include "curvflow/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "curvflow/errors.hpp"
#include "parallel_for.hpp"

namespace curvflow {

namespace {
constexpr double kQuietNan = std::numeric_limits<double>::quiet_NaN();
}

void FlowConfig::validate() const {
  if (!(cfl_factor > 0.0 && cfl_factor <= 0.5))
    throw ConfigError("cfl_factor must lie in (0, 0.5]");
  if (!(grad_tol > 0.0)) throw ConfigError("grad_tol must be positive");
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw ConfigError("t_end must be finite and >= 0");
  if (record_every < 1) throw ConfigError("record_every must be >= 1");
}

const char* to_string(Termination t) {
  switch (t) {
    case Termination::converged:
      return "converged";
    case Termination::reached_t_end:
      return "reached_t_end";
    case Termination::aborted_stability:
      return "aborted_stability";
    default:
      return "aborted_validation";
  }
}

FlowSolver::FlowSolver(const SpaceForm& sf, const SphereGrid& grid, FlowConfig cfg)
    : sf_(sf), grid_(&grid), cfg_(cfg), filter_(grid) {
  cfg_.validate();
  const int n = grid.node_count();
  g1_.resize(n);
  g2_.resize(grid.dim == 2 ? n : 0);
  c11_.resize(n);
  c12_.resize(grid.dim == 2 ? n : 0);
  c22_.resize(grid.dim == 2 ? n : 0);
  coef_.resize(n);
  src_.resize(n);
  phi_.resize(n);
  f1_.resize(n);
  f2_.resize(n);
  mid_.resize(n);
  const int rows = grid.dim == 1 ? 1 : grid.n_theta;
  row_maxgrad2_.resize(rows);
  row_min_wt_.resize(rows);
  row_min_u_.resize(rows);
}

void FlowSolver::require_admissible(std::span<const double> rho) const {
  for (int k = 0; k < grid_->node_count(); ++k) {
    if (!std::isfinite(rho[k]) || !sf_.in_domain(rho[k])) {
      const int i = grid_->dim == 1 ? k : k / grid_->n_phi;
      throw ValidationError(
          "field left the space-form domain at node " + std::to_string(k) +
              " (rho=" + std::to_string(rho[k]) + ")",
          k, grid_->theta[i], grid_->dim == 1 ? 0.0 : (k % grid_->n_phi) * grid_->dphi);
    }
  }
}

void FlowSolver::require_star_gate(const EvalStats& stats, std::span<const double> rho) const {
  if (stats.min_u > star_shape_u_min) return;
  // Slow path: locate the offending node for the diagnostic.
  for (int k = 0; k < grid_->node_count(); ++k) {
    double phi, phip;
    sf_.phi_pair(rho[k], phi, phip);
    const double g2v = grid_->dim == 2 ? g2_[k] : 0.0;
    const double wt = std::sqrt(phi * phi + g1_[k] * g1_[k] + g2v * g2v);
    const double u = phi * phi / wt;
    if (!(u > star_shape_u_min)) {
      const int i = grid_->dim == 1 ? k : k / grid_->n_phi;
      throw ValidationError("star-shapedness gate failed during stepping: u = " +
                                std::to_string(u) + " at node " + std::to_string(k),
                            k, grid_->theta[i],
                            grid_->dim == 1 ? 0.0 : (k % grid_->n_phi) * grid_->dphi);
    }
  }
}

FlowSolver::EvalStats FlowSolver::rhs_direct(std::span<const double> rho, std::span<double> out) {
  require_admissible(rho);
  const SphereGrid& g = *grid_;
  const int dim = g.dim;
  const double n_dim = static_cast<double>(dim);
  frame_derivatives(g, rho, g1_, g2_, c11_, c12_, c22_);

  const int rows = dim == 1 ? 1 : g.n_theta;
  const int cols = dim == 1 ? g.node_count() : g.n_phi;
  detail::parallel_rows(rows, [&](int i) {
    double mg = 0.0, mwt = std::numeric_limits<double>::infinity(), mu = mwt;
    for (int j = 0; j < cols; ++j) {
      const int k = i * cols + j;
      double phi, phip;
      sf_.phi_pair(rho[k], phi, phip);
      const double phi2 = phi * phi;
      const double a = g1_[k];
      const double b = dim == 2 ? g2_[k] : 0.0;
      const double P = a * a + b * b;
      const double wt2 = phi2 + P;
      const double wt = std::sqrt(wt2);
      const double inv_wt = 1.0 / wt;
      const double u = phi2 * inv_wt;
      const double omega = wt / phi;

      double H;
      if (dim == 1) {
        const double hb = (-phi * c11_[k] + 2.0 * phip * a * a + phi2 * phip) * inv_wt;
        H = hb / wt2;
      } else {
        const double hb11 = (-phi * c11_[k] + 2.0 * phip * a * a + phi2 * phip) * inv_wt;
        const double hb12 = (-phi * c12_[k] + 2.0 * phip * a * b) * inv_wt;
        const double hb22 = (-phi * c22_[k] + 2.0 * phip * b * b + phi2 * phip) * inv_wt;
        const double inv_phi2 = 1.0 / phi2;
        const double inv_wt2 = inv_wt * inv_wt;
        const double gi11 = (1.0 - a * a * inv_wt2) * inv_phi2;
        const double gi12 = (-a * b * inv_wt2) * inv_phi2;
        const double gi22 = (1.0 - b * b * inv_wt2) * inv_phi2;
        H = gi11 * hb11 + 2.0 * gi12 * hb12 + gi22 * hb22;
      }
      out[k] = (n_dim * phip - H * u) * omega;

      mg = std::max(mg, P / phi2);
      mwt = std::min(mwt, wt);
      mu = std::min(mu, u);
    }
    row_maxgrad2_[i] = mg;
    row_min_wt_[i] = mwt;
    row_min_u_[i] = mu;
  });

  EvalStats s;
  s.maxgrad2 = 0.0;
  s.min_omega_tilde = std::numeric_limits<double>::infinity();
  s.min_u = std::numeric_limits<double>::infinity();
  for (int i = 0; i < rows; ++i) {
    s.maxgrad2 = std::max(s.maxgrad2, row_maxgrad2_[i]);
    s.min_omega_tilde = std::min(s.min_omega_tilde, row_min_wt_[i]);
    s.min_u = std::min(s.min_u, row_min_u_[i]);
  }
  return s;
}

FlowSolver::EvalStats FlowSolver::rhs_divergence(std::span<const double> rho,
                                                 std::span<double> out) {
  require_admissible(rho);
  const SphereGrid& g = *grid_;
  const int dim = g.dim;
  covariant_gradient(g, rho, g1_, g2_);

  const int rows = dim == 1 ? 1 : g.n_theta;
  const int cols = dim == 1 ? g.node_count() : g.n_phi;
  const double src_factor = cfg_.divergence_source_sign * (dim + 1.0);
  detail::parallel_rows(rows, [&](int i) {
    double mg = 0.0, mwt = std::numeric_limits<double>::infinity(), mu = mwt;
    for (int j = 0; j < cols; ++j) {
      const int k = i * cols + j;
      double phi, phip;
      sf_.phi_pair(rho[k], phi, phip);
      const double a = g1_[k];
      const double b = dim == 2 ? g2_[k] : 0.0;
      const double P = a * a + b * b;
      const double wt = std::sqrt(phi * phi + P);
      coef_[k] = 1.0 / (phi * wt);
      src_[k] = src_factor * phip * P / (phi * wt);
      phi_[k] = phi;
      mg = std::max(mg, P / (phi * phi));
      mwt = std::min(mwt, wt);
      mu = std::min(mu, phi * phi / wt);
    }
    row_maxgrad2_[i] = mg;
    row_min_wt_[i] = mwt;
    row_min_u_[i] = mu;
  });

  if (dim == 1) {
    const int m = g.node_count();
    const double inv_h2 = 1.0 / (g.dtheta * g.dtheta);
    for (int j = 0; j < m; ++j) {
      const int jp = (j + 1) % m, jm = (j + m - 1) % m;
      const double flux_p = 0.5 * (coef_[j] + coef_[jp]) * (rho[jp] - rho[j]);
      const double flux_m = 0.5 * (coef_[jm] + coef_[j]) * (rho[j] - rho[jm]);
      out[j] = phi_[j] * (flux_p - flux_m) * inv_h2 + src_[j];
    }
  } else {
    const int np = g.n_phi;
    const double inv_t2 = 1.0 / (g.dtheta * g.dtheta);
    const double inv_p2 = 1.0 / (g.dphi * g.dphi);
    detail::parallel_rows(g.n_theta, [&](int i) {
      const double sin_i = g.sin_theta[i];
      const double sb_dn = g.sin_face[i + 1];  // face toward theta = pi
      const double sb_up = g.sin_face[i];      // face toward theta = 0 (0 at the pole)
      const double inv_sin = 1.0 / sin_i;
      const double phi_scale_theta = inv_sin * inv_t2;
      const double phi_scale_phi = inv_sin * inv_sin * inv_p2;
      const int base = i * np;
      for (int j = 0; j < np; ++j) {
        const int k = base + j;
        const int jp = base + (j + 1) % np, jm = base + (j + np - 1) % np;
        double div = 0.0;
        if (i + 1 < g.n_theta) {
          const int kd = k + np;
          div += sb_dn * 0.5 * (coef_[k] + coef_[kd]) * (rho[kd] - rho[k]) * phi_scale_theta;
        }
        if (i > 0) {
          const int ku = k - np;
          div -= sb_up * 0.5 * (coef_[ku] + coef_[k]) * (rho[k] - rho[ku]) * phi_scale_theta;
        }
        div += (0.5 * (coef_[k] + coef_[jp]) * (rho[jp] - rho[k]) -
                0.5 * (coef_[jm] + coef_[k]) * (rho[k] - rho[jm])) *
               phi_scale_phi;
        out[k] = phi_[k] * div + src_[k];
      }
    });
  }

  EvalStats s;
  s.maxgrad2 = 0.0;
  s.min_omega_tilde = std::numeric_limits<double>::infinity();
  s.min_u = std::numeric_limits<double>::infinity();
  for (int i = 0; i < rows; ++i) {
    s.maxgrad2 = std::max(s.maxgrad2, row_maxgrad2_[i]);
    s.min_omega_tilde = std::min(s.min_omega_tilde, row_min_wt_[i]);
    s.min_u = std::min(s.min_u, row_min_u_[i]);
  }
  return s;
}

void FlowSolver::divergence_flux_part(std::span<const double> rho, std::span<double> out) {
  // div((1/(phi omega_tilde)) grad rho): the conservative piece whose weighted
  // sum telescopes to zero on the closed grid.
  const double saved_sign = cfg_.divergence_source_sign;
  cfg_.divergence_source_sign = 0.0;
  rhs_divergence(rho, out);  // out = phi * div with the source zeroed
  cfg_.divergence_source_sign = saved_sign;
  for (int k = 0; k < grid_->node_count(); ++k) out[k] /= phi_[k];
}

FlowSolver::EvalStats FlowSolver::rhs(std::span<const double> rho, std::span<double> out) {
  const EvalStats s = cfg_.formulation == Formulation::direct ? rhs_direct(rho, out)
                                                              : rhs_divergence(rho, out);
  require_star_gate(s, rho);
  return s;
}

void FlowSolver::speed(std::span<const double> rho, std::span<double> out) {
  rhs_direct(rho, out);
}

double FlowSolver::dt_stable(std::span<const double> rho) {
  require_admissible(rho);
  covariant_gradient(*grid_, rho, g1_, g2_);
  double min_wt = std::numeric_limits<double>::infinity();
  for (int k = 0; k < grid_->node_count(); ++k) {
    double phi, phip;
    sf_.phi_pair(rho[k], phi, phip);
    const double g2v = grid_->dim == 2 ? g2_[k] : 0.0;
    min_wt = std::min(min_wt, std::sqrt(phi * phi + g1_[k] * g1_[k] + g2v * g2v));
  }
  const double h = grid_->spacing();
  return cfg_.cfl_factor * h * h * min_wt;
}

void FlowSolver::advance(FlowState& state, double dt) {
  const int n = grid_->node_count();
  rhs(state.rho, f1_);
  filter_.apply(f1_);
  if (cfg_.scheme == TimeScheme::euler) {
    for (int k = 0; k < n; ++k) state.rho[k] += dt * f1_[k];
  } else {
    const double half = 0.5 * dt;
    for (int k = 0; k < n; ++k) mid_[k] = state.rho[k] + half * f1_[k];
    rhs(mid_, f2_);
    filter_.apply(f2_);
    for (int k = 0; k < n; ++k) state.rho[k] += dt * f2_[k];
  }
  state.t += dt;
  state.step_count += 1;
  state.dt_last = dt;
}

void FlowSolver::step_direct(FlowState& state, double dt) {
  const Formulation saved = cfg_.formulation;
  cfg_.formulation = Formulation::direct;
  try {
    step(state, dt);
  } catch (...) {
    cfg_.formulation = saved;
    throw;
  }
  cfg_.formulation = saved;
}

void FlowSolver::step_divergence(FlowState& state, double dt) {
  const Formulation saved = cfg_.formulation;
  cfg_.formulation = Formulation::divergence;
  try {
    step(state, dt);
  } catch (...) {
    cfg_.formulation = saved;
    throw;
  }
  cfg_.formulation = saved;
}

void FlowSolver::step(FlowState& state, double dt) {
  if (!(dt >= 0.0) || !std::isfinite(dt)) throw ConfigError("step: dt must be finite and >= 0");
  const double bound = dt_stable(state.rho);
  if (dt > bound * (1.0 + 1e-9))
    throw StabilityError("requested dt " + std::to_string(dt) + " exceeds stable dt " +
                             std::to_string(bound),
                         dt, bound);
  advance(state, dt);
  require_admissible(state.rho);
}

DiagnosticsRecord FlowSolver::make_record(double t, std::span<const double> rho) const {
  const SurfaceGeometry geom = build_geometry(sf_, *grid_, rho);
  const SphereGrid& g = *grid_;
  const int n = g.node_count();
  const int dim = g.dim;

  DiagnosticsRecord r;
  r.t = t;
  const ScalarSummary sum = summarize(geom);
  r.volume = sum.volume;
  r.area = sum.area;
  r.quermass = sum.quermass;

  r.maxgrad2 = 0.0;
  r.min_kappa = std::numeric_limits<double>::infinity();
  r.max_H = -std::numeric_limits<double>::infinity();
  r.max_pinch = 0.0;
  r.min_rho = std::numeric_limits<double>::infinity();
  r.max_rho = -std::numeric_limits<double>::infinity();
  r.max_phi_omega = 0.0;
  for (int k = 0; k < n; ++k) {
    double phi, phip;
    sf_.phi_pair(rho[k], phi, phip);
    const double g2v = dim == 2 ? geom.g2[k] : 0.0;
    const double P = geom.g1[k] * geom.g1[k] + g2v * g2v;
    r.maxgrad2 = std::max(r.maxgrad2, P / (phi * phi));
    r.min_kappa = std::min(r.min_kappa, geom.kappa1[k]);
    r.max_H = std::max(r.max_H, geom.H[k]);
    if (dim == 2) r.max_pinch = std::max(r.max_pinch, geom.kappa2[k] - geom.kappa1[k]);
    r.min_rho = std::min(r.min_rho, rho[k]);
    r.max_rho = std::max(r.max_rho, rho[k]);
    r.max_phi_omega = std::max(r.max_phi_omega, geom.omega_tilde[k]);
  }

  r.mink_residuals.resize(dim);
  r.mink_scale.resize(dim);
  std::vector<double> buf(n);
  for (int k = 0; k < dim; ++k) {
    r.mink_residuals[k] = minkowski_residual(geom, k);
    for (int i = 0; i < n; ++i) {
      double phi, phip;
      sf_.phi_pair(rho[i], phi, phip);
      const double sigma_k = (k == 0) ? 1.0 : geom.H[i];
      buf[i] = phip * sigma_k * geom.area_element[i];
    }
    r.mink_scale[k] = dim * integrate(g, buf);
  }

  if (dim == 2) {
    for (int i = 0; i < n; ++i) {
      const double d = geom.kappa2[i] - geom.kappa1[i];
      buf[i] = -d * d * geom.u[i] * geom.area_element[i];
    }
    r.dissipation_rhs = integrate(g, buf);  // -(1/(n-1)) sum_{i<j} (k_i-k_j)^2, n = 2
  } else {
    // Direct area first variation int (n phi' - H u) H dmu; the pair-difference
    // form is 0/0 at n = 1.
    for (int i = 0; i < n; ++i) {
      double phi, phip;
      sf_.phi_pair(rho[i], phi, phip);
      buf[i] = (phip - geom.H[i] * geom.u[i]) * geom.H[i] * geom.area_element[i];
    }
    r.dissipation_rhs = integrate(g, buf);
  }
  return r;
}

RunResult FlowSolver::run(std::span<const double> rho0, const RecordObserver& on_record) {
  cfg_.validate();
  const SphereGrid& g = *grid_;
  const double h = g.spacing();

  RunResult res;
  res.r_infinity = kQuietNan;
  FlowState& state = res.final_state;
  state.rho.assign(rho0.begin(), rho0.end());
  filter_.apply(state.rho);

  auto push_record = [&](double t) {
    res.records.push_back(make_record(t, state.rho));
    if (on_record) on_record(state, res.records.back());
  };

  try {
    push_record(0.0);

    if (res.records[0].maxgrad2 < cfg_.grad_tol) {
      res.termination = Termination::converged;
    } else {
      constexpr long kStepBudget = 200'000'000;
      while (true) {
        const EvalStats stats = rhs(state.rho, f1_);
        if (stats.maxgrad2 < cfg_.grad_tol) {
          res.termination = Termination::converged;
          break;
        }
        if (state.t >= cfg_.t_end * (1.0 - 1e-15)) {
          res.termination = Termination::reached_t_end;
          break;
        }
        const double dt_bound = cfg_.cfl_factor * h * h * stats.min_omega_tilde;
        const double dt = std::min(dt_bound, cfg_.t_end - state.t);
        if (!(dt > 0.0) || !std::isfinite(dt) || state.step_count > kStepBudget) {
          res.termination = Termination::aborted_stability;
          res.abort_detail = "time step collapsed (dt = " + std::to_string(dt) + " after " +
                             std::to_string(state.step_count) + " steps)";
          break;
        }
        filter_.apply(f1_);
        const int n = g.node_count();
        if (cfg_.scheme == TimeScheme::euler) {
          for (int k = 0; k < n; ++k) state.rho[k] += dt * f1_[k];
        } else {
          const double half = 0.5 * dt;
          for (int k = 0; k < n; ++k) mid_[k] = state.rho[k] + half * f1_[k];
          rhs(mid_, f2_);
          filter_.apply(f2_);
          for (int k = 0; k < n; ++k) state.rho[k] += dt * f2_[k];
        }
        state.t += dt;
        state.step_count += 1;
        state.dt_last = dt;
        if (state.step_count % cfg_.record_every == 0) push_record(state.t);
      }

      if (res.records.empty() || res.records.back().t < state.t) push_record(state.t);
    }
  } catch (const ValidationError& e) {
    res.termination = Termination::aborted_validation;
    res.abort_detail = e.what();
  }

  // Post-processing over whatever trajectory exists.
  auto& recs = res.records;
  for (std::size_t j = 0; j < recs.size(); ++j) {
    if (recs.size() == 1) {
      recs[j].dAdt = 0.0;
    } else if (j == 0) {
      recs[j].dAdt = (recs[1].area - recs[0].area) / (recs[1].t - recs[0].t);
    } else if (j + 1 == recs.size()) {
      recs[j].dAdt = (recs[j].area - recs[j - 1].area) / (recs[j].t - recs[j - 1].t);
    } else {
      recs[j].dAdt = (recs[j + 1].area - recs[j - 1].area) / (recs[j + 1].t - recs[j - 1].t);
    }
  }

  if (res.termination == Termination::converged && !recs.empty())
    res.r_infinity = equal_volume_radius(sf_, g.dim, recs.front().volume);

  res.fit = fit_decay_rate(recs);

  double max_wt = 0.0;
  for (const auto& r : recs) max_wt = std::max(max_wt, r.max_phi_omega);
  res.alpha_candidate = max_wt > 0.0 ? 2.0 * (g.dim - 1) / max_wt : 0.0;

  if (sf_.curvature == -1 && !recs.empty()) {
    const double cap = recs.front().max_H + 10.0 * h * h;
    for (const auto& r : recs)
      if (r.max_H > cap) res.h_bound_flags += 1;
  }
  return res;
}

DecayFit fit_decay_rate(std::span<const DiagnosticsRecord> records) {
  DecayFit fit;
  if (records.size() < 20) return fit;
  const double mg0 = records.front().maxgrad2;
  if (!(mg0 > 0.0) || !(records.back().maxgrad2 <= 1e-2 * mg0)) return fit;

  std::vector<double> ts, ys;
  for (std::size_t j = records.size() / 2; j < records.size(); ++j) {
    if (records[j].maxgrad2 > 0.0) {
      ts.push_back(records[j].t);
      ys.push_back(std::log(records[j].maxgrad2));
    }
  }
  if (ts.size() < 10) return fit;

  const double n = static_cast<double>(ts.size());
  double st = 0, sy = 0;
  for (std::size_t j = 0; j < ts.size(); ++j) {
    st += ts[j];
    sy += ys[j];
  }
  const double mt = st / n, my = sy / n;
  double stt = 0, sty = 0, syy = 0;
  for (std::size_t j = 0; j < ts.size(); ++j) {
    const double dt = ts[j] - mt, dy = ys[j] - my;
    stt += dt * dt;
    sty += dt * dy;
    syy += dy * dy;
  }
  if (!(stt > 0.0) || !(syy > 0.0)) return fit;
  const double slope = sty / stt;
  fit.determinate = true;
  fit.alpha = -slope;
  fit.r_squared = (sty * sty) / (stt * syy);
  fit.samples = static_cast<int>(ts.size());
  return fit;
}

double equal_volume_radius(const SpaceForm& sf, int dim, double volume) {
  if (!(volume > 0.0) || !std::isfinite(volume))
    throw std::invalid_argument("equal_volume_radius: volume must be positive");
  const double sphere_area = dim == 2 ? 4.0 * std::numbers::pi : 2.0 * std::numbers::pi;
  auto ball_volume = [&](double r) { return sphere_area * sf.radial_volume_integral(dim, r); };

  double lo = 1e-12, hi;
  if (sf.curvature == +1) {
    hi = std::numbers::pi - 1e-12;
    if (volume >= ball_volume(hi))
      throw std::invalid_argument("equal_volume_radius: volume exceeds the spherical space");
  } else {
    hi = 1.0;
    int guard = 0;
    while (ball_volume(hi) < volume) {
      hi *= 2.0;
      if (++guard > 600) throw std::invalid_argument("equal_volume_radius: bracket failure");
    }
  }
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    (ball_volume(mid) < volume ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace curvflow
