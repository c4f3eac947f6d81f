#pragma once

#include <cstdint>
#include <string>

#include "curvflow/flow.hpp"
#include "curvflow/spaceform.hpp"
#include "curvflow/sphere_grid.hpp"

namespace curvflow {

/// Flat-JSON experiment description. Exactly the keys below are accepted;
/// unknown keys are errors (no silent typo tolerance).
///
/// {
///   "space_form": "euclidean" | "sphere" | "hyperbolic",
///   "dim": 1 | 2,
///   "resolution": M | [n_theta, n_phi],
///   "initial_shape": "<shape spec>",
///   "formulation": "direct" | "divergence",        (default "direct")
///   "time_scheme": "euler" | "rk2",                (default "rk2")
///   "cfl_factor": 0.2,                             (default)
///   "t_end": <required>,
///   "grad_tol": 1e-8,                              (default)
///   "record_every": 50,                            (default)
///   "output_dir": "<required>",
///   "emit_plots": false,                           (default)
///   "emit_snapshots_every": 0,                     (default; in records)
///   "seed": 0                                      (default)
/// }
struct ExperimentConfig {
  std::string space_form;
  int dim = 2;
  int n_theta = 0;  // resolution; n_phi stays 1 for dim == 1
  int n_phi = 1;
  std::string initial_shape;
  std::string formulation = "direct";
  std::string time_scheme = "rk2";
  double cfl_factor = 0.2;
  double t_end = 0.0;
  double grad_tol = 1e-8;
  int record_every = 50;
  std::string output_dir;
  bool emit_plots = false;
  int emit_snapshots_every = 0;
  std::uint64_t seed = 0;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;

  /// Throws ConfigError on malformed text, unknown keys, missing required
  /// keys, or out-of-range values.
  static ExperimentConfig from_json_text(const std::string& text);
  static ExperimentConfig from_file(const std::string& path);

  /// Canonical echo of the parsed config; parsing it back yields an equal
  /// struct (the manifest invariant).
  std::string to_json_text() const;

  SpaceForm make_space_form() const;
  SphereGrid make_grid() const;
  FlowConfig make_flow_config() const;
};

}  // namespace curvflow
