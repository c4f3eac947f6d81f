#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "curvflow/config.hpp"

namespace curvflow {

inline constexpr int exit_ok = 0;
inline constexpr int exit_checks_failed = 1;
inline constexpr int exit_config_error = 2;
inline constexpr int exit_runtime_abort = 3;

/// Full experiment pipeline: build the initial shape, run the flow, persist
/// timeseries.csv / verdicts.json / manifest.json (plus optional snapshots
/// and SVG plots) under config.output_dir. Returns the process exit status:
/// 0 all applicable verdicts pass, 1 some verdict failed, 2 config/shape
/// error (no outputs), 3 runtime abort (partial outputs retained).
int execute(const ExperimentConfig& config, std::ostream* log = nullptr);

/// Build and validate the initial shape only; write initial_geometry.csv
/// under output_dir. Exit 0 or 2.
int shape_preview(const ExperimentConfig& config, std::ostream* log = nullptr);

/// One acceptance criterion outcome.
struct CriterionResult {
  std::string id;
  std::string name;
  bool pass = false;
  double residual = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

struct SuiteOptions {
  /// Resolution divisor: 1 = default (96x192, M=256), 2 = half, 4 = quarter.
  /// h^2-driven pinned tolerances scale by scale^2 away from the default.
  int scale = 1;
  std::ostream* log = nullptr;
};

/// The fixed acceptance matrix (all three space forms x {n=1,2} x canonical
/// shapes). Heavy runs are shared across criteria.
std::vector<CriterionResult> verify_suite(const SuiteOptions& opt = {});

/// Runs the suite, prints one residual/tolerance line per criterion, returns
/// 0 iff all pass.
int verify_and_report(const SuiteOptions& opt = {});

}  // namespace curvflow
