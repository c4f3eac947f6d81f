#pragma once

#include <stdexcept>
#include <string>

namespace curvflow {

/// Bad user input: config files, shape specs, out-of-range parameters.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// A field failed the admissibility gate (domain bounds, finiteness, or the
/// star-shapedness condition u > 0). Carries the first offending node.
class ValidationError : public std::runtime_error {
 public:
  ValidationError(const std::string& what, int node, double theta, double phi)
      : std::runtime_error(what), node(node), theta(theta), phi(phi) {}
  int node = -1;
  double theta = 0.0;
  double phi = 0.0;
};

/// Requested time step exceeds the parabolic stability bound.
class StabilityError : public std::runtime_error {
 public:
  StabilityError(const std::string& what, double dt_requested, double dt_stable)
      : std::runtime_error(what), dt_requested(dt_requested), dt_stable(dt_stable) {}
  double dt_requested = 0.0;
  double dt_stable = 0.0;
};

/// Two routes that must agree algebraically diverged beyond roundoff.
class InternalConsistencyError : public std::logic_error {
 public:
  explicit InternalConsistencyError(const std::string& what) : std::logic_error(what) {}
};

}  // namespace curvflow
