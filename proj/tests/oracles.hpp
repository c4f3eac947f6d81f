#pragma once

#include <functional>

namespace curvflow::test {

/// Composite Simpson quadrature (n even panels).
double simpson(const std::function<double(double)>& f, double a, double b, int n);

/// Parametric ellipse x = a cos t, y = b sin t, traversed counterclockwise.
/// Everything is exact closed form; used as the independent reference for the
/// n = 1 graph geometry.
struct EllipseOracle {
  double a = 1, b = 1;

  /// Parameter of the point whose polar angle is theta.
  double param_from_polar(double theta) const;
  double radius(double theta) const;
  /// kappa = a b / (a^2 sin^2 t + b^2 cos^2 t)^{3/2} at the polar angle.
  double curvature(double theta) const;
  /// Support function u = <X, nu> = a b / sqrt(b^2 cos^2 t + a^2 sin^2 t).
  double support(double theta) const;
};

/// Level-set reference for the ellipsoid x^2/a^2 + y^2/b^2 + z^2/c^2 = 1 with
/// outward normal: curvatures from the standard div(grad F/|grad F|) and
/// adjugate formulas, support u = <X, nu>. Independent of the graph tensors.
struct EllipsoidOracle {
  double a = 1, b = 1, c = 1;

  double radius(double theta, double phi) const;
  double mean_curvature(double theta, double phi) const;      // kappa_1 + kappa_2
  double gauss_curvature(double theta, double phi) const;     // kappa_1 * kappa_2
  void curvatures(double theta, double phi, double& k_min, double& k_max) const;
  double support(double theta, double phi) const;
  /// max |kappa_1 - kappa_2| over a parameter scan.
  double max_pinch(int samples = 4000) const;

  /// Brute-force parametric quadrature (spheroids only, a == b): surface area
  /// and the total mean curvature int H dmu.
  double area_spheroid(int panels = 4000) const;
  double quermass1_spheroid(int panels = 4000) const;
};

}  // namespace curvflow::test
