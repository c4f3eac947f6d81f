#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "curvflow/diagnostics.hpp"
#include "curvflow/geometry.hpp"
#include "curvflow/sphere_grid.hpp"

namespace curvflow {

/// Shortest round-trip decimal representation (<= 17 significant digits).
std::string format_double(double v);

/// Write via a temp file + rename in the same directory.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

/// timeseries.csv with the fixed header
/// t,V,A,W0[,W1],maxgrad2,min_kappa,max_H,max_pinch,mink0[,mink1],dAdt,dissipation_rhs
std::string timeseries_csv(std::span<const DiagnosticsRecord> records, int dim);

/// ScalarField snapshot: header theta[,phi],value, row-major over nodes.
std::string scalar_field_csv(const SphereGrid& grid, std::span<const double> values);

/// Per-node geometry dump: theta[,phi],rho,u,H,kappa1[,kappa2],area_element.
std::string geometry_csv(const SurfaceGeometry& geom);

/// Minimal hand-emitted SVG line chart (no charting dependency). One series;
/// optional straight reference line y = a + b x drawn over the data range
/// (used for the fitted decay slope), optional log10 y axis.
struct ChartSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_y = false;
  bool has_fit_line = false;
  double fit_intercept = 0.0;  // in plotted (possibly log10) coordinates
  double fit_slope = 0.0;
  std::string annotation;
};
std::string svg_line_chart(const ChartSpec& spec, std::span<const double> xs,
                           std::span<const double> ys);

}  // namespace curvflow
