#include "curvflow/output.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace curvflow {

std::string format_double(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string timeseries_csv(std::span<const DiagnosticsRecord> records, int dim) {
  std::ostringstream out;
  if (dim == 1) {
    out << "t,V,A,W0,maxgrad2,min_kappa,max_H,max_pinch,mink0,dAdt,dissipation_rhs\n";
  } else {
    out << "t,V,A,W0,W1,maxgrad2,min_kappa,max_H,max_pinch,mink0,mink1,dAdt,dissipation_rhs\n";
  }
  for (const auto& r : records) {
    out << format_double(r.t) << ',' << format_double(r.volume) << ',' << format_double(r.area);
    for (int k = 0; k < dim; ++k) out << ',' << format_double(r.quermass[k]);
    out << ',' << format_double(r.maxgrad2) << ',' << format_double(r.min_kappa) << ','
        << format_double(r.max_H) << ',' << format_double(r.max_pinch);
    for (int k = 0; k < dim; ++k) out << ',' << format_double(r.mink_residuals[k]);
    out << ',' << format_double(r.dAdt) << ',' << format_double(r.dissipation_rhs) << '\n';
  }
  return out.str();
}

std::string scalar_field_csv(const SphereGrid& grid, std::span<const double> values) {
  std::ostringstream out;
  if (grid.dim == 1) {
    out << "theta,value\n";
    for (int j = 0; j < grid.n_theta; ++j)
      out << format_double(grid.theta[j]) << ',' << format_double(values[j]) << '\n';
  } else {
    out << "theta,phi,value\n";
    for (int i = 0; i < grid.n_theta; ++i)
      for (int j = 0; j < grid.n_phi; ++j)
        out << format_double(grid.theta[i]) << ',' << format_double(j * grid.dphi) << ','
            << format_double(values[grid.index(i, j)]) << '\n';
  }
  return out.str();
}

std::string geometry_csv(const SurfaceGeometry& geom) {
  const SphereGrid& g = *geom.grid;
  std::ostringstream out;
  if (g.dim == 1) {
    out << "theta,rho,u,H,kappa1,area_element\n";
    for (int j = 0; j < g.n_theta; ++j)
      out << format_double(g.theta[j]) << ',' << format_double(geom.rho[j]) << ','
          << format_double(geom.u[j]) << ',' << format_double(geom.H[j]) << ','
          << format_double(geom.kappa1[j]) << ',' << format_double(geom.area_element[j]) << '\n';
  } else {
    out << "theta,phi,rho,u,H,kappa1,kappa2,area_element\n";
    for (int i = 0; i < g.n_theta; ++i)
      for (int j = 0; j < g.n_phi; ++j) {
        const int k = g.index(i, j);
        out << format_double(g.theta[i]) << ',' << format_double(j * g.dphi) << ','
            << format_double(geom.rho[k]) << ',' << format_double(geom.u[k]) << ','
            << format_double(geom.H[k]) << ',' << format_double(geom.kappa1[k]) << ','
            << format_double(geom.kappa2[k]) << ',' << format_double(geom.area_element[k]) << '\n';
      }
  }
  return out.str();
}

namespace {

struct Mapper {
  double x0, x1, y0, y1;
  double px0 = 70, px1 = 640, py0 = 400, py1 = 40;  // svg coords, y inverted
  double sx(double x) const { return px0 + (x - x0) / (x1 - x0 + 1e-300) * (px1 - px0); }
  double sy(double y) const { return py0 + (y - y0) / (y1 - y0 + 1e-300) * (py1 - py0); }
};

void svg_text(std::ostringstream& out, double x, double y, const std::string& s, int size = 12,
              const char* anchor = "middle") {
  out << "<text x=\"" << x << "\" y=\"" << y << "\" font-size=\"" << size
      << "\" font-family=\"sans-serif\" text-anchor=\"" << anchor << "\">" << s << "</text>\n";
}

std::string short_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

}  // namespace

std::string svg_line_chart(const ChartSpec& spec, std::span<const double> xs,
                           std::span<const double> ys) {
  std::vector<double> px, py;
  px.reserve(xs.size());
  py.reserve(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double y = ys[i];
    if (spec.log_y) {
      if (!(y > 0.0)) continue;
      y = std::log10(y);
    }
    if (!std::isfinite(xs[i]) || !std::isfinite(y)) continue;
    px.push_back(xs[i]);
    py.push_back(y);
  }

  Mapper m{0, 1, 0, 1};
  if (!px.empty()) {
    m.x0 = *std::min_element(px.begin(), px.end());
    m.x1 = *std::max_element(px.begin(), px.end());
    m.y0 = *std::min_element(py.begin(), py.end());
    m.y1 = *std::max_element(py.begin(), py.end());
    if (m.x1 == m.x0) m.x1 = m.x0 + 1.0;
    if (m.y1 == m.y0) m.y1 = m.y0 + 1.0;
  }

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"700\" height=\"460\" "
         "viewBox=\"0 0 700 460\">\n";
  out << "<rect width=\"700\" height=\"460\" fill=\"white\"/>\n";
  svg_text(out, 350, 22, spec.title, 15);
  svg_text(out, 355, 440, spec.x_label);
  out << "<g transform=\"translate(18,220) rotate(-90)\">";
  svg_text(out, 0, 0, spec.y_label + (spec.log_y ? " (log10)" : ""));
  out << "</g>\n";
  // axes
  out << "<line x1=\"70\" y1=\"400\" x2=\"640\" y2=\"400\" stroke=\"black\"/>\n";
  out << "<line x1=\"70\" y1=\"400\" x2=\"70\" y2=\"40\" stroke=\"black\"/>\n";
  for (int t = 0; t <= 4; ++t) {
    const double fx = m.x0 + (m.x1 - m.x0) * t / 4.0;
    const double fy = m.y0 + (m.y1 - m.y0) * t / 4.0;
    const double sx = m.sx(fx), sy = m.sy(fy);
    out << "<line x1=\"" << sx << "\" y1=\"400\" x2=\"" << sx << "\" y2=\"404\" stroke=\"black\"/>\n";
    svg_text(out, sx, 418, short_num(fx), 11);
    out << "<line x1=\"66\" y1=\"" << sy << "\" x2=\"70\" y2=\"" << sy << "\" stroke=\"black\"/>\n";
    svg_text(out, 60, sy + 4, short_num(fy), 11, "end");
  }
  if (px.size() >= 2) {
    out << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < px.size(); ++i)
      out << m.sx(px[i]) << ',' << m.sy(py[i]) << ' ';
    out << "\"/>\n";
  }
  if (spec.has_fit_line && px.size() >= 2) {
    const double ya = spec.fit_intercept + spec.fit_slope * m.x0;
    const double yb = spec.fit_intercept + spec.fit_slope * m.x1;
    out << "<line x1=\"" << m.sx(m.x0) << "\" y1=\"" << m.sy(ya) << "\" x2=\"" << m.sx(m.x1)
        << "\" y2=\"" << m.sy(yb)
        << "\" stroke=\"#d62728\" stroke-width=\"1\" stroke-dasharray=\"6,4\"/>\n";
  }
  if (!spec.annotation.empty()) svg_text(out, 350, 40, spec.annotation, 12);
  out << "</svg>\n";
  return out.str();
}

}  // namespace curvflow
