#include "curvflow/shapes.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <random>
#include <stdexcept>

#include "curvflow/errors.hpp"
#include "curvflow/geometry.hpp"

namespace curvflow {

namespace {

struct ParsedSpec {
  std::string name;
  std::vector<double> positional;
  std::vector<std::pair<std::string, double>> named;
};

std::string strip(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

double parse_number(const std::string& tok, const std::string& spec) {
  try {
    std::size_t used = 0;
    const double v = std::stod(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("bad number \"" + tok + "\" in shape spec \"" + spec + "\"");
  }
}

ParsedSpec parse_spec(const std::string& spec) {
  const std::string s = strip(spec);
  const std::size_t open = s.find('(');
  if (open == std::string::npos || s.back() != ')')
    throw ConfigError("shape spec must look like name(args): \"" + spec + "\"");
  ParsedSpec p;
  p.name = strip(s.substr(0, open));
  const std::string body = s.substr(open + 1, s.size() - open - 2);
  std::size_t pos = 0;
  while (pos <= body.size()) {
    std::size_t comma = body.find(',', pos);
    if (comma == std::string::npos) comma = body.size();
    const std::string tok = strip(body.substr(pos, comma - pos));
    if (!tok.empty()) {
      const std::size_t eq = tok.find('=');
      if (eq == std::string::npos) {
        if (!p.named.empty())
          throw ConfigError("positional argument after named one in \"" + spec + "\"");
        p.positional.push_back(parse_number(tok, spec));
      } else {
        p.named.emplace_back(strip(tok.substr(0, eq)), parse_number(strip(tok.substr(eq + 1)), spec));
      }
    }
    if (comma == body.size()) break;
    pos = comma + 1;
  }
  return p;
}

// Associated Legendre values without the Condon-Shortley phase, l <= 4.
double legendre_lm(int l, int m, double x, double s) {
  switch (l * 10 + m) {
    case 10:
      return x;
    case 11:
      return s;
    case 20:
      return 0.5 * (3.0 * x * x - 1.0);
    case 21:
      return 3.0 * x * s;
    case 22:
      return 3.0 * s * s;
    case 30:
      return 0.5 * x * (5.0 * x * x - 3.0);
    case 31:
      return 1.5 * s * (5.0 * x * x - 1.0);
    case 32:
      return 15.0 * x * s * s;
    case 33:
      return 15.0 * s * s * s;
    case 40:
      return 0.125 * (35.0 * x * x * x * x - 30.0 * x * x + 3.0);
    case 41:
      return 2.5 * s * x * (7.0 * x * x - 3.0);
    case 42:
      return 7.5 * s * s * (7.0 * x * x - 1.0);
    case 43:
      return 105.0 * x * s * s * s;
    case 44:
      return 105.0 * s * s * s * s;
    default:
      throw ConfigError("harmonic index (l=" + std::to_string(l) + ", m=" + std::to_string(m) +
                        ") outside the supported table (1 <= l <= 4, 0 <= m <= l)");
  }
}

void validate_shape(const SpaceForm& sf, const SphereGrid& grid, std::span<const double> rho) {
  // build_geometry performs the domain and star-shapedness gates and names
  // the offending node on failure.
  (void)build_geometry(sf, grid, rho);
}

std::vector<double> evaluate_basis_shape(const SphereGrid& grid, double r0,
                                         const std::vector<std::tuple<int, int, bool, double>>& terms) {
  std::vector<double> rho(grid.node_count());
  if (grid.dim == 1) {
    for (int j = 0; j < grid.n_theta; ++j) {
      double v = 1.0;
      for (const auto& [l, m, sine, c] : terms)
        v += c * (sine ? std::sin(m * grid.theta[j]) : std::cos(m * grid.theta[j]));
      rho[j] = r0 * v;
    }
    return rho;
  }
  for (int i = 0; i < grid.n_theta; ++i) {
    for (int j = 0; j < grid.n_phi; ++j) {
      const double phi_angle = j * grid.dphi;
      double v = 1.0;
      for (const auto& [l, m, sine, c] : terms)
        v += c * surface_harmonic(l, m, sine, grid.theta[i], phi_angle);
      rho[grid.index(i, j)] = r0 * v;
    }
  }
  return rho;
}

}  // namespace

double surface_harmonic(int l, int m, bool sine, double theta, double phi) {
  if (l < 1 || l > 4 || m < 0 || m > l || (sine && m == 0))
    throw ConfigError("bad harmonic index l=" + std::to_string(l) + " m=" + std::to_string(m));
  const double p = legendre_lm(l, m, std::cos(theta), std::sin(theta));
  if (m == 0) return p;
  return p * (sine ? std::sin(m * phi) : std::cos(m * phi));
}

double ellipsoid_radius(std::span<const double> semi_axes, double theta, double phi, int dim) {
  double q;
  if (dim == 1) {
    const double c = std::cos(theta) / semi_axes[0];
    const double s = std::sin(theta) / semi_axes[1];
    q = c * c + s * s;
  } else {
    const double x = std::sin(theta) * std::cos(phi) / semi_axes[0];
    const double y = std::sin(theta) * std::sin(phi) / semi_axes[1];
    const double z = std::cos(theta) / semi_axes[2];
    q = x * x + y * y + z * z;
  }
  return 1.0 / std::sqrt(q);
}

std::vector<double> build_initial_shape(const std::string& spec, const SphereGrid& grid,
                                        const SpaceForm& sf, std::uint64_t default_seed) {
  const ParsedSpec p = parse_spec(spec);

  if (p.name == "sphere") {
    if (p.positional.size() != 1 || !p.named.empty())
      throw ConfigError("sphere(r) takes exactly one radius");
    const double r = p.positional[0];
    if (!sf.in_domain(r)) throw ConfigError("sphere radius outside the space-form domain");
    std::vector<double> rho(grid.node_count(), r);
    validate_shape(sf, grid, rho);
    return rho;
  }

  if (p.name == "ellipsoid") {
    if (sf.curvature != 0)
      throw ConfigError("ellipsoid shapes are exact polar graphs in Euclidean space only");
    const std::size_t want = grid.dim + 1;
    if (p.positional.size() != want || !p.named.empty())
      throw ConfigError("ellipsoid needs " + std::to_string(want) + " semi-axes for n = " +
                        std::to_string(grid.dim));
    for (const double a : p.positional)
      if (!(a > 0.0)) throw ConfigError("ellipsoid semi-axes must be positive");
    std::vector<double> rho(grid.node_count());
    if (grid.dim == 1) {
      for (int j = 0; j < grid.n_theta; ++j)
        rho[j] = ellipsoid_radius(p.positional, grid.theta[j], 0.0, 1);
    } else {
      for (int i = 0; i < grid.n_theta; ++i)
        for (int j = 0; j < grid.n_phi; ++j)
          rho[grid.index(i, j)] = ellipsoid_radius(p.positional, grid.theta[i], j * grid.dphi, 2);
    }
    validate_shape(sf, grid, rho);
    return rho;
  }

  if (p.name == "fourier" || p.name == "harmonic") {
    const bool is_fourier = p.name == "fourier";
    if (is_fourier && grid.dim != 1) throw ConfigError("fourier shapes are for n = 1");
    if (!is_fourier && grid.dim != 2) throw ConfigError("harmonic shapes are for n = 2");
    double r0 = 1.0;
    bool have_r0 = false;
    if (p.positional.size() == 1) {
      r0 = p.positional[0];
      have_r0 = true;
    } else if (!p.positional.empty()) {
      throw ConfigError(p.name + " takes at most one positional argument (r0)");
    }
    std::vector<std::tuple<int, int, bool, double>> terms;
    for (const auto& [key, value] : p.named) {
      if (key == "r0") {
        if (have_r0) throw ConfigError("duplicate r0 in \"" + spec + "\"");
        r0 = value;
        have_r0 = true;
        continue;
      }
      if (is_fourier) {
        if (key.size() < 2 || (key[0] != 'a' && key[0] != 'b'))
          throw ConfigError("fourier keys are a<m> / b<m>, got \"" + key + "\"");
        const int m = std::stoi(key.substr(1));
        if (m < 1 || m > grid.n_theta / 4)
          throw ConfigError("fourier mode " + std::to_string(m) + " out of range for this grid");
        terms.emplace_back(0, m, key[0] == 'b', value);
      } else {
        if (key.size() != 3 || (key[0] != 'e' && key[0] != 'f'))
          throw ConfigError("harmonic keys are e<l><m> / f<l><m>, got \"" + key + "\"");
        const int l = key[1] - '0', m = key[2] - '0';
        const bool sine = key[0] == 'f';
        if (sine && m == 0) throw ConfigError("f<l>0 terms vanish identically");
        if (l < 1 || l > 4 || m < 0 || m > l)
          throw ConfigError("harmonic index out of table range in \"" + key + "\"");
        terms.emplace_back(l, m, sine, value);
      }
    }
    if (!have_r0) throw ConfigError(p.name + " shape needs r0");
    if (!(r0 > 0.0)) throw ConfigError("r0 must be positive");
    std::vector<double> rho = evaluate_basis_shape(grid, r0, terms);
    validate_shape(sf, grid, rho);
    return rho;
  }

  if (p.name == "random") {
    if (p.positional.size() < 3 || p.positional.size() > 4 || !p.named.empty())
      throw ConfigError("random(r0, amp, lmax[, seed])");
    const double r0 = p.positional[0], amp = p.positional[1];
    const int lmax = static_cast<int>(p.positional[2]);
    const std::uint64_t seed =
        p.positional.size() == 4 ? static_cast<std::uint64_t>(p.positional[3]) : default_seed;
    if (!(r0 > 0.0) || !(amp >= 0.0)) throw ConfigError("random shape needs r0 > 0 and amp >= 0");
    if (lmax < 1 || (grid.dim == 2 && lmax > 4))
      throw ConfigError("random lmax out of range (n = 2 supports l <= 4)");

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::vector<std::tuple<int, int, bool, double>> terms;
    if (grid.dim == 1) {
      for (int m = 1; m <= lmax; ++m) {
        terms.emplace_back(0, m, false, unit(rng) / (1.0 + m * m));
        terms.emplace_back(0, m, true, unit(rng) / (1.0 + m * m));
      }
    } else {
      for (int l = 1; l <= lmax; ++l)
        for (int m = 0; m <= l; ++m) {
          terms.emplace_back(l, m, false, unit(rng) / (1.0 + l * l));
          if (m >= 1) terms.emplace_back(l, m, true, unit(rng) / (1.0 + l * l));
        }
    }
    // Normalize the perturbation sup to amp, then halve until admissible.
    std::vector<double> rho = evaluate_basis_shape(grid, r0, terms);
    double sup = 0.0;
    for (const double v : rho) sup = std::max(sup, std::abs(v / r0 - 1.0));
    if (sup > 0.0 && amp > 0.0) {
      const double scale = amp / sup;
      for (auto& [l, m, sine, c] : terms) c *= scale;
    } else {
      for (auto& [l, m, sine, c] : terms) c = 0.0;
    }
    for (int attempt = 0; attempt < 60; ++attempt) {
      rho = evaluate_basis_shape(grid, r0, terms);
      try {
        validate_shape(sf, grid, rho);
        return rho;
      } catch (const ValidationError&) {
        for (auto& [l, m, sine, c] : terms) c *= 0.5;  // clip toward the round sphere
      }
    }
    throw ConfigError("random shape could not be clipped to an admissible field");
  }

  throw ConfigError("unknown shape \"" + p.name + "\"");
}

}  // namespace curvflow
