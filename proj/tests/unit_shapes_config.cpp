#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "curvflow/config.hpp"
#include "curvflow/errors.hpp"
#include "curvflow/geometry.hpp"
#include "curvflow/shapes.hpp"

using namespace curvflow;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("sphere and fourier shapes evaluate exactly at the nodes") {
  const SphereGrid c = SphereGrid::circle(256);
  const SpaceForm E = SpaceForm::euclidean();

  const auto sph = build_initial_shape("sphere(1)", c, E, 0);
  for (const double v : sph) CHECK(v == 1.0);

  const auto f = build_initial_shape("fourier(r0=1, a2=0.2)", c, E, 0);
  CHECK(f[0] == doctest::Approx(1.2).epsilon(1e-15));           // theta = 0
  CHECK(f[256 / 4] == doctest::Approx(0.8).epsilon(1e-14));     // theta = pi/2
  CHECK(f[256 / 2] == doctest::Approx(1.2).epsilon(1e-14));     // theta = pi

  const auto fb = build_initial_shape("fourier(r0=2, a1=0.1, b3=-0.05)", c, E, 0);
  for (int j = 0; j < c.n_theta; ++j) {
    const double t = c.theta[j];
    CHECK(fb[j] ==
          doctest::Approx(2.0 * (1.0 + 0.1 * std::cos(t) - 0.05 * std::sin(3 * t))).epsilon(1e-14));
  }
}

TEST_CASE("harmonic shapes match the Legendre table") {
  const SphereGrid g = SphereGrid::sphere(24, 48);
  const SpaceForm E = SpaceForm::euclidean();
  const auto f = build_initial_shape("harmonic(r0=1, e10=0.2)", g, E, 0);
  for (int i = 0; i < g.n_theta; ++i)
    for (int j = 0; j < g.n_phi; ++j)
      CHECK(f[g.index(i, j)] == doctest::Approx(1.0 + 0.2 * g.cos_theta[i]).epsilon(1e-14));

  const auto f2 = build_initial_shape("harmonic(r0=1, f21=0.05)", g, E, 0);
  for (int i = 0; i < g.n_theta; ++i)
    for (int j = 0; j < g.n_phi; ++j) {
      const double want =
          1.0 + 0.05 * 3.0 * g.cos_theta[i] * g.sin_theta[i] * std::sin(j * g.dphi);
      CHECK(f2[g.index(i, j)] == doctest::Approx(want).epsilon(1e-13));
    }

  CHECK(surface_harmonic(2, 0, false, kPi / 2, 0.0) == doctest::Approx(-0.5));
  CHECK(surface_harmonic(4, 4, false, kPi / 2, 0.0) == doctest::Approx(105.0));
  CHECK_THROWS_AS(surface_harmonic(5, 0, false, 1.0, 0.0), ConfigError);
  CHECK_THROWS_AS(surface_harmonic(2, 3, false, 1.0, 0.0), ConfigError);
}

TEST_CASE("ellipsoid shapes") {
  const SpaceForm E = SpaceForm::euclidean();
  const SphereGrid g = SphereGrid::sphere(96, 192);
  const auto f = build_initial_shape("ellipsoid(1,1,1.5)", g, E, 0);
  CHECK(std::abs(f[g.index(0, 0)] - 1.5) < 1e-3);  // node nearest the pole
  const int eq = g.n_theta / 2;
  CHECK(std::abs(f[g.index(eq, 0)] - 1.0) < 1e-3);

  CHECK_THROWS_AS(build_initial_shape("ellipsoid(1,1,1.5)", g, SpaceForm::sphere(), 0),
                  ConfigError);
  CHECK_THROWS_AS(build_initial_shape("ellipsoid(1,1)", g, E, 0), ConfigError);  // n=2 wants 3 axes
  CHECK_THROWS_AS(build_initial_shape("ellipsoid(1,-2,1)", g, E, 0), ConfigError);

  const SphereGrid c = SphereGrid::circle(64);
  const auto e = build_initial_shape("ellipsoid(2,1)", c, E, 0);
  CHECK(e[0] == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(e[16] == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("random shapes are deterministic, bounded, and admissible") {
  const SphereGrid g = SphereGrid::sphere(24, 48);
  const SpaceForm E = SpaceForm::euclidean();
  const auto a = build_initial_shape("random(1,0.25,3)", g, E, 42);
  const auto b = build_initial_shape("random(1,0.25,3)", g, E, 42);
  const auto other = build_initial_shape("random(1,0.25,3)", g, E, 43);
  CHECK(a == b);
  double diff = 0;
  for (std::size_t k = 0; k < a.size(); ++k) diff = std::max(diff, std::abs(a[k] - other[k]));
  CHECK(diff > 1e-4);
  double sup = 0;
  for (const double v : a) sup = std::max(sup, std::abs(v - 1.0));
  CHECK(sup <= 0.25 + 1e-12);
  CHECK_NOTHROW(build_geometry(E, g, a));

  // The in-spec seed argument overrides the config seed.
  const auto c = build_initial_shape("random(1,0.25,3,42)", g, E, 7);
  CHECK(c == a);

  // Violent amplitudes get clipped back to an admissible field.
  const auto clipped = build_initial_shape("random(1,0.95,4)", g, E, 5);
  CHECK_NOTHROW(build_geometry(E, g, clipped));
}

TEST_CASE("malformed shape specs are rejected") {
  const SphereGrid g = SphereGrid::sphere(8, 16);
  const SphereGrid c = SphereGrid::circle(32);
  const SpaceForm E = SpaceForm::euclidean();
  for (const char* bad :
       {"blob(1)", "sphere()", "sphere(1", "sphere(1,2)", "fourier(r0=1,z2=0.1)",
        "harmonic(r0=1,e55=0.1)", "harmonic(r0=1,f20=0.1)", "sphere(-1)", "random(1,0.2)",
        "fourier(a1=0.2)", "sphere(abc)"}) {
    CHECK_THROWS_AS(build_initial_shape(bad, bad[0] == 'f' && bad[1] == 'o' ? c : g, E, 0),
                    ConfigError);
  }
  // Shapes must also live in the space-form domain.
  CHECK_THROWS(build_initial_shape("sphere(4)", g, SpaceForm::sphere(), 0));
  // harmonic is n=2 only, fourier n=1 only.
  CHECK_THROWS_AS(build_initial_shape("harmonic(r0=1,e10=0.1)", c, E, 0), ConfigError);
  CHECK_THROWS_AS(build_initial_shape("fourier(r0=1,a1=0.1)", g, E, 0), ConfigError);
}

TEST_CASE("experiment config parsing") {
  const std::string good = R"json({
    "space_form": "euclidean",
    "dim": 2,
    "resolution": [48, 96],
    "initial_shape": "ellipsoid(1,1,1.5)",
    "t_end": 2.5,
    "output_dir": "out"
  })json";

  SUBCASE("defaults are applied and the echo round-trips") {
    const ExperimentConfig cfg = ExperimentConfig::from_json_text(good);
    CHECK(cfg.formulation == "direct");
    CHECK(cfg.time_scheme == "rk2");
    CHECK(cfg.cfl_factor == 0.2);
    CHECK(cfg.grad_tol == 1e-8);
    CHECK(cfg.record_every == 50);
    CHECK(cfg.emit_plots == false);
    CHECK(cfg.seed == 0);
    const ExperimentConfig back = ExperimentConfig::from_json_text(cfg.to_json_text());
    CHECK(back == cfg);
  }

  SUBCASE("n=1 resolution form") {
    std::string one = good;
    one.replace(one.find("\"dim\": 2"), 8, "\"dim\": 1");
    one.replace(one.find("[48, 96]"), 8, "256");
    one.replace(one.find("ellipsoid(1,1,1.5)"), 18, "ellipsoid(1.5,1.0)");
    const ExperimentConfig cfg = ExperimentConfig::from_json_text(one);
    CHECK(cfg.n_theta == 256);
    CHECK(cfg.n_phi == 1);
    const ExperimentConfig back = ExperimentConfig::from_json_text(cfg.to_json_text());
    CHECK(back == cfg);
  }

  SUBCASE("unknown keys are errors, no silent typo tolerance") {
    std::string bad = good;
    bad.insert(bad.rfind('}'), R"(, "cfl": 0.1)");
    CHECK_THROWS_AS(ExperimentConfig::from_json_text(bad), ConfigError);
  }

  SUBCASE("missing required keys are errors") {
    for (const char* key : {"space_form", "dim", "resolution", "initial_shape", "t_end",
                            "output_dir"}) {
      std::string bad = good;
      const auto pos = bad.find("\"" + std::string(key) + "\"");
      const auto end = bad.find_first_of(",}", bad.find(':', pos));
      bad.erase(pos, end - pos);
      if (bad[bad.find_first_not_of(" \n", bad.find('{') + 1)] == ',')
        bad.erase(bad.find(','), 1);
      CHECK_THROWS_AS(ExperimentConfig::from_json_text(bad), ConfigError);
    }
  }

  SUBCASE("range and type violations are errors") {
    auto reject = [&](const std::string& patch_key, const std::string& patch_value) {
      std::string bad = good;
      bad.insert(bad.rfind('}'), ", \"" + patch_key + "\": " + patch_value);
      CHECK_THROWS_AS(ExperimentConfig::from_json_text(bad), ConfigError);
    };
    reject("cfl_factor", "0.8");
    reject("cfl_factor", "0");
    reject("grad_tol", "-1");
    reject("record_every", "0");
    reject("formulation", "\"upwind\"");
    reject("time_scheme", "\"rk4\"");
    reject("emit_snapshots_every", "-2");
    reject("emit_plots", "1");

    std::string bad_dim = good;
    bad_dim.replace(bad_dim.find("\"dim\": 2"), 8, "\"dim\": 3");
    CHECK_THROWS_AS(ExperimentConfig::from_json_text(bad_dim), ConfigError);

    std::string bad_res = good;
    bad_res.replace(bad_res.find("[48, 96]"), 8, "48");
    CHECK_THROWS_AS(ExperimentConfig::from_json_text(bad_res), ConfigError);

    std::string bad_form = good;
    bad_form.replace(bad_form.find("euclidean"), 9, "flatland");
    CHECK_THROWS_AS(ExperimentConfig::from_json_text(bad_form), ConfigError);

    CHECK_THROWS_AS(ExperimentConfig::from_json_text("not json at all"), ConfigError);
    CHECK_THROWS_AS(ExperimentConfig::from_json_text("[1,2,3]"), ConfigError);
    CHECK_THROWS_AS(ExperimentConfig::from_file("/nonexistent/config.json"), ConfigError);
  }
}
