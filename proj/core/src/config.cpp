#include "curvflow/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "curvflow/errors.hpp"

namespace curvflow {

namespace {

using json = nlohmann::ordered_json;

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "space_form",  "dim",           "resolution",  "initial_shape",
      "formulation", "time_scheme",   "cfl_factor",  "t_end",
      "grad_tol",    "record_every",  "output_dir",  "emit_plots",
      "emit_snapshots_every", "seed"};
  return keys;
}

[[noreturn]] void bad(const std::string& msg) { throw ConfigError("config: " + msg); }

double number_at(const json& j, const char* key) {
  if (!j.at(key).is_number()) bad(std::string(key) + " must be a number");
  return j.at(key).get<double>();
}

int int_at(const json& j, const char* key) {
  if (!j.at(key).is_number_integer()) bad(std::string(key) + " must be an integer");
  return j.at(key).get<int>();
}

std::string string_at(const json& j, const char* key) {
  if (!j.at(key).is_string()) bad(std::string(key) + " must be a string");
  return j.at(key).get<std::string>();
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    bad(std::string("not valid JSON: ") + e.what());
  }
  if (!j.is_object()) bad("top level must be an object");

  for (const auto& [key, value] : j.items()) {
    if (!known_keys().count(key)) bad("unknown key \"" + key + "\"");
  }
  for (const char* req : {"space_form", "dim", "resolution", "initial_shape", "t_end",
                          "output_dir"}) {
    if (!j.contains(req)) bad(std::string("missing required key \"") + req + "\"");
  }

  ExperimentConfig c;
  c.space_form = string_at(j, "space_form");
  try {
    SpaceForm::from_name(c.space_form);
  } catch (const std::exception& e) {
    bad(e.what());
  }
  c.dim = int_at(j, "dim");
  if (c.dim != 1 && c.dim != 2) bad("dim must be 1 or 2");

  const json& res = j.at("resolution");
  if (c.dim == 1) {
    if (!res.is_number_integer()) bad("resolution must be an integer node count for dim = 1");
    c.n_theta = res.get<int>();
    c.n_phi = 1;
  } else {
    if (!res.is_array() || res.size() != 2 || !res[0].is_number_integer() ||
        !res[1].is_number_integer())
      bad("resolution must be [n_theta, n_phi] for dim = 2");
    c.n_theta = res[0].get<int>();
    c.n_phi = res[1].get<int>();
  }

  c.initial_shape = string_at(j, "initial_shape");
  if (j.contains("formulation")) {
    c.formulation = string_at(j, "formulation");
    if (c.formulation != "direct" && c.formulation != "divergence")
      bad("formulation must be \"direct\" or \"divergence\"");
  }
  if (j.contains("time_scheme")) {
    c.time_scheme = string_at(j, "time_scheme");
    if (c.time_scheme != "euler" && c.time_scheme != "rk2")
      bad("time_scheme must be \"euler\" or \"rk2\"");
  }
  if (j.contains("cfl_factor")) c.cfl_factor = number_at(j, "cfl_factor");
  c.t_end = number_at(j, "t_end");
  if (j.contains("grad_tol")) c.grad_tol = number_at(j, "grad_tol");
  if (j.contains("record_every")) c.record_every = int_at(j, "record_every");
  c.output_dir = string_at(j, "output_dir");
  if (c.output_dir.empty()) bad("output_dir must not be empty");
  if (j.contains("emit_plots")) {
    if (!j.at("emit_plots").is_boolean()) bad("emit_plots must be a boolean");
    c.emit_plots = j.at("emit_plots").get<bool>();
  }
  if (j.contains("emit_snapshots_every")) {
    c.emit_snapshots_every = int_at(j, "emit_snapshots_every");
    if (c.emit_snapshots_every < 0) bad("emit_snapshots_every must be >= 0");
  }
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_integer()) bad("seed must be an integer");
    c.seed = j.at("seed").get<std::uint64_t>();
  }

  // Range checks that do not need the grid.
  try {
    c.make_flow_config().validate();
    c.make_grid();
  } catch (const std::exception& e) {
    bad(e.what());
  }
  return c;
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open \"" + path + "\"");
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str());
}

std::string ExperimentConfig::to_json_text() const {
  json j;
  j["space_form"] = space_form;
  j["dim"] = dim;
  if (dim == 1)
    j["resolution"] = n_theta;
  else
    j["resolution"] = json::array({n_theta, n_phi});
  j["initial_shape"] = initial_shape;
  j["formulation"] = formulation;
  j["time_scheme"] = time_scheme;
  j["cfl_factor"] = cfl_factor;
  j["t_end"] = t_end;
  j["grad_tol"] = grad_tol;
  j["record_every"] = record_every;
  j["output_dir"] = output_dir;
  j["emit_plots"] = emit_plots;
  j["emit_snapshots_every"] = emit_snapshots_every;
  j["seed"] = seed;
  return j.dump(2);
}

SpaceForm ExperimentConfig::make_space_form() const { return SpaceForm::from_name(space_form); }

SphereGrid ExperimentConfig::make_grid() const {
  return dim == 1 ? SphereGrid::circle(n_theta) : SphereGrid::sphere(n_theta, n_phi);
}

FlowConfig ExperimentConfig::make_flow_config() const {
  FlowConfig f;
  f.formulation = formulation == "divergence" ? Formulation::divergence : Formulation::direct;
  f.scheme = time_scheme == "euler" ? TimeScheme::euler : TimeScheme::rk2;
  f.cfl_factor = cfl_factor;
  f.t_end = t_end;
  f.grad_tol = grad_tol;
  f.record_every = record_every;
  return f;
}

}  // namespace curvflow
