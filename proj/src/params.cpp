#include "fastice/params.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace fastice {

namespace {

using nlohmann::json;

[[noreturn]] void invalid(const std::string& what) {
  throw std::invalid_argument(what);
}

void require_positive(double v, const char* name) {
  if (!(v > 0.0)) invalid(std::string(name) + " must be strictly positive");
}

void require_nonnegative(double v, const char* name) {
  if (!(v >= 0.0)) invalid(std::string(name) + " must be nonnegative");
}

void require_finite(double v, const char* name) {
  if (!std::isfinite(v)) invalid(std::string(name) + " must be finite");
}

}  // namespace

void Params::validate() const {
  if (!(k_t >= 0.0 && k_t <= 1.0)) invalid("k_t out of [0,1]");
  require_positive(e, "e");
  if (!(e >= 1.0)) invalid("e must be >= 1");
  require_positive(rho, "rho");
  require_positive(rho_a, "rho_a");
  require_positive(rho_o, "rho_o");
  require_positive(P_star, "P_star");
  require_positive(c_star, "c_star");
  require_positive(alpha_b, "alpha_b");
  require_positive(v0, "v0");
  require_positive(delta_min, "delta_min");
  require_nonnegative(k2, "k2");
  require_nonnegative(d_h, "d_h");
  require_nonnegative(d_A, "d_A");
  require_nonnegative(C_a, "C_a");
  require_nonnegative(C_o, "C_o");
  require_finite(C_cor, "C_cor");
  require_positive(h_crit, "h_crit");
  require_positive(h_min, "h_min");
  if (!(A_min >= 0.0 && A_min <= 1.0)) invalid("A_min out of [0,1]");
  if (!(polynya_threshold >= 0.0 && polynya_threshold <= 1.0))
    invalid("polynya_threshold out of [0,1]");
}

void ScenarioSpec::validate() const {
  if (!(dt > 0.0)) invalid("dt must be strictly positive");
  if (!(duration >= dt)) invalid("duration shorter than one step");
  if (cells_per_side < 2) invalid("cells_per_side must be >= 2");
  if (!(domain_length > 0.0)) invalid("domain_length must be strictly positive");
  require_finite(wind.x, "wind.x");
  require_finite(wind.y, "wind.y");
  require_finite(ocean_velocity.x, "ocean_velocity.x");
  require_finite(ocean_velocity.y, "ocean_velocity.y");
  if (initial_condition != "uniform" && initial_condition != "sine_thickness")
    invalid("unknown initial_condition '" + initial_condition + "'");
  if (initial_velocity_mode != "both" && initial_velocity_mode != "x_only")
    invalid("unknown initial_velocity_mode '" + initial_velocity_mode + "'");
  if (!(A0 >= 0.0 && A0 <= 1.0)) invalid("A0 out of [0,1]");
  if (!(h0_base >= 0.0)) invalid("h0_base must be nonnegative");
  require_finite(h0_amplitude, "h0_amplitude");
  require_finite(v0_amplitude, "v0_amplitude");
  if (!(snapshot_interval > 0.0)) invalid("snapshot_interval must be strictly positive");
}

void SolverConfig::validate() const {
  if (max_iters < 1) invalid("max_iters must be >= 1");
  if (!(rtol > 0.0 && rtol < 1.0)) invalid("rtol out of (0,1)");
  if (!(linear_tol > 0.0 && linear_tol < 1.0)) invalid("linear_tol out of (0,1)");
  if (!(atol >= 0.0)) invalid("atol must be nonnegative");
  if (picard_iters < 0) invalid("picard_iters must be nonnegative");
  if (!(min_damping > 0.0 && min_damping <= 1.0)) invalid("min_damping out of (0,1]");
}

Config preset(const std::string& name) {
  Config c;
  c.params.h_crit = 2.5;  // all named experiments use the deeper grounding line
  c.scenario.cells_per_side = 64;
  c.scenario.domain_length = 512e3;
  c.scenario.dt = 1800.0;
  c.scenario.use_coriolis = false;
  c.scenario.use_tilt = false;
  c.scenario.A0 = 1.0;

  if (name == "ex1_lfi" || name == "ex1_vp") {
    c.scenario.name = name;
    c.scenario.wind = {20.0, 0.0};
    c.scenario.duration = 2 * 86400.0;
    c.scenario.initial_condition = "sine_thickness";
    c.scenario.h0_base = 2.5;
    c.scenario.h0_amplitude = 1.0;
    c.scenario.v0_amplitude = 0.0;
    if (name == "ex1_vp") {
      c.params.k_t = 0.0;
      c.params.k2 = 0.0;
    }
  } else if (name == "ex2_unforced") {
    c.scenario.name = name;
    c.scenario.wind = {0.0, 0.0};
    c.scenario.ocean_velocity = {0.0, 0.0};
    c.scenario.use_ocean_drag = false;
    c.scenario.duration = 22 * 86400.0;
    c.scenario.initial_condition = "sine_thickness";
    c.scenario.h0_base = 2.5;
    c.scenario.h0_amplitude = 0.5;
    c.scenario.v0_amplitude = 0.05;
  } else if (name == "ex3_constant_wind") {
    c.scenario.name = name;
    c.scenario.wind = {20.0, 0.0};
    c.scenario.duration = 27 * 86400.0;
    c.scenario.initial_condition = "sine_thickness";
    c.scenario.h0_base = 2.5;
    c.scenario.h0_amplitude = 0.5;
    c.scenario.v0_amplitude = 0.0;
  } else {
    invalid("unknown preset '" + name + "'");
  }
  c.params.validate();
  c.scenario.validate();
  c.solver.validate();
  return c;
}

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = {
      "ex1_vp", "ex1_lfi", "ex2_unforced", "ex3_constant_wind"};
  return names;
}

namespace {

// Each reader checks off the keys it consumes so typos fail loudly.
class ObjectReader {
 public:
  ObjectReader(const json& obj, std::string where)
      : obj_(obj), where_(std::move(where)) {
    if (!obj.is_object()) invalid(where_ + " must be a JSON object");
  }

  void get(const char* key, double& out) {
    if (auto it = take(key)) out = it->get<double>();
  }
  void get(const char* key, int& out) {
    if (auto it = take(key)) out = it->get<int>();
  }
  void get(const char* key, bool& out) {
    if (auto it = take(key)) out = it->get<bool>();
  }
  void get(const char* key, std::string& out) {
    if (auto it = take(key)) out = it->get<std::string>();
  }
  void get(const char* key, Vec2& out) {
    if (auto it = take(key)) {
      if (!it->is_array() || it->size() != 2)
        invalid(where_ + "." + key + " must be a [x, y] array");
      out = {(*it)[0].get<double>(), (*it)[1].get<double>()};
    }
  }

  void finish() const {
    for (auto it = obj_.begin(); it != obj_.end(); ++it) {
      if (!seen_.count(it.key()))
        invalid("unknown key '" + it.key() + "' in " + where_);
    }
  }

 private:
  const json* take(const char* key) {
    seen_.insert(key);
    auto it = obj_.find(key);
    return it == obj_.end() ? nullptr : &*it;
  }

  const json& obj_;
  std::string where_;
  std::set<std::string> seen_;
};

void read_params(const json& j, Params& p) {
  ObjectReader r(j, "params");
  r.get("e", p.e);
  r.get("k_t", p.k_t);
  r.get("h_crit", p.h_crit);
  r.get("k2", p.k2);
  r.get("alpha_b", p.alpha_b);
  r.get("v0", p.v0);
  r.get("rho", p.rho);
  r.get("rho_a", p.rho_a);
  r.get("rho_o", p.rho_o);
  r.get("C_a", p.C_a);
  r.get("C_o", p.C_o);
  r.get("C_cor", p.C_cor);
  r.get("P_star", p.P_star);
  r.get("c_star", p.c_star);
  r.get("delta_min", p.delta_min);
  r.get("d_h", p.d_h);
  r.get("d_A", p.d_A);
  r.get("h_min", p.h_min);
  r.get("A_min", p.A_min);
  r.get("polynya_threshold", p.polynya_threshold);
  std::string form = p.delta_form == DeltaForm::Triangle ? "triangle" : "deviatoric";
  r.get("delta_form", form);
  if (form == "triangle") {
    p.delta_form = DeltaForm::Triangle;
  } else if (form == "deviatoric") {
    p.delta_form = DeltaForm::Deviatoric;
  } else {
    invalid("params.delta_form must be 'triangle' or 'deviatoric'");
  }
  r.finish();
}

void read_scenario(const json& j, ScenarioSpec& s) {
  ObjectReader r(j, "scenario");
  r.get("name", s.name);
  r.get("domain_length", s.domain_length);
  r.get("cells_per_side", s.cells_per_side);
  r.get("dt", s.dt);
  r.get("duration", s.duration);
  r.get("wind", s.wind);
  r.get("ocean_velocity", s.ocean_velocity);
  r.get("use_ocean_drag", s.use_ocean_drag);
  r.get("use_coriolis", s.use_coriolis);
  r.get("use_tilt", s.use_tilt);
  r.get("use_basal", s.use_basal);
  r.get("use_tensile", s.use_tensile);
  r.get("initial_condition", s.initial_condition);
  r.get("h0_base", s.h0_base);
  r.get("h0_amplitude", s.h0_amplitude);
  r.get("A0", s.A0);
  r.get("v0_amplitude", s.v0_amplitude);
  r.get("initial_velocity_mode", s.initial_velocity_mode);
  r.get("snapshot_interval", s.snapshot_interval);
  r.finish();
}

void read_solver(const json& j, SolverConfig& c) {
  ObjectReader r(j, "solver");
  r.get("max_iters", c.max_iters);
  r.get("rtol", c.rtol);
  r.get("atol", c.atol);
  r.get("picard_iters", c.picard_iters);
  r.get("newton", c.newton);
  r.get("linear_tol", c.linear_tol);
  r.get("min_damping", c.min_damping);
  r.finish();
}

}  // namespace

Config parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(std::string("config parse error: ") + e.what());
  }
  if (!j.is_object()) throw std::runtime_error("config root must be a JSON object");

  Config c;
  if (j.contains("preset")) {
    c = preset(j["preset"].get<std::string>());
  }
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& key = it.key();
    if (key == "preset") continue;
    if (key == "params") {
      read_params(*it, c.params);
    } else if (key == "scenario") {
      read_scenario(*it, c.scenario);
    } else if (key == "solver") {
      read_solver(*it, c.solver);
    } else {
      invalid("unknown top-level key '" + key + "'");
    }
  }
  c.params.validate();
  c.scenario.validate();
  c.solver.validate();
  return c;
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string serialize_config(const Config& c) {
  json j;
  json& p = j["params"];
  p["e"] = c.params.e;
  p["k_t"] = c.params.k_t;
  p["h_crit"] = c.params.h_crit;
  p["k2"] = c.params.k2;
  p["alpha_b"] = c.params.alpha_b;
  p["v0"] = c.params.v0;
  p["rho"] = c.params.rho;
  p["rho_a"] = c.params.rho_a;
  p["rho_o"] = c.params.rho_o;
  p["C_a"] = c.params.C_a;
  p["C_o"] = c.params.C_o;
  p["C_cor"] = c.params.C_cor;
  p["P_star"] = c.params.P_star;
  p["c_star"] = c.params.c_star;
  p["delta_min"] = c.params.delta_min;
  p["d_h"] = c.params.d_h;
  p["d_A"] = c.params.d_A;
  p["h_min"] = c.params.h_min;
  p["A_min"] = c.params.A_min;
  p["polynya_threshold"] = c.params.polynya_threshold;
  p["delta_form"] = c.params.delta_form == DeltaForm::Triangle ? "triangle" : "deviatoric";

  json& s = j["scenario"];
  s["name"] = c.scenario.name;
  s["domain_length"] = c.scenario.domain_length;
  s["cells_per_side"] = c.scenario.cells_per_side;
  s["dt"] = c.scenario.dt;
  s["duration"] = c.scenario.duration;
  s["wind"] = {c.scenario.wind.x, c.scenario.wind.y};
  s["ocean_velocity"] = {c.scenario.ocean_velocity.x, c.scenario.ocean_velocity.y};
  s["use_ocean_drag"] = c.scenario.use_ocean_drag;
  s["use_coriolis"] = c.scenario.use_coriolis;
  s["use_tilt"] = c.scenario.use_tilt;
  s["use_basal"] = c.scenario.use_basal;
  s["use_tensile"] = c.scenario.use_tensile;
  s["initial_condition"] = c.scenario.initial_condition;
  s["h0_base"] = c.scenario.h0_base;
  s["h0_amplitude"] = c.scenario.h0_amplitude;
  s["A0"] = c.scenario.A0;
  s["v0_amplitude"] = c.scenario.v0_amplitude;
  s["initial_velocity_mode"] = c.scenario.initial_velocity_mode;
  s["snapshot_interval"] = c.scenario.snapshot_interval;

  json& v = j["solver"];
  v["max_iters"] = c.solver.max_iters;
  v["rtol"] = c.solver.rtol;
  v["atol"] = c.solver.atol;
  v["picard_iters"] = c.solver.picard_iters;
  v["newton"] = c.solver.newton;
  v["linear_tol"] = c.solver.linear_tol;
  v["min_damping"] = c.solver.min_damping;

  return j.dump(2);
}

}  // namespace fastice
