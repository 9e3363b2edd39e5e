#pragma once

#include <string>
#include <vector>

#include "fastice/tensor.hpp"

namespace fastice {

// Invariant selection inside the regularized strain-rate measure.
// Triangle: d_I^2 + e^-2 (d_II^2 + 4 d_III^2); Deviatoric: (1/2) d':d'.
// The ellipticity checks require Triangle; the measure and the operator
// linearization must agree, so the form lives here, not in solver config.
enum class DeltaForm { Triangle, Deviatoric };

// Physical constants. Defaults are the reference parameter set; all units SI.
struct Params {
  double e = 2.0;           // yield-ellipse aspect ratio
  double k_t = 0.15;        // tensile strength fraction, in [0, 1]
  double h_crit = 2.0;      // grounding threshold thickness (m)
  double k2 = 5.0;          // max basal stress parameter (N m^-3)
  double alpha_b = 20.0;    // basal stress concentration parameter
  double v0 = 5e-8;         // basal stress velocity scale (m s^-1)
  double rho = 900.0;       // ice density (kg m^-3)
  double rho_a = 1.3;       // air density (kg m^-3)
  double rho_o = 1026.0;    // ocean density (kg m^-3)
  double C_a = 1.2e-3;      // air drag coefficient
  double C_o = 5.5e-3;      // ocean drag coefficient
  double C_cor = 1.46e-4;   // Coriolis parameter (s^-1)
  double P_star = 27.5e3;   // ice strength (N m^-2)
  double c_star = 20.0;     // strength concentration parameter
  double delta_min = 2e-9;  // strain-rate regularization floor (s^-1)
  double d_h = 0.0;         // thickness diffusivity (m^2 s^-1)
  double d_A = 0.0;         // concentration diffusivity (m^2 s^-1)

  DeltaForm delta_form = DeltaForm::Triangle;

  // Degenerate-mass handling in the momentum solve.
  double h_min = 1e-3;  // thickness floor inside the nodal mass (m)
  double A_min = 0.01;  // below this concentration a node is held at v = 0

  double polynya_threshold = 0.2;  // open water: A below this

  // Throws std::invalid_argument naming the violated invariant.
  void validate() const;
};

// One experiment: domain, discretization, forcing toggles, initial state.
struct ScenarioSpec {
  std::string name = "custom";
  double domain_length = 512e3;  // square domain side (m)
  int cells_per_side = 64;
  double dt = 1800.0;            // s
  double duration = 2 * 86400.0; // s

  Vec2 wind{0.0, 0.0};            // constant wind (m/s); zero disables f_a
  Vec2 ocean_velocity{0.0, 0.0};  // constant ocean current (m/s)
  bool use_ocean_drag = true;     // f_o (with v_o as configured)
  bool use_coriolis = true;       // f_c
  bool use_tilt = true;           // f_sh
  bool use_basal = true;          // f_b
  bool use_tensile = true;        // false forces k_t = 0 at run setup

  // Initial condition: "uniform" (h = h0_base) or "sine_thickness"
  // (h = h0_base - h0_amplitude * sin(pi x / L)). A is A0 everywhere.
  std::string initial_condition = "sine_thickness";
  double h0_base = 2.5;
  double h0_amplitude = 1.0;
  double A0 = 1.0;
  // v(x,y,0) = v0_amplitude * sin(pi x/L) * sin(pi y/L), applied to both
  // components ("both") or only the first ("x_only").
  double v0_amplitude = 0.0;
  std::string initial_velocity_mode = "both";

  double snapshot_interval = 43200.0;  // s

  void validate() const;
};

// Nonlinear momentum solve controls.
struct SolverConfig {
  int max_iters = 100;
  double rtol = 1e-8;          // relative residual tolerance
  double atol = 1e-12;         // absolute residual floor (N m^-2)
  int picard_iters = 5;        // frozen-coefficient iterations before Newton
  bool newton = true;          // false: Picard only
  double linear_tol = 1e-10;   // accepted linear-solve relative residual
  double min_damping = 1.0 / 1024.0;

  void validate() const;
};

struct Config {
  Params params;
  ScenarioSpec scenario;
  SolverConfig solver;
};

// Named experiment setups: ex1_vp, ex1_lfi, ex2_unforced, ex3_constant_wind.
// Pure: repeated calls return identical values. Throws on unknown name.
Config preset(const std::string& name);
const std::vector<std::string>& preset_names();

// JSON config I/O. Unknown keys are rejected; missing keys take defaults.
Config load_config(const std::string& path);
Config parse_config(const std::string& json_text);
std::string serialize_config(const Config& config);

}  // namespace fastice
