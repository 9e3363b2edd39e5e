#pragma once

#include "fastice/params.hpp"
#include "fastice/tensor.hpp"

namespace fastice {

// Constant external velocities plus per-term switches. The momentum solve
// owns the sign conventions; these functions return the raw laws.
struct ForcingInputs {
  Vec2 v_a{0.0, 0.0};
  Vec2 v_o{0.0, 0.0};
  bool ocean_drag = true;
  bool coriolis = true;
  bool tilt = true;
  bool basal = true;
};

ForcingInputs forcing_from(const ScenarioSpec& spec);

// f_a = C_a rho_a |v_a| v_a
Vec2 wind_stress(const Vec2& v_a, const Params& p);

// Raw quadratic relative drag C_o rho_o |v - v_o| (v - v_o). The residual
// evaluates it with argument (v_o - v) so that drag opposes relative motion.
Vec2 ocean_stress(const Vec2& v, const Vec2& v_o, const Params& p);

// f_c = -rho h f k x v
Vec2 coriolis(const Vec2& v, double h, const Params& p);

// f_sh ~ C_cor k x v_o (the tilt approximation; no density factor).
Vec2 surface_tilt(const Vec2& v_o, const Params& p);

// f_b = 0 for h <= h_crit, else -k2 (h - h_crit) exp(-alpha_b (1-A)) v/(|v|+v0).
// Continuous in h across h_crit; always opposes v.
Vec2 basal_stress(const Vec2& v, double h, double A, const Params& p);

}  // namespace fastice
