#include "fastice/forcing.hpp"

#include <cmath>

namespace fastice {

ForcingInputs forcing_from(const ScenarioSpec& spec) {
  ForcingInputs f;
  f.v_a = spec.wind;
  f.v_o = spec.ocean_velocity;
  f.ocean_drag = spec.use_ocean_drag;
  f.coriolis = spec.use_coriolis;
  f.tilt = spec.use_tilt;
  f.basal = spec.use_basal;
  return f;
}

Vec2 wind_stress(const Vec2& v_a, const Params& p) {
  return p.C_a * p.rho_a * v_a.norm() * v_a;
}

Vec2 ocean_stress(const Vec2& v, const Vec2& v_o, const Params& p) {
  const Vec2 rel = v - v_o;
  return p.C_o * p.rho_o * rel.norm() * rel;
}

Vec2 coriolis(const Vec2& v, double h, const Params& p) {
  return -p.rho * h * p.C_cor * rot90(v);
}

Vec2 surface_tilt(const Vec2& v_o, const Params& p) {
  return p.C_cor * rot90(v_o);
}

Vec2 basal_stress(const Vec2& v, double h, double A, const Params& p) {
  if (h <= p.h_crit) return {0.0, 0.0};
  const double speed = v.norm();
  const double scale =
      p.k2 * (h - p.h_crit) * std::exp(-p.alpha_b * (1.0 - A)) / (speed + p.v0);
  return v * -scale;
}

}  // namespace fastice
