#pragma once

#include <cstdint>

#include "fastice/grid.hpp"

namespace fastice {

enum class TracerKind { Thickness, Concentration };

struct ClipStats {
  std::int64_t low = 0;   // entries raised to the lower bound
  std::int64_t high = 0;  // entries lowered to the upper bound (A only)
  std::int64_t total() const { return low + high; }
};

struct TransportResult {
  double cfl = 0.0;        // max face-normal Courant number this step
  double pre_min = 0.0;    // field extrema after update, before clipping
  double pre_max = 0.0;
  ClipStats clips;
};

// One conservative step: first-order upwind face fluxes from edge-averaged
// nodal velocity, then optional explicit 5-point diffusion with zero-flux
// boundaries. Thickness is clipped to [0, inf), concentration to [0, 1].
// Throws on CFL > 1 and on a violated diffusion stability bound.
TransportResult advect_diffuse(const Mesh& mesh, ScalarField& field,
                               const VectorField& v, double diffusivity,
                               double dt, TracerKind kind);

// Serial single-loop reference of the same update; used as the oracle and
// by the benchmark.
TransportResult advect_diffuse_reference(const Mesh& mesh, ScalarField& field,
                                         const VectorField& v, double diffusivity,
                                         double dt, TracerKind kind);

// Sum of field * cell area.
double total_mass(const ScalarField& field, const Mesh& mesh);

}  // namespace fastice
