#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "fastice/forcing.hpp"
#include "fastice/grid.hpp"
#include "fastice/params.hpp"

namespace fastice {

// One implicit momentum step: find v with
//   rho h (v - v_prev)/dt = div sigma(v) + f_a + f_o + f_c + f_sh + f_b,
// v = 0 on the boundary. Convective transport of momentum is not modeled.
struct MomentumProblem {
  Mesh mesh;
  const VectorField* v_prev = nullptr;
  const ScalarField* h = nullptr;
  const ScalarField* A = nullptr;
  ForcingInputs forcing;
  double dt = 0.0;
  Params params;
};

struct SolverReport {
  int iterations = 0;
  double initial_residual = 0.0;
  double final_residual = 0.0;
  bool converged = false;
  std::vector<double> residual_trace;  // norm after each accepted iterate
  std::string note;                    // non-convergence / damping warnings
};

// Effective nodal mass rho * max(h, h_min) averaged cell-to-node, plus the
// nodes whose adjacent cells all have A < A_min; those are held at v = 0.
// (The solver additionally pins the Dirichlet boundary nodes itself.)
struct NodalMass {
  std::vector<double> m;            // kg m^-2 per node
  std::vector<std::uint8_t> pinned; // 1 = velocity fixed to zero
};

NodalMass mass_floor(const ScalarField& h, const ScalarField& A,
                     const Mesh& mesh, const Params& p);

// Force-density residual (N m^-2) at every node. Pinned rows report v - 0.
// Parallel cell pass + deterministic node-centric gather.
void momentum_residual(const VectorField& v, const MomentumProblem& problem,
                       VectorField& out);

// Plain serial element-loop assembly of the same residual; independent code
// path kept as the test oracle and benchmark baseline.
void momentum_residual_reference(const VectorField& v, const MomentumProblem& problem,
                                 VectorField& out);

// Action of the analytic linearization at v on a perturbation dv that
// vanishes on pinned nodes; pinned rows of the output return dv.
void apply_linearization(const VectorField& v, const VectorField& dv,
                         const MomentumProblem& problem, VectorField& out);

// Damped Picard/Newton solve. Initial guess is v_prev. Non-convergence
// returns the best iterate with converged = false; NaN throws.
std::pair<VectorField, SolverReport> solve_momentum(const MomentumProblem& problem,
                                                    const SolverConfig& config);

}  // namespace fastice
