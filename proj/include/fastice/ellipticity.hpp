#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "fastice/grid.hpp"
#include "fastice/params.hpp"
#include "fastice/random.hpp"
#include "fastice/rheology.hpp"
#include "fastice/tensor.hpp"

namespace fastice {

// Numerical verification of the structure of the linearized operator:
// coefficient symmetries, the strong-ellipticity lower bound with its
// proof-exact constant, and strong normal ellipticity. Randomized sampling
// with fixed seeds; these are guards against sign/index bugs, not proofs.

// Pointwise state at a sampled location.
struct LocalState {
  double h = 1.0;
  double A = 1.0;
  StrainRate d;
};

using StateSampler = std::function<LocalState(Rng&)>;

// h in [0.1, 5], A in [0, 1], strain magnitude log-uniform in 10^[-12, 3]
// (one draw in ten is exactly zero strain).
StateSampler make_random_sampler();

// Draws random cells of an actual solver state; h is floored at p.h_min.
StateSampler make_grid_sampler(const State& state, const Mesh& mesh, const Params& p);

// Contraction symbol[i][j] = sum_kl a_ij^kl xi_k xi_l.
Mat2 principal_symbol(const CoefficientTensor& a, const Vec2& xi);

// Max over the six index identities of |a_perm - a| relative to max|a|.
double check_symmetries(const CoefficientTensor& a);

struct EllipticityReport {
  std::int64_t samples = 0;
  std::int64_t violations = 0;
  double min_quotient = 0.0;       // min over samples of Re(-A# eta | eta)
  double min_bound = 0.0;          // min over samples of c delta_min^2 / e^2
  double min_margin = 0.0;         // min of quotient - bound (1 - 1e-9)
  double max_symmetry_residual = 0.0;
  bool symbol_spectrum_positive = true;  // eigenvalues of -A# all > 0
  std::uint64_t seed = 0;
  std::string witness;             // description of the worst sample
  bool ok() const { return violations == 0 && symbol_spectrum_positive; }
};

// Samples (state, xi, eta), |xi| = |eta| = 1 with complex eta, and checks
// Re(-A# eta | eta) >= c delta_min^2 / e^2 (1 - 1e-9), where
// c = P_tilde / (2 rho h Delta^3) is recomputed per sample exactly as in
// the chain of inequalities the bound comes from. Requires the Triangle
// invariant form (throws otherwise).
EllipticityReport check_strong_ellipticity(const StateSampler& sampler,
                                           std::int64_t n_samples,
                                           std::uint64_t seed, const Params& p);

struct NormalEllipticityReport {
  std::int64_t samples = 0;
  std::int64_t nonneg_violations = 0;   // form < -1e-12 * scale
  std::int64_t strict_violations = 0;   // Im(u|v) != 0 but form <= 0
  double min_form = 0.0;
  double min_strict_margin = 0.0;       // min form over the strict branch
  std::uint64_t seed = 0;
  std::string witness;
  bool ok() const { return nonneg_violations == 0 && strict_violations == 0; }
};

// Samples orthonormal real (xi, nu) and complex u, v, and evaluates
// Re sum a_ij^kl (xi_l u_j - nu_l v_j) conj(xi_k u_i - nu_k v_i) for the
// negative operator: nonnegative always, strictly positive when
// |Im(u|v)| > 1e-6 |u||v|.
NormalEllipticityReport check_normal_ellipticity(const StateSampler& sampler,
                                                 std::int64_t n_samples,
                                                 std::uint64_t seed, const Params& p);

std::string format_report(const EllipticityReport& r);
std::string format_report(const NormalEllipticityReport& r);

}  // namespace fastice
