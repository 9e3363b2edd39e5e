#pragma once

#include "fastice/params.hpp"
#include "fastice/tensor.hpp"

namespace fastice {

// Symmetric strain-rate tensor; e12 == e21 by construction.
struct StrainRate {
  double e11 = 0.0, e12 = 0.0, e21 = 0.0, e22 = 0.0;
};

inline StrainRate make_strain(double e11, double e12, double e22) {
  return {e11, e12, e12, e22};
}

struct StrainInvariants {
  double dI;    // e11 + e22
  double dII;   // e11 - e22
  double dIII;  // (e12 + e21) / 2
};

StrainInvariants invariants_of(const StrainRate& d);

// d_I^2 + e^-2 (d_II^2 + 4 d_III^2); equals the S-matrix quadratic form d:Sd.
double triangle_sq(const StrainRate& d, double e);

// The constant linear map S encoding the elliptic yield curve:
//   (Sd)_11 = (1+e^-2) d11 + (1-e^-2) d22
//   (Sd)_12 = (Sd)_21 = e^-2 (d12 + d21)
//   (Sd)_22 = (1-e^-2) d11 + (1+e^-2) d22
Mat2 apply_S(const StrainRate& d, double e);

// Entry of S viewed as a 4x4 matrix over index pairs, row (i,k), column
// (j,l), i.e. the grouping under which the principal-part coefficients
// satisfy all six symmetries. Indices in {0,1}.
double S_entry(int i, int k, int j, int l, double e);

// Regularized invariant: sqrt(Q(d) + delta_min^2) with Q per params.delta_form.
// Always >= delta_min.
double delta_of(const StrainRate& d, const Params& p);

// Ice strengths at one point. P = h P* exp(-c*(1-A)), T = k_t P,
// P_prime = P - T, P_tilde = P + T.
struct Strengths {
  double P = 0.0;
  double T = 0.0;
  double P_prime = 0.0;
  double P_tilde = 0.0;
};

Strengths strengths_of(double h, double A, const Params& p);

struct RheologyEval {
  double delta = 0.0;  // regularized invariant (s^-1)
  double zeta = 0.0;   // P_tilde / (2 delta)
  Mat2 S_eps;          // S applied to the strain rate
  Mat2 sigma;          // zeta * S_eps - (P_prime/2) I
};

RheologyEval stress_of(const StrainRate& d, const Strengths& s, const Params& p);

// Coefficients of the linearized principal part, a[i][j][k][l] multiplying
// D_k D_l v_j in row i:
//   a_ij^kl = -(P_tilde / (2 rho h Delta)) (S_(ik),(jl) - Delta^-2 (Sd)_ik (Sd)_jl)
// Satisfies a_ij^kl = a_ji^lk = a_kl^ij = a_kj^il = a_il^kj = a_lk^ji.
struct CoefficientTensor {
  double a[2][2][2][2] = {};
};

// Requires h > 0 (callers apply their mass floor first).
CoefficientTensor coefficients_of(const StrainRate& d, const Strengths& s,
                                  double h, const Params& p);

// Sum over all indices of (-a_ij^kl) d_ik d_jl for a real 2x2 argument.
double quadratic_form(const CoefficientTensor& a, const Mat2& d);

}  // namespace fastice
