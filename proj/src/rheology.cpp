#include "fastice/rheology.hpp"

#include <cmath>
#include <stdexcept>

namespace fastice {

StrainInvariants invariants_of(const StrainRate& d) {
  return {d.e11 + d.e22, d.e11 - d.e22, 0.5 * (d.e12 + d.e21)};
}

double triangle_sq(const StrainRate& d, double e) {
  const auto [dI, dII, dIII] = invariants_of(d);
  return dI * dI + (dII * dII + 4.0 * dIII * dIII) / (e * e);
}

Mat2 apply_S(const StrainRate& d, double e) {
  const double q = 1.0 / (e * e);
  Mat2 out;
  out.a11 = (1.0 + q) * d.e11 + (1.0 - q) * d.e22;
  out.a22 = (1.0 - q) * d.e11 + (1.0 + q) * d.e22;
  out.a12 = q * (d.e12 + d.e21);
  out.a21 = out.a12;
  return out;
}

double S_entry(int i, int k, int j, int l, double e) {
  const double q = 1.0 / (e * e);
  // 4x4 over pair indices (i,k) x (j,l), pair order (00, 01, 10, 11):
  //   [ 1+q  0    0    1-q ]
  //   [ 0    q    q    0   ]
  //   [ 0    q    q    0   ]
  //   [ 1-q  0    0    1+q ]
  const int r = 2 * i + k;
  const int c = 2 * j + l;
  if (r == 0 || r == 3) {
    if (c == 0) return r == 0 ? 1.0 + q : 1.0 - q;
    if (c == 3) return r == 0 ? 1.0 - q : 1.0 + q;
    return 0.0;
  }
  return (c == 1 || c == 2) ? q : 0.0;
}

double delta_of(const StrainRate& d, const Params& p) {
  double Q;
  if (p.delta_form == DeltaForm::Triangle) {
    Q = triangle_sq(d, p.e);
  } else {
    // (1/2) d':d' with d' the trace-free part.
    const double tr_half = 0.5 * (d.e11 + d.e22);
    const double p11 = d.e11 - tr_half;
    const double p22 = d.e22 - tr_half;
    Q = 0.5 * (p11 * p11 + p22 * p22 + d.e12 * d.e12 + d.e21 * d.e21);
  }
  return std::sqrt(Q + p.delta_min * p.delta_min);
}

Strengths strengths_of(double h, double A, const Params& p) {
  Strengths s;
  s.P = h * p.P_star * std::exp(-p.c_star * (1.0 - A));
  s.T = p.k_t * s.P;
  s.P_prime = s.P - s.T;
  s.P_tilde = s.P + s.T;
  return s;
}

RheologyEval stress_of(const StrainRate& d, const Strengths& s, const Params& p) {
  RheologyEval out;
  out.delta = delta_of(d, p);
  out.zeta = s.P_tilde / (2.0 * out.delta);
  out.S_eps = apply_S(d, p.e);
  out.sigma = out.S_eps * out.zeta;
  out.sigma.a11 -= 0.5 * s.P_prime;
  out.sigma.a22 -= 0.5 * s.P_prime;
  return out;
}

CoefficientTensor coefficients_of(const StrainRate& d, const Strengths& s,
                                  double h, const Params& p) {
  if (!(h > 0.0)) throw std::invalid_argument("coefficients_of requires h > 0");
  const double delta = delta_of(d, p);
  const Mat2 Sd = apply_S(d, p.e);
  const double front = -s.P_tilde / (2.0 * p.rho * h * delta);
  const double inv_d2 = 1.0 / (delta * delta);
  CoefficientTensor out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l)
          out.a[i][j][k][l] =
              front * (S_entry(i, k, j, l, p.e) - inv_d2 * Sd(i, k) * Sd(j, l));
  return out;
}

double quadratic_form(const CoefficientTensor& a, const Mat2& d) {
  double sum = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l)
          sum += -a.a[i][j][k][l] * d(i, k) * d(j, l);
  return sum;
}

}  // namespace fastice
