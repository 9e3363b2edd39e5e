#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "fastice/random.hpp"
#include "fastice/rheology.hpp"

using namespace fastice;

namespace {

StrainRate random_strain(Rng& rng, double scale) {
  return make_strain(rng.range(-scale, scale), rng.range(-scale, scale),
                     rng.range(-scale, scale));
}

}  // namespace

TEST_SUITE("rheology") {

TEST_CASE("strain invariants") {
  const auto id = invariants_of(make_strain(1, 0, 1));
  CHECK(id.dI == 2.0);
  CHECK(id.dII == 0.0);
  CHECK(id.dIII == 0.0);

  const auto shear = invariants_of(make_strain(0, 1, 0));
  CHECK(shear.dI == 0.0);
  CHECK(shear.dII == 0.0);
  CHECK(shear.dIII == 1.0);

  const auto mixed = invariants_of(make_strain(3, 0, 1));
  CHECK(mixed.dI == 4.0);
  CHECK(mixed.dII == 2.0);
  CHECK(mixed.dIII == 0.0);
}

TEST_CASE("triangle form values") {
  CHECK(triangle_sq(make_strain(1, 0, 1), 2.0) == 4.0);
  CHECK(triangle_sq(make_strain(0, 1, 0), 2.0) == 1.0);
  CHECK(triangle_sq(StrainRate{}, 2.0) == 0.0);
}

TEST_CASE("S application") {
  const Mat2 si = apply_S(make_strain(1, 0, 1), 2.0);
  CHECK(si.a11 == 2.0);
  CHECK(si.a22 == 2.0);
  CHECK(si.a12 == 0.0);
  CHECK(si.a21 == 0.0);

  const Mat2 sh = apply_S(make_strain(0, 1, 0), 2.0);
  CHECK(sh.a11 == 0.0);
  CHECK(sh.a22 == 0.0);
  CHECK(sh.a12 == 0.5);
  CHECK(sh.a21 == 0.5);

  const Mat2 z = apply_S(StrainRate{}, 2.0);
  CHECK(z.a11 == 0.0);
  CHECK(z.a12 == 0.0);
}

TEST_CASE("triangle form equals the S contraction") {
  Rng rng(11);
  for (int t = 0; t < 1000; ++t) {
    const double e = rng.range(1.0, 4.0);
    const StrainRate d = random_strain(rng, 10.0);
    const Mat2 sd = apply_S(d, e);
    const double contraction =
        d.e11 * sd.a11 + d.e12 * sd.a12 + d.e21 * sd.a21 + d.e22 * sd.a22;
    CHECK(triangle_sq(d, e) == doctest::Approx(contraction).epsilon(1e-14));
  }
}

TEST_CASE("regularized invariant") {
  Params p;
  CHECK(delta_of(StrainRate{}, p) == 2e-9);
  CHECK(delta_of(make_strain(1, 0, 1), p) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(delta_of(make_strain(0, 1, 0), p) == doctest::Approx(1.0).epsilon(1e-12));

  SUBCASE("deviatoric form") {
    p.delta_form = DeltaForm::Deviatoric;
    // Pure divergence has zero deviator, so only the floor survives.
    CHECK(delta_of(make_strain(1, 0, 1), p) == doctest::Approx(2e-9).epsilon(1e-6));
    // Pure shear: (1/2) d':d' = (1/2)(1+1) = 1.
    CHECK(delta_of(make_strain(0, 1, 0), p) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("regularization is monotone along rays") {
  Rng rng(13);
  Params p;
  for (int t = 0; t < 100; ++t) {
    const StrainRate d = random_strain(rng, 1e-8);
    double prev = delta_of(StrainRate{}, p);
    for (int k = 1; k <= 10; ++k) {
      const StrainRate scaled =
          make_strain(k * d.e11, k * d.e12, k * d.e22);
      const double cur = delta_of(scaled, p);
      CHECK(cur >= prev);
      prev = cur;
    }
  }
}

TEST_CASE("ice strengths") {
  const Params p;
  const Strengths s = strengths_of(1.0, 1.0, p);
  CHECK(s.P_tilde == doctest::Approx(31625.0).epsilon(1e-12));
  CHECK(s.P_prime == doctest::Approx(23375.0).epsilon(1e-12));
  CHECK(s.P == doctest::Approx(27500.0).epsilon(1e-12));
  CHECK(s.T == doctest::Approx(0.15 * 27500.0).epsilon(1e-12));

  const Strengths z = strengths_of(0.0, 1.0, p);
  CHECK(z.P == 0.0);
  CHECK(z.P_tilde == 0.0);

  const Strengths open = strengths_of(1.0, 0.0, p);
  CHECK(open.P_tilde ==
        doctest::Approx(31625.0 * std::exp(-20.0)).epsilon(1e-12));
  CHECK(open.P_tilde == doctest::Approx(6.52e-5).epsilon(1e-3));
}

TEST_CASE("tensile saturation removes the pressure term") {
  Params p;
  p.k_t = 1.0;
  Rng rng(17);
  for (int t = 0; t < 200; ++t) {
    const Strengths s = strengths_of(rng.range(0.0, 5.0), rng.range(0.0, 1.0), p);
    CHECK(s.P_prime == 0.0);
  }
}

TEST_CASE("stress tensor") {
  const Params p;
  const Strengths s = strengths_of(1.0, 1.0, p);

  SUBCASE("zero strain is purely spherical") {
    const RheologyEval r = stress_of(StrainRate{}, s, p);
    CHECK(r.delta == 2e-9);
    CHECK(r.sigma.a12 == 0.0);
    CHECK(r.sigma.a21 == 0.0);
    CHECK(r.sigma.a11 == doctest::Approx(-23375.0 / 2).epsilon(1e-12));
    CHECK(r.sigma.a11 == r.sigma.a22);
  }

  SUBCASE("zero strain at full tensile strength is stress-free") {
    Params pt = p;
    pt.k_t = 1.0;
    const RheologyEval r = stress_of(StrainRate{}, strengths_of(1.0, 1.0, pt), pt);
    CHECK(r.sigma.a11 == 0.0);
    CHECK(r.sigma.a22 == 0.0);
  }

  SUBCASE("identity strain composes the oracles") {
    const RheologyEval r = stress_of(make_strain(1, 0, 1), s, p);
    const double want = 31625.0 / (2.0 * 2.0) * 2.0 - 23375.0 / 2.0;
    CHECK(r.sigma.a11 == doctest::Approx(want).epsilon(1e-9));
    CHECK(r.sigma.a22 == doctest::Approx(want).epsilon(1e-9));
    CHECK(r.sigma.a12 == 0.0);
  }

  SUBCASE("sigma is symmetric on random inputs") {
    Rng rng(19);
    for (int t = 0; t < 200; ++t) {
      const RheologyEval r = stress_of(random_strain(rng, 1e-5), s, p);
      CHECK(r.sigma.a12 == r.sigma.a21);
      CHECK(r.delta >= p.delta_min);
    }
  }
}

TEST_CASE("Cauchy-Schwarz slack of the S pairing") {
  Rng rng(23);
  const double e = 2.0;
  for (int t = 0; t < 100000; ++t) {
    const StrainRate d = random_strain(rng, rng.log_range(-9.0, 2.0));
    const StrainRate eps = random_strain(rng, rng.log_range(-9.0, 2.0));
    const Mat2 seps = apply_S(eps, e);
    const double pairing = d.e11 * seps.a11 + d.e12 * seps.a12 +
                           d.e21 * seps.a21 + d.e22 * seps.a22;
    const double lhs = pairing * pairing;
    const double rhs = triangle_sq(d, e) * triangle_sq(eps, e);
    CHECK(lhs <= rhs + 1e-12 * (lhs + rhs) + 1e-300);
  }
}

TEST_CASE("coefficient tensor") {
  const Params p;
  const Strengths s = strengths_of(1.0, 1.0, p);

  SUBCASE("rejects nonpositive thickness") {
    CHECK_THROWS_AS(coefficients_of(StrainRate{}, s, 0.0, p), std::invalid_argument);
  }

  SUBCASE("zero strain reduces to the scaled S matrix") {
    const CoefficientTensor a = coefficients_of(StrainRate{}, s, 1.0, p);
    const double front = -s.P_tilde / (2.0 * p.rho * 1.0 * p.delta_min);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k)
          for (int l = 0; l < 2; ++l)
            CHECK(a.a[i][j][k][l] ==
                  doctest::Approx(front * S_entry(i, k, j, l, p.e)).epsilon(1e-13));
  }

  SUBCASE("index symmetries hold on random states") {
    Rng rng(31);
    for (int t = 0; t < 500; ++t) {
      const double h = rng.range(0.1, 5.0);
      const Strengths st = strengths_of(h, rng.range(0.0, 1.0), p);
      const StrainRate eps = random_strain(rng, rng.log_range(-9.0, 1.0));
      const CoefficientTensor a = coefficients_of(eps, st, h, p);
      double scale = 0.0;
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          for (int k = 0; k < 2; ++k)
            for (int l = 0; l < 2; ++l)
              scale = std::max(scale, std::abs(a.a[i][j][k][l]));
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          for (int k = 0; k < 2; ++k)
            for (int l = 0; l < 2; ++l) {
              const double v = a.a[i][j][k][l];
              CHECK(std::abs(a.a[j][i][l][k] - v) <= 1e-13 * scale);
              CHECK(std::abs(a.a[k][l][i][j] - v) <= 1e-13 * scale);
              CHECK(std::abs(a.a[k][j][i][l] - v) <= 1e-13 * scale);
              CHECK(std::abs(a.a[i][l][k][j] - v) <= 1e-13 * scale);
              CHECK(std::abs(a.a[l][k][j][i] - v) <= 1e-13 * scale);
            }
    }
  }

  SUBCASE("quadratic form matches the strength/invariant identity") {
    Rng rng(29);
    for (int t = 0; t < 2000; ++t) {
      const double h = rng.range(0.1, 5.0);
      const double A = rng.range(0.0, 1.0);
      const Strengths st = strengths_of(h, A, p);
      const StrainRate eps = random_strain(rng, rng.log_range(-9.0, 1.0));
      const CoefficientTensor a = coefficients_of(eps, st, h, p);

      const Mat2 d{rng.range(-1.0, 1.0), rng.range(-1.0, 1.0), rng.range(-1.0, 1.0),
                   rng.range(-1.0, 1.0)};
      // Independent route: (P~/(2 rho h Delta^3)) (Delta^2 d:Sd - (d:S eps)^2),
      // with d:Sd evaluated through the invariants of the symmetric part of d
      // rather than through S_entry (the skew part drops out of the pairing).
      const double delta = delta_of(eps, p);
      const StrainRate ds = make_strain(d.a11, 0.5 * (d.a12 + d.a21), d.a22);
      const double dsd = triangle_sq(ds, p.e);
      const Mat2 seps = apply_S(eps, p.e);
      const double pair = d.a11 * seps.a11 + d.a12 * seps.a12 + d.a21 * seps.a21 +
                          d.a22 * seps.a22;
      const double front =
          st.P_tilde / (2.0 * p.rho * h * delta * delta * delta);
      const double term1 = front * delta * delta * dsd;
      const double term2 = front * pair * pair;
      const double got = quadratic_form(a, d);
      // Both routes subtract two near-equal large terms when delta is tiny,
      // so compare against the magnitude of the terms, not of the result.
      CHECK(std::abs(got - (term1 - term2)) <=
            1e-10 * (std::abs(term1) + std::abs(term2)) + 1e-300);
    }
  }
}

}  // TEST_SUITE
