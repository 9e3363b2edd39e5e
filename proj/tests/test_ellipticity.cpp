#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "fastice/ellipticity.hpp"

using namespace fastice;

namespace {

CoefficientTensor rest_tensor(const Params& p) {
  const Strengths s = strengths_of(1.0, 1.0, p);
  return coefficients_of(StrainRate{}, s, 1.0, p);
}

// Scale of the rest-state tensor: P~ / (2 rho h delta_min).
double rest_front(const Params& p) {
  const Strengths s = strengths_of(1.0, 1.0, p);
  return s.P_tilde / (2.0 * p.rho * 1.0 * p.delta_min);
}

}  // namespace

TEST_SUITE("ellipticity") {

TEST_CASE("principal symbol at rest is the scaled S block") {
  const Params p;
  const CoefficientTensor a = rest_tensor(p);
  const double front = rest_front(p);
  const Mat2 sym = principal_symbol(a, {1.0, 0.0});
  // S_(i0),(j0) = diag(1 + e^-2, e^-2) for e = 2.
  CHECK(sym.a11 == doctest::Approx(-front * 1.25).epsilon(1e-13));
  CHECK(sym.a22 == doctest::Approx(-front * 0.25).epsilon(1e-13));
  CHECK(sym.a12 == 0.0);
  CHECK(sym.a21 == 0.0);
}

TEST_CASE("principal symbol is even in the direction") {
  const Params p;
  Rng rng(109);
  for (int t = 0; t < 100; ++t) {
    const Strengths s = strengths_of(rng.range(0.1, 5.0), rng.range(0.0, 1.0), p);
    const StrainRate d = make_strain(rng.range(-1e-5, 1e-5), rng.range(-1e-5, 1e-5),
                                     rng.range(-1e-5, 1e-5));
    const CoefficientTensor a = coefficients_of(d, s, 1.0, p);
    const Vec2 xi = rng.unit_vec();
    const Mat2 fwd = principal_symbol(a, xi);
    const Mat2 bwd = principal_symbol(a, {-xi.x, -xi.y});
    CHECK(fwd.a11 == bwd.a11);
    CHECK(fwd.a12 == bwd.a12);
    CHECK(fwd.a21 == bwd.a21);
    CHECK(fwd.a22 == bwd.a22);
  }
}

TEST_CASE("symbol pairing agrees with the quadratic form") {
  const Params p;
  Rng rng(113);
  for (int t = 0; t < 200; ++t) {
    const double h = rng.range(0.1, 5.0);
    const Strengths s = strengths_of(h, rng.range(0.0, 1.0), p);
    const StrainRate d = make_strain(rng.range(-1e-6, 1e-6), rng.range(-1e-6, 1e-6),
                                     rng.range(-1e-6, 1e-6));
    const CoefficientTensor a = coefficients_of(d, s, h, p);
    const Vec2 xi = rng.unit_vec();
    const Vec2 eta{rng.range(-1.0, 1.0), rng.range(-1.0, 1.0)};
    const Mat2 sym = principal_symbol(a, xi);
    const double through_symbol = -(eta.x * (sym.a11 * eta.x + sym.a12 * eta.y) +
                                    eta.y * (sym.a21 * eta.x + sym.a22 * eta.y));
    const Mat2 outer{eta.x * xi.x, eta.x * xi.y, eta.y * xi.x, eta.y * xi.y};
    const double through_form = quadratic_form(a, outer);
    // Same 16 tensor entries, different summation order: compare against
    // the term magnitude, not the (possibly cancelling) result.
    double amax = 0.0;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k)
          for (int l = 0; l < 2; ++l) amax = std::max(amax, std::abs(a.a[i][j][k][l]));
    const double eta_sq = eta.x * eta.x + eta.y * eta.y;
    CHECK(std::abs(through_symbol - through_form) <= 1e-13 * amax * (eta_sq + 1.0));
  }
}

TEST_CASE("symmetry residual detects a seeded defect") {
  const Params p;
  CoefficientTensor a = rest_tensor(p);
  CHECK(check_symmetries(a) <= 1e-13);

  double scale = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l)
          scale = std::max(scale, std::abs(a.a[i][j][k][l]));
  a.a[0][0][0][1] += 0.5 * scale;
  CHECK(check_symmetries(a) > 1e-3);

  CoefficientTensor zero{};
  CHECK(check_symmetries(zero) == 0.0);
}

TEST_CASE("rest state attains the lower bound exactly") {
  const Params p;
  const CoefficientTensor a = rest_tensor(p);
  const double front = rest_front(p);
  // eta = (0,1), xi = (1,0): the quotient collapses to front / e^2, which is
  // precisely c delta_min^2 / e^2 with c = P~ / (2 rho h delta_min^3).
  const Mat2 d{0.0, 0.0, 1.0, 0.0};
  CHECK(quadratic_form(a, d) == doctest::Approx(front / 4.0).epsilon(1e-12));

  StateSampler rest = [](Rng&) { return LocalState{1.0, 1.0, StrainRate{}}; };
  const EllipticityReport r = check_strong_ellipticity(rest, 500, 7, p);
  CHECK(r.ok());
  CHECK(r.violations == 0);
  CHECK(r.min_bound == doctest::Approx(front / 4.0).epsilon(1e-12));
  CHECK(r.min_quotient >= r.min_bound * (1.0 - 1e-9));
}

TEST_CASE("random states satisfy the strong bound") {
  const Params p;
  const EllipticityReport r = check_strong_ellipticity(make_random_sampler(), 5000, 42, p);
  CHECK(r.ok());
  CHECK(r.samples == 5000);
  CHECK(r.violations == 0);
  CHECK(r.symbol_spectrum_positive);
  CHECK(r.max_symmetry_residual <= 1e-13);

  SUBCASE("same seed reproduces the report") {
    const EllipticityReport r2 =
        check_strong_ellipticity(make_random_sampler(), 5000, 42, p);
    CHECK(r2.min_quotient == r.min_quotient);
    CHECK(r2.min_margin == r.min_margin);
    CHECK(r2.witness == r.witness);
  }
}

TEST_CASE("violent shear states satisfy the strong bound") {
  const Params p;
  StateSampler storm = [](Rng& rng) {
    LocalState s;
    s.h = rng.range(0.1, 5.0);
    s.A = rng.range(0.8, 1.0);
    const double mag = 1e3;
    const Vec2 dir = rng.unit_vec();
    s.d = make_strain(mag * dir.x, mag * dir.y, -mag * dir.x);
    return s;
  };
  const EllipticityReport r = check_strong_ellipticity(storm, 2000, 11, p);
  CHECK(r.ok());
}

TEST_CASE("the bound is only defined for the triangle invariant") {
  Params p;
  p.delta_form = DeltaForm::Deviatoric;
  CHECK_THROWS_AS(check_strong_ellipticity(make_random_sampler(), 10, 1, p),
                  std::invalid_argument);
}

TEST_CASE("hand-built complex pair is strictly positive") {
  const Params p;
  const CoefficientTensor a = rest_tensor(p);
  const double front = rest_front(p);
  // xi = (1,0), nu = (0,1), u = (1,0), v = (i,0):
  //   d_re = xi (x) Re u - nu (x) Re v = [[1,0],[0,0]]
  //   d_im = xi (x) Im u - nu (x) Im v = [[0,-1],[0,0]]
  // and Im(u|v) = -1, so the strict branch applies.
  const Mat2 dre{1.0, 0.0, 0.0, 0.0};
  const Mat2 dim{0.0, -1.0, 0.0, 0.0};
  const double form = quadratic_form(a, dre) + quadratic_form(a, dim);
  CHECK(form == doctest::Approx(front * 1.5).epsilon(1e-12));
  CHECK(form > 0.0);
}

TEST_CASE("random states are normally elliptic") {
  const Params p;
  const NormalEllipticityReport r =
      check_normal_ellipticity(make_random_sampler(), 20000, 42, p);
  CHECK(r.ok());
  CHECK(r.samples == 20000);
  CHECK(r.nonneg_violations == 0);
  CHECK(r.strict_violations == 0);
  CHECK(r.min_strict_margin > 0.0);
}

TEST_CASE("solver states feed the samplers") {
  const Config cfg = preset("ex1_lfi");
  const Mesh m = make_mesh(cfg.scenario.cells_per_side, cfg.scenario.domain_length);
  const State st = eval_initial_condition(cfg.scenario, m);
  const StateSampler sampler = make_grid_sampler(st, m, cfg.params);
  const EllipticityReport r = check_strong_ellipticity(sampler, 500, 3, cfg.params);
  CHECK(r.ok());
  const NormalEllipticityReport nr = check_normal_ellipticity(sampler, 500, 5, cfg.params);
  CHECK(nr.ok());
}

}  // TEST_SUITE
