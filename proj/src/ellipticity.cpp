#include "fastice/ellipticity.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace fastice {

namespace {

std::string describe(const LocalState& s) {
  std::ostringstream os;
  os.precision(9);
  os << "h=" << s.h << " A=" << s.A << " strain=(" << s.d.e11 << "," << s.d.e12
     << "," << s.d.e22 << ")";
  return os.str();
}

double max_abs(const CoefficientTensor& a) {
  double m = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) m = std::max(m, std::abs(a.a[i][j][k][l]));
  return m;
}

}  // namespace

StateSampler make_random_sampler() {
  return [](Rng& rng) {
    LocalState s;
    s.h = rng.range(0.1, 5.0);
    s.A = rng.range(0.0, 1.0);
    if (rng.unit() < 0.1) {
      s.d = StrainRate{};  // exercise the creep limit exactly
      return s;
    }
    const double mag = rng.log_range(-12.0, 3.0);
    double e11 = rng.range(-1.0, 1.0);
    double e22 = rng.range(-1.0, 1.0);
    double e12 = rng.range(-1.0, 1.0);
    double n = std::sqrt(e11 * e11 + e22 * e22 + 2.0 * e12 * e12);
    if (n < 1e-9) {
      e11 = 1.0;
      n = 1.0;
    }
    s.d = make_strain(e11 / n * mag, e12 / n * mag, e22 / n * mag);
    return s;
  };
}

StateSampler make_grid_sampler(const State& state, const Mesh& mesh, const Params& p) {
  // Copies keep the sampler valid after the caller's state goes away.
  return [state, mesh, p](Rng& rng) {
    const int i = static_cast<int>(rng.unit() * mesh.nx) % mesh.nx;
    const int j = static_cast<int>(rng.unit() * mesh.ny) % mesh.ny;
    const int n00 = mesh.node(i, j), n10 = mesh.node(i + 1, j);
    const int n01 = mesh.node(i, j + 1), n11 = mesh.node(i + 1, j + 1);
    const auto& v = state.v;
    const double dudx = (v.x[n10] + v.x[n11] - v.x[n00] - v.x[n01]) / (2.0 * mesh.dx);
    const double dudy = (v.x[n01] + v.x[n11] - v.x[n00] - v.x[n10]) / (2.0 * mesh.dy);
    const double dvdx = (v.y[n10] + v.y[n11] - v.y[n00] - v.y[n01]) / (2.0 * mesh.dx);
    const double dvdy = (v.y[n01] + v.y[n11] - v.y[n00] - v.y[n10]) / (2.0 * mesh.dy);
    LocalState s;
    const int c = mesh.cell(i, j);
    s.h = std::max(state.h[c], p.h_min);
    s.A = state.A[c];
    s.d = make_strain(dudx, 0.5 * (dudy + dvdx), dvdy);
    return s;
  };
}

Mat2 principal_symbol(const CoefficientTensor& a, const Vec2& xi) {
  const double x[2] = {xi.x, xi.y};
  Mat2 m;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      double s = 0.0;
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) s += a.a[i][j][k][l] * x[k] * x[l];
      m(i, j) = s;
    }
  return m;
}

double check_symmetries(const CoefficientTensor& t) {
  const auto& a = t.a;
  double worst = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) {
          const double v = a[i][j][k][l];
          // a_ij^kl = a_ji^lk = a_kl^ij = a_kj^il = a_il^kj = a_lk^ji
          const double perms[5] = {a[j][i][l][k], a[k][l][i][j], a[k][j][i][l],
                                   a[i][l][k][j], a[l][k][j][i]};
          for (double q : perms) worst = std::max(worst, std::abs(q - v));
        }
  const double scale = max_abs(t);
  return scale > 0.0 ? worst / scale : worst;
}

EllipticityReport check_strong_ellipticity(const StateSampler& sampler,
                                           std::int64_t n_samples,
                                           std::uint64_t seed, const Params& p) {
  if (p.delta_form != DeltaForm::Triangle)
    throw std::invalid_argument(
        "strong ellipticity bound requires the triangle invariant form");
  Rng rng(seed);
  EllipticityReport r;
  r.seed = seed;
  r.samples = n_samples;
  bool first = true;
  for (std::int64_t s = 0; s < n_samples; ++s) {
    const LocalState st = sampler(rng);
    const Strengths str = strengths_of(st.h, st.A, p);
    const CoefficientTensor a = coefficients_of(st.d, str, st.h, p);
    r.max_symmetry_residual = std::max(r.max_symmetry_residual, check_symmetries(a));

    const Vec2 xi = rng.unit_vec();
    // eta = x + i y in C^2, |eta| = 1; one in four is real.
    double ex[2], ey[2];
    double nsq = 0.0;
    do {
      const bool realv = rng.unit() < 0.25;
      for (int c = 0; c < 2; ++c) {
        ex[c] = rng.range(-1.0, 1.0);
        ey[c] = realv ? 0.0 : rng.range(-1.0, 1.0);
      }
      nsq = ex[0] * ex[0] + ex[1] * ex[1] + ey[0] * ey[0] + ey[1] * ey[1];
    } while (nsq < 1e-12);
    const double inv = 1.0 / std::sqrt(nsq);
    for (int c = 0; c < 2; ++c) {
      ex[c] *= inv;
      ey[c] *= inv;
    }

    // Re(-A# eta | eta) splits over the real and imaginary parts of eta.
    const Mat2 dre{ex[0] * xi.x, ex[0] * xi.y, ex[1] * xi.x, ex[1] * xi.y};
    const Mat2 dim{ey[0] * xi.x, ey[0] * xi.y, ey[1] * xi.x, ey[1] * xi.y};
    const double quotient = quadratic_form(a, dre) + quadratic_form(a, dim);

    const double delta = delta_of(st.d, p);
    const double c_sample = str.P_tilde / (2.0 * p.rho * st.h * delta * delta * delta);
    const double bound = c_sample * p.delta_min * p.delta_min / (p.e * p.e);

    const Mat2 sym = principal_symbol(a, xi);
    const double tr = -sym.trace();
    const double det = sym.a11 * sym.a22 - sym.a12 * sym.a21;  // det(-M) = det(M)
    if (!(tr > 0.0 && det > 0.0)) r.symbol_spectrum_positive = false;

    const double margin = quotient - bound;
    if (first || quotient < r.min_quotient) r.min_quotient = quotient;
    if (first || bound < r.min_bound) r.min_bound = bound;
    if (first || margin < r.min_margin) {
      r.min_margin = margin;
      std::ostringstream os;
      os.precision(9);
      os << describe(st) << " xi=(" << xi.x << "," << xi.y << ") quotient=" << quotient
         << " bound=" << bound;
      r.witness = os.str();
    }
    if (quotient < bound * (1.0 - 1e-9)) ++r.violations;
    first = false;
  }
  return r;
}

NormalEllipticityReport check_normal_ellipticity(const StateSampler& sampler,
                                                 std::int64_t n_samples,
                                                 std::uint64_t seed, const Params& p) {
  Rng rng(seed);
  NormalEllipticityReport r;
  r.seed = seed;
  r.samples = n_samples;
  bool first = true, first_strict = true;
  for (std::int64_t s = 0; s < n_samples; ++s) {
    const LocalState st = sampler(rng);
    const Strengths str = strengths_of(st.h, st.A, p);
    const CoefficientTensor a = coefficients_of(st.d, str, st.h, p);

    Vec2 xi = rng.unit_vec();
    Vec2 nu = rot90(xi) * rng.sign();

    // u = ux + i uy, v = vx + i vy; biased draws hit the Im(u|v)=0 branch.
    double ux[2], uy[2], vx[2], vy[2];
    const bool realv = rng.unit() < 0.125;
    for (int c = 0; c < 2; ++c) {
      ux[c] = rng.range(-1.0, 1.0);
      uy[c] = realv ? 0.0 : rng.range(-1.0, 1.0);
      vx[c] = rng.range(-1.0, 1.0);
      vy[c] = realv ? 0.0 : rng.range(-1.0, 1.0);
    }
    if (rng.unit() < 0.0625)
      for (int c = 0; c < 2; ++c) {
        vx[c] = ux[c];
        vy[c] = uy[c];
      }

    // d(i,k) pairs the component index with the derivative index, matching
    // the contraction (-a_ij^kl)(xi_l u_j - nu_l v_j) conj(xi_k u_i - nu_k v_i).
    const double xia[2] = {xi.x, xi.y}, nua[2] = {nu.x, nu.y};
    Mat2 dre, dim;
    for (int i = 0; i < 2; ++i)
      for (int k = 0; k < 2; ++k) {
        dre(i, k) = xia[k] * ux[i] - nua[k] * vx[i];
        dim(i, k) = xia[k] * uy[i] - nua[k] * vy[i];
      }
    const double form = quadratic_form(a, dre) + quadratic_form(a, dim);

    const double usq = ux[0] * ux[0] + ux[1] * ux[1] + uy[0] * uy[0] + uy[1] * uy[1];
    const double vsq = vx[0] * vx[0] + vx[1] * vx[1] + vy[0] * vy[0] + vy[1] * vy[1];
    // Im(u|v) = sum_i (uy_i vx_i - ux_i vy_i)
    const double im_uv = uy[0] * vx[0] - ux[0] * vy[0] + uy[1] * vx[1] - ux[1] * vy[1];
    const double scale = max_abs(a) * (usq + vsq);

    if (first || form < r.min_form) {
      r.min_form = form;
      std::ostringstream os;
      os.precision(9);
      os << describe(st) << " xi=(" << xi.x << "," << xi.y << ") Im(u|v)=" << im_uv
         << " form=" << form;
      r.witness = os.str();
    }
    if (form < -1e-12 * scale) ++r.nonneg_violations;
    if (std::abs(im_uv) > 1e-6 * std::sqrt(usq * vsq)) {
      if (form <= 0.0) ++r.strict_violations;
      if (first_strict || form < r.min_strict_margin) r.min_strict_margin = form;
      first_strict = false;
    }
    first = false;
  }
  return r;
}

std::string format_report(const EllipticityReport& r) {
  std::ostringstream os;
  os.precision(6);
  os << std::scientific;
  os << "strong ellipticity: " << r.samples << " samples, " << r.violations
     << " violations (seed " << r.seed << ")\n"
     << "  min Re(-A# eta|eta)        " << r.min_quotient << "\n"
     << "  min bound c*dmin^2/e^2     " << r.min_bound << "\n"
     << "  min margin                 " << r.min_margin << "\n"
     << "  max symmetry residual      " << r.max_symmetry_residual << "\n"
     << "  symbol spectrum positive   " << (r.symbol_spectrum_positive ? "yes" : "NO")
     << "\n"
     << "  tightest sample            " << r.witness << "\n"
     << "  verdict                    " << (r.ok() ? "PASS" : "FAIL") << "\n";
  return os.str();
}

std::string format_report(const NormalEllipticityReport& r) {
  std::ostringstream os;
  os.precision(6);
  os << std::scientific;
  os << "strong normal ellipticity: " << r.samples << " samples, "
     << r.nonneg_violations << " nonnegativity violations, " << r.strict_violations
     << " strict violations (seed " << r.seed << ")\n"
     << "  min form                   " << r.min_form << "\n"
     << "  min strict-branch form     " << r.min_strict_margin << "\n"
     << "  tightest sample            " << r.witness << "\n"
     << "  verdict                    " << (r.ok() ? "PASS" : "FAIL") << "\n";
  return os.str();
}

}  // namespace fastice
