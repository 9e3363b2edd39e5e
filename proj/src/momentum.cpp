#include "fastice/momentum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include "fastice/rheology.hpp"

namespace fastice {

namespace {

// Local corner order (0,0),(1,0),(0,1),(1,1); basis gradients at the cell
// center are +-1/(2dx), +-1/(2dy) with these signs.
constexpr int kSx[4] = {-1, 1, -1, 1};
constexpr int kSy[4] = {-1, -1, 1, 1};

struct Cell {
  int nodes[4];
  double gx[4], gy[4];
};

Cell cell_geometry(const Mesh& mesh, int ci, int cj) {
  Cell c;
  c.nodes[0] = mesh.node(ci, cj);
  c.nodes[1] = mesh.node(ci + 1, cj);
  c.nodes[2] = mesh.node(ci, cj + 1);
  c.nodes[3] = mesh.node(ci + 1, cj + 1);
  for (int k = 0; k < 4; ++k) {
    c.gx[k] = kSx[k] / (2.0 * mesh.dx);
    c.gy[k] = kSy[k] / (2.0 * mesh.dy);
  }
  return c;
}

StrainRate strain_at(const Cell& c, const VectorField& v) {
  double e11 = 0.0, e22 = 0.0, cross = 0.0;
  for (int k = 0; k < 4; ++k) {
    e11 += c.gx[k] * v.x[c.nodes[k]];
    e22 += c.gy[k] * v.y[c.nodes[k]];
    cross += c.gy[k] * v.x[c.nodes[k]] + c.gx[k] * v.y[c.nodes[k]];
  }
  return make_strain(e11, 0.5 * cross, e22);
}

// 3x3 quadratic-form matrix of Q(d) in strain coordinates s = (e11, e22, g),
// g = 2 e12; delta = sqrt(s.Qm.s + delta_min^2) and the linearization's
// rank-one direction is Qm.s.
void q_matrix(const Params& p, double Qm[3][3]) {
  if (p.delta_form == DeltaForm::Triangle) {
    const double q = 1.0 / (p.e * p.e);
    Qm[0][0] = 1.0 + q; Qm[0][1] = 1.0 - q; Qm[0][2] = 0.0;
    Qm[1][0] = 1.0 - q; Qm[1][1] = 1.0 + q; Qm[1][2] = 0.0;
    Qm[2][0] = 0.0;     Qm[2][1] = 0.0;     Qm[2][2] = q;
  } else {
    Qm[0][0] = 0.25;  Qm[0][1] = -0.25; Qm[0][2] = 0.0;
    Qm[1][0] = -0.25; Qm[1][1] = 0.25;  Qm[1][2] = 0.0;
    Qm[2][0] = 0.0;   Qm[2][1] = 0.0;   Qm[2][2] = 0.25;
  }
}

enum class LinMode { Picard, Newton };

// Per-solve caches: nodal mass, pinned set, basal coefficient, strengths.
class Assembler {
 public:
  Assembler(const MomentumProblem& pb) : pb_(pb), mesh_(pb.mesh) {
    if (!pb.v_prev || !pb.h || !pb.A)
      throw std::invalid_argument("momentum problem is missing fields");
    if (pb.v_prev->size() != mesh_.n_nodes() || pb.h->size() != mesh_.n_cells() ||
        pb.A->size() != mesh_.n_cells())
      throw std::invalid_argument("momentum problem fields do not match mesh");
    if (!(pb.dt > 0.0)) throw std::invalid_argument("dt must be strictly positive");

    nm_ = mass_floor(*pb.h, *pb.A, mesh_, pb.params);

    // Basal drag coefficient: cell (h-h_crit)+ exp(-alpha_b(1-A)), averaged
    // to nodes. The nonlinearity in h is applied before averaging.
    std::vector<double> b_cell(mesh_.n_cells(), 0.0);
    if (pb.forcing.basal && pb.params.k2 > 0.0) {
      for (int c = 0; c < mesh_.n_cells(); ++c) {
        const double h = (*pb.h)[c];
        if (h > pb.params.h_crit)
          b_cell[c] = (h - pb.params.h_crit) *
                      std::exp(-pb.params.alpha_b * (1.0 - (*pb.A)[c]));
      }
    }
    b_node_ = cell_to_node_average(mesh_, b_cell);

    strengths_.resize(mesh_.n_cells());
    for (int c = 0; c < mesh_.n_cells(); ++c)
      strengths_[c] = strengths_of((*pb.h)[c], (*pb.A)[c], pb.params);

    pinned_.assign(mesh_.n_nodes(), 0);
    for (int j = 0; j <= mesh_.ny; ++j)
      for (int i = 0; i <= mesh_.nx; ++i)
        if (mesh_.is_boundary_node(i, j) || nm_.pinned[mesh_.node(i, j)])
          pinned_[mesh_.node(i, j)] = 1;

    free_index_.assign(mesh_.n_nodes(), -1);
    for (int n = 0; n < mesh_.n_nodes(); ++n)
      if (!pinned_[n]) free_index_[n] = n_free_++;

    // Inverse nodal control area (dx dy * adjacent cells / 4).
    inv_area_.resize(mesh_.n_nodes());
    for (int j = 0; j <= mesh_.ny; ++j) {
      for (int i = 0; i <= mesh_.nx; ++i) {
        const int cnt = ((i > 0) + (i < mesh_.nx)) * ((j > 0) + (j < mesh_.ny));
        inv_area_[mesh_.node(i, j)] = 4.0 / (mesh_.dx * mesh_.dy * cnt);
      }
    }

    q_matrix(pb.params, Qm_);
  }

  const std::vector<std::uint8_t>& pinned() const { return pinned_; }
  int n_free() const { return n_free_; }
  int free_index(int n) const { return free_index_[n]; }

  // Force-density residual; pinned rows report the velocity itself.
  void residual(const VectorField& v, VectorField& out) const {
    out = VectorField(mesh_.n_nodes());
    const int nx = mesh_.nx, ny = mesh_.ny;

    // Cell stress pass.
    std::vector<double> s11(mesh_.n_cells()), s22(mesh_.n_cells()), s12(mesh_.n_cells());
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (int cj = 0; cj < ny; ++cj) {
      for (int ci = 0; ci < nx; ++ci) {
        const Cell cg = cell_geometry(mesh_, ci, cj);
        const int c = mesh_.cell(ci, cj);
        const RheologyEval ev = stress_of(strain_at(cg, v), strengths_[c], pb_.params);
        s11[c] = ev.sigma.a11;
        s22[c] = ev.sigma.a22;
        s12[c] = ev.sigma.a12;
      }
    }

    // Node gather: each node sums its adjacent cells in fixed (SW, SE, NW,
    // NE) order, so the result is independent of the thread count.
    const double vol = mesh_.dx * mesh_.dy;
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (int j = 0; j <= ny; ++j) {
      for (int i = 0; i <= nx; ++i) {
        const int n = mesh_.node(i, j);
        if (pinned_[n]) {
          out.x[n] = v.x[n];
          out.y[n] = v.y[n];
          continue;
        }
        double fx = 0.0, fy = 0.0;
        for (int cj = j - 1; cj <= j; ++cj) {
          for (int ci = i - 1; ci <= i; ++ci) {
            if (ci < 0 || cj < 0 || ci >= nx || cj >= ny) continue;
            const int c = mesh_.cell(ci, cj);
            const double gx = (i == ci ? -1.0 : 1.0) / (2.0 * mesh_.dx);
            const double gy = (j == cj ? -1.0 : 1.0) / (2.0 * mesh_.dy);
            fx += vol * (s11[c] * gx + s12[c] * gy);
            fy += vol * (s12[c] * gx + s22[c] * gy);
          }
        }
        const Vec2 r = point_residual(v.at(n), pb_.v_prev->at(n), n,
                                      Vec2{fx, fy} * inv_area_[n]);
        out.x[n] = r.x;
        out.y[n] = r.y;
      }
    }
  }

  // L2 norm over free dofs.
  double norm(const VectorField& r) const {
    double s = 0.0;
    for (int n = 0; n < mesh_.n_nodes(); ++n) {
      if (pinned_[n]) continue;
      s += r.x[n] * r.x[n] + r.y[n] * r.y[n];
    }
    return std::sqrt(s);
  }

  // Frozen-coefficient (Picard) or full (Newton) linearization at v.
  Eigen::SparseMatrix<double> matrix(const VectorField& v, LinMode mode) const {
    using T = Eigen::Triplet<double>;
    std::vector<T> trip;
    trip.reserve(static_cast<std::size_t>(mesh_.n_cells()) * 64 + mesh_.n_nodes() * 4);

    const double vol = mesh_.dx * mesh_.dy;
    for (int cj = 0; cj < mesh_.ny; ++cj) {
      for (int ci = 0; ci < mesh_.nx; ++ci) {
        const Cell cg = cell_geometry(mesh_, ci, cj);
        const int c = mesh_.cell(ci, cj);
        const StrainRate d = strain_at(cg, v);
        const double delta = delta_of(d, pb_.params);
        const Strengths& st = strengths_[c];
        const double zeta = st.P_tilde / (2.0 * delta);

        // Tangent D (3x3) in s = (e11, e22, g): zeta * Sm minus, for Newton,
        // the rank-one correction (P_tilde / (2 delta^3)) (Sm s)(Qm s)^T.
        double Sm[3][3];
        {
          const double q = 1.0 / (pb_.params.e * pb_.params.e);
          Sm[0][0] = 1.0 + q; Sm[0][1] = 1.0 - q; Sm[0][2] = 0.0;
          Sm[1][0] = 1.0 - q; Sm[1][1] = 1.0 + q; Sm[1][2] = 0.0;
          Sm[2][0] = 0.0;     Sm[2][1] = 0.0;     Sm[2][2] = q;
        }
        const double s[3] = {d.e11, d.e22, d.e12 + d.e21};
        double Ss[3] = {0, 0, 0}, Qs[3] = {0, 0, 0};
        for (int r = 0; r < 3; ++r)
          for (int k = 0; k < 3; ++k) {
            Ss[r] += Sm[r][k] * s[k];
            Qs[r] += Qm_[r][k] * s[k];
          }
        double D[3][3];
        const double c3 = st.P_tilde / (2.0 * delta * delta * delta);
        for (int r = 0; r < 3; ++r)
          for (int k = 0; k < 3; ++k) {
            D[r][k] = zeta * Sm[r][k];
            if (mode == LinMode::Newton) D[r][k] -= c3 * Ss[r] * Qs[k];
          }

        // K = vol * B^T D B with B the 3x8 strain-displacement map.
        double B[3][8] = {};
        for (int k = 0; k < 4; ++k) {
          B[0][2 * k] = cg.gx[k];
          B[1][2 * k + 1] = cg.gy[k];
          B[2][2 * k] = cg.gy[k];
          B[2][2 * k + 1] = cg.gx[k];
        }
        double DB[3][8];
        for (int r = 0; r < 3; ++r)
          for (int col = 0; col < 8; ++col)
            DB[r][col] = D[r][0] * B[0][col] + D[r][1] * B[1][col] + D[r][2] * B[2][col];

        for (int ka = 0; ka < 4; ++ka) {
          const int na = cg.nodes[ka];
          if (pinned_[na]) continue;
          const double row_scale = vol * inv_area_[na];
          for (int ca = 0; ca < 2; ++ca) {
            const int row = 2 * free_index_[na] + ca;
            const int ra = 2 * ka + ca;
            for (int kb = 0; kb < 4; ++kb) {
              const int nb = cg.nodes[kb];
              if (pinned_[nb]) continue;
              for (int cb = 0; cb < 2; ++cb) {
                const int col = 2 * free_index_[nb] + cb;
                const int rb = 2 * kb + cb;
                const double kv = B[0][ra] * DB[0][rb] + B[1][ra] * DB[1][rb] +
                                  B[2][ra] * DB[2][rb];
                if (kv != 0.0) trip.emplace_back(row, col, row_scale * kv);
              }
            }
          }
        }
      }
    }

    // Pointwise terms: mass, drags, Coriolis.
    const Params& p = pb_.params;
    for (int n = 0; n < mesh_.n_nodes(); ++n) {
      if (pinned_[n]) continue;
      const int r0 = 2 * free_index_[n];
      double j11 = nm_.m[n] / pb_.dt, j22 = j11, j12 = 0.0, j21 = 0.0;

      if (pb_.forcing.ocean_drag) {
        const Vec2 w = pb_.forcing.v_o - v.at(n);
        const double wn = w.norm();
        const double c0 = p.C_o * p.rho_o;
        j11 += c0 * wn;
        j22 += c0 * wn;
        if (mode == LinMode::Newton && wn > 0.0) {
          j11 += c0 * w.x * w.x / wn;
          j12 += c0 * w.x * w.y / wn;
          j21 += c0 * w.y * w.x / wn;
          j22 += c0 * w.y * w.y / wn;
        }
      }
      if (pb_.forcing.basal && b_node_[n] > 0.0) {
        const Vec2 u = v.at(n);
        const double un = u.norm();
        const double denom = un + p.v0;
        const double c0 = p.k2 * b_node_[n];
        j11 += c0 / denom;
        j22 += c0 / denom;
        if (mode == LinMode::Newton && un > 0.0) {
          const double c1 = c0 / (un * denom * denom);
          j11 -= c1 * u.x * u.x;
          j12 -= c1 * u.x * u.y;
          j21 -= c1 * u.y * u.x;
          j22 -= c1 * u.y * u.y;
        }
      }
      if (pb_.forcing.coriolis) {
        // -f_c = m C_cor (k x v); k x v = (-v_y, v_x).
        const double c0 = nm_.m[n] * p.C_cor;
        j12 += -c0;
        j21 += c0;
      }

      trip.emplace_back(r0, r0, j11);
      trip.emplace_back(r0 + 1, r0 + 1, j22);
      if (j12 != 0.0) trip.emplace_back(r0, r0 + 1, j12);
      if (j21 != 0.0) trip.emplace_back(r0 + 1, r0, j21);
    }

    Eigen::SparseMatrix<double> M(2 * n_free_, 2 * n_free_);
    M.setFromTriplets(trip.begin(), trip.end());
    return M;
  }

  Eigen::VectorXd pack(const VectorField& field) const {
    Eigen::VectorXd out(2 * n_free_);
    for (int n = 0; n < mesh_.n_nodes(); ++n) {
      if (pinned_[n]) continue;
      out[2 * free_index_[n]] = field.x[n];
      out[2 * free_index_[n] + 1] = field.y[n];
    }
    return out;
  }

  void unpack_add(const Eigen::VectorXd& delta, double alpha, VectorField& v) const {
    for (int n = 0; n < mesh_.n_nodes(); ++n) {
      if (pinned_[n]) continue;
      v.x[n] += alpha * delta[2 * free_index_[n]];
      v.y[n] += alpha * delta[2 * free_index_[n] + 1];
    }
  }

 private:
  // All nodal non-stress physics at one node; stress_div is the already
  // area-scaled gather value.
  Vec2 point_residual(const Vec2& vn, const Vec2& vp, int n, const Vec2& stress_div) const {
    const Params& p = pb_.params;
    Vec2 f = wind_stress(pb_.forcing.v_a, p);
    if (pb_.forcing.ocean_drag)
      f = f + ocean_stress(pb_.forcing.v_o, vn, p);  // rel = v_o - v: damps motion
    if (pb_.forcing.coriolis) f = f + coriolis(vn, nm_.m[n] / p.rho, p);
    if (pb_.forcing.tilt) f = f + surface_tilt(pb_.forcing.v_o, p);
    if (pb_.forcing.basal && b_node_[n] > 0.0) {
      const double scale = p.k2 * b_node_[n] / (vn.norm() + p.v0);
      f = f + vn * -scale;
    }
    return (vn - vp) * (nm_.m[n] / pb_.dt) + stress_div - f;
  }

  const MomentumProblem& pb_;
  const Mesh& mesh_;
  NodalMass nm_;
  std::vector<double> b_node_;
  std::vector<Strengths> strengths_;
  std::vector<std::uint8_t> pinned_;
  std::vector<int> free_index_;
  std::vector<double> inv_area_;
  int n_free_ = 0;
  double Qm_[3][3];
};

}  // namespace

NodalMass mass_floor(const ScalarField& h, const ScalarField& A,
                     const Mesh& mesh, const Params& p) {
  if (h.size() != mesh.n_cells() || A.size() != mesh.n_cells())
    throw std::invalid_argument("mass_floor: field size does not match mesh");
  std::vector<double> floored(h.c.size());
  for (std::size_t i = 0; i < h.c.size(); ++i)
    floored[i] = p.rho * std::max(h.c[i], p.h_min);

  NodalMass nm;
  nm.m = cell_to_node_average(mesh, floored);
  nm.pinned.assign(mesh.n_nodes(), 0);
  for (int j = 0; j <= mesh.ny; ++j) {
    for (int i = 0; i <= mesh.nx; ++i) {
      bool all_open = true;
      for (int cj = j - 1; cj <= j && all_open; ++cj)
        for (int ci = i - 1; ci <= i && all_open; ++ci) {
          if (ci < 0 || cj < 0 || ci >= mesh.nx || cj >= mesh.ny) continue;
          if (A[mesh.cell(ci, cj)] >= p.A_min) all_open = false;
        }
      if (all_open) nm.pinned[mesh.node(i, j)] = 1;
    }
  }
  return nm;
}

void momentum_residual(const VectorField& v, const MomentumProblem& problem,
                       VectorField& out) {
  Assembler(problem).residual(v, out);
}

void momentum_residual_reference(const VectorField& v, const MomentumProblem& problem,
                                 VectorField& out) {
  const Mesh& mesh = problem.mesh;
  if (!problem.v_prev || !problem.h || !problem.A)
    throw std::invalid_argument("momentum problem is missing fields");
  const Params& p = problem.params;

  NodalMass nm = mass_floor(*problem.h, *problem.A, mesh, p);
  std::vector<double> b_cell(mesh.n_cells(), 0.0);
  if (problem.forcing.basal && p.k2 > 0.0) {
    for (int c = 0; c < mesh.n_cells(); ++c) {
      const double h = (*problem.h)[c];
      if (h > p.h_crit)
        b_cell[c] = (h - p.h_crit) * std::exp(-p.alpha_b * (1.0 - (*problem.A)[c]));
    }
  }
  const std::vector<double> b_node = cell_to_node_average(mesh, b_cell);

  // Element loop scattering vol * B^T sigma into nodal accumulators.
  std::vector<double> accx(mesh.n_nodes(), 0.0), accy(mesh.n_nodes(), 0.0);
  const double vol = mesh.dx * mesh.dy;
  for (int cj = 0; cj < mesh.ny; ++cj) {
    for (int ci = 0; ci < mesh.nx; ++ci) {
      const Cell cg = cell_geometry(mesh, ci, cj);
      double e11 = 0.0, e22 = 0.0, cross = 0.0;
      for (int k = 0; k < 4; ++k) {
        e11 += cg.gx[k] * v.x[cg.nodes[k]];
        e22 += cg.gy[k] * v.y[cg.nodes[k]];
        cross += cg.gy[k] * v.x[cg.nodes[k]] + cg.gx[k] * v.y[cg.nodes[k]];
      }
      const StrainRate d = make_strain(e11, 0.5 * cross, e22);
      const int c = mesh.cell(ci, cj);
      const RheologyEval ev =
          stress_of(d, strengths_of((*problem.h)[c], (*problem.A)[c], p), p);
      for (int k = 0; k < 4; ++k) {
        accx[cg.nodes[k]] += vol * (ev.sigma.a11 * cg.gx[k] + ev.sigma.a12 * cg.gy[k]);
        accy[cg.nodes[k]] += vol * (ev.sigma.a12 * cg.gx[k] + ev.sigma.a22 * cg.gy[k]);
      }
    }
  }

  out = VectorField(mesh.n_nodes());
  for (int j = 0; j <= mesh.ny; ++j) {
    for (int i = 0; i <= mesh.nx; ++i) {
      const int n = mesh.node(i, j);
      if (mesh.is_boundary_node(i, j) || nm.pinned[n]) {
        out.x[n] = v.x[n];
        out.y[n] = v.y[n];
        continue;
      }
      const int cnt = ((i > 0) + (i < mesh.nx)) * ((j > 0) + (j < mesh.ny));
      const double inv_area = 4.0 / (mesh.dx * mesh.dy * cnt);
      const Vec2 vn = v.at(n);
      Vec2 f = wind_stress(problem.forcing.v_a, p);
      if (problem.forcing.ocean_drag)
        f = f + ocean_stress(problem.forcing.v_o, vn, p);
      if (problem.forcing.coriolis) f = f + coriolis(vn, nm.m[n] / p.rho, p);
      if (problem.forcing.tilt) f = f + surface_tilt(problem.forcing.v_o, p);
      if (problem.forcing.basal && b_node[n] > 0.0)
        f = f + vn * -(p.k2 * b_node[n] / (vn.norm() + p.v0));
      out.x[n] = nm.m[n] / problem.dt * (vn.x - problem.v_prev->x[n]) +
                 accx[n] * inv_area - f.x;
      out.y[n] = nm.m[n] / problem.dt * (vn.y - problem.v_prev->y[n]) +
                 accy[n] * inv_area - f.y;
    }
  }
}

void apply_linearization(const VectorField& v, const VectorField& dv,
                         const MomentumProblem& problem, VectorField& out) {
  Assembler asmb(problem);
  const Eigen::SparseMatrix<double> J = asmb.matrix(v, LinMode::Newton);
  const Eigen::VectorXd x = asmb.pack(dv);
  const Eigen::VectorXd y = J * x;
  out = VectorField(problem.mesh.n_nodes());
  for (int n = 0; n < problem.mesh.n_nodes(); ++n) {
    if (asmb.pinned()[n]) {
      out.x[n] = dv.x[n];
      out.y[n] = dv.y[n];
    } else {
      out.x[n] = y[2 * asmb.free_index(n)];
      out.y[n] = y[2 * asmb.free_index(n) + 1];
    }
  }
}

std::pair<VectorField, SolverReport> solve_momentum(const MomentumProblem& problem,
                                                    const SolverConfig& config) {
  config.validate();
  Assembler asmb(problem);
  const Mesh& mesh = problem.mesh;

  VectorField v = *problem.v_prev;
  for (int n = 0; n < mesh.n_nodes(); ++n) {
    if (asmb.pinned()[n]) {
      v.x[n] = 0.0;
      v.y[n] = 0.0;
    }
  }

  SolverReport rep;
  VectorField r;
  asmb.residual(v, r);
  double rnorm = asmb.norm(r);
  rep.initial_residual = rnorm;
  rep.residual_trace.push_back(rnorm);
  if (std::isnan(rnorm))
    throw std::runtime_error("NaN detected in momentum residual at iteration 0");

  const double target = std::max(config.rtol * rnorm, config.atol);
  VectorField best_v = v;
  double best_norm = rnorm;

  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  bool analyzed = false;

  int iter = 0;
  // Set when a Picard direction fails the line search: near the yield and
  // friction kinks the frozen-coefficient map can point uphill in the
  // residual norm at every damping, while the Newton direction does not.
  // Once promoted, the solve stays in Newton mode.
  bool force_newton = false;
  while (rnorm > target && iter < config.max_iters) {
    const LinMode mode =
        (config.newton && (force_newton || iter >= config.picard_iters))
            ? LinMode::Newton
            : LinMode::Picard;
    const Eigen::SparseMatrix<double> M = asmb.matrix(v, mode);
    if (!analyzed) {
      lu.analyzePattern(M);
      analyzed = true;
    }
    lu.factorize(M);
    if (lu.info() != Eigen::Success)
      throw std::runtime_error("linear solve breakdown in momentum step (factorization)");

    const Eigen::VectorXd rhs = -asmb.pack(r);
    Eigen::VectorXd delta = lu.solve(rhs);
    // Iterative refinement: the viscous block can reach condition numbers
    // ~1e13 in the creep regime, where a single direct solve may sit above
    // the linear residual contract.
    double lin_res = (M * delta - rhs).norm();
    for (int refine = 0; refine < 2 && lin_res > config.linear_tol * rhs.norm(); ++refine) {
      delta += lu.solve(rhs - M * delta);
      lin_res = (M * delta - rhs).norm();
    }
    if (!(lin_res <= config.linear_tol * std::max(rhs.norm(), 1e-300)))
      throw std::runtime_error("linear solve breakdown in momentum step (residual " +
                               std::to_string(lin_res) + ")");

    // Backtracking: halve until the residual decreases.
    double alpha = 1.0;
    bool accepted = false;
    VectorField trial;
    while (alpha >= config.min_damping) {
      trial = v;
      asmb.unpack_add(delta, alpha, trial);
      asmb.residual(trial, r);
      const double tn = asmb.norm(r);
      if (std::isnan(tn))
        throw std::runtime_error("NaN detected in momentum solve at iteration " +
                                 std::to_string(iter + 1));
      if (tn < (1.0 - 1e-4 * alpha) * rnorm) {
        v = trial;
        rnorm = tn;
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    ++iter;
    rep.residual_trace.push_back(rnorm);
    if (!accepted) {
      if (config.newton && mode == LinMode::Picard) {
        force_newton = true;
        rep.note = "picard stalled at iteration " + std::to_string(iter) +
                   "; switched to newton";
        asmb.residual(v, r);  // r holds the rejected trial; restore it
        continue;
      }
      rep.note = "line search stalled at iteration " + std::to_string(iter);
      break;
    }
    if (rnorm < best_norm) {
      best_norm = rnorm;
      best_v = v;
    }
  }

  rep.iterations = iter;
  rep.final_residual = best_norm;
  rep.converged = best_norm <= target;
  if (!rep.converged && rep.note.empty())
    rep.note = "not converged after " + std::to_string(iter) + " iterations";
  return {std::move(best_v), std::move(rep)};
}

}  // namespace fastice
