#include "fastice/transport.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "fastice/parallel.hpp"

namespace fastice {

namespace {

void check_sizes(const Mesh& mesh, const ScalarField& field, const VectorField& v) {
  if (field.size() != mesh.n_cells())
    throw std::invalid_argument("transport: cell field size does not match mesh");
  if (v.size() != mesh.n_nodes())
    throw std::invalid_argument("transport: velocity field size does not match mesh");
}

void check_stability(const Mesh& mesh, double diffusivity, double dt, double cfl) {
  if (cfl > 1.0)
    throw std::runtime_error("transport: CFL violation, max face CFL = " +
                             std::to_string(cfl));
  if (diffusivity > 0.0) {
    const double rx = diffusivity * dt / (mesh.dx * mesh.dx);
    const double ry = diffusivity * dt / (mesh.dy * mesh.dy);
    if (rx > 0.25 || ry > 0.25)
      throw std::runtime_error("transport: diffusion number " +
                               std::to_string(std::max(rx, ry)) + " exceeds 0.25");
  }
}

// Face-normal velocities by edge-midpoint averaging of the nodal field.
// x-face i in [0,nx] of row j sits between cells (i-1,j) and (i,j).
inline double x_face_speed(const Mesh& mesh, const VectorField& v, int i, int j) {
  return 0.5 * (v.x[mesh.node(i, j)] + v.x[mesh.node(i, j + 1)]);
}
inline double y_face_speed(const Mesh& mesh, const VectorField& v, int i, int j) {
  return 0.5 * (v.y[mesh.node(i, j)] + v.y[mesh.node(i + 1, j)]);
}

// Upwind donor value; inflow through a domain edge takes the inside value
// (zero-gradient), which preserves constant fields exactly.
inline double x_face_flux(const Mesh& mesh, const std::vector<double>& c,
                          double u, int i, int j) {
  const int donor = u >= 0.0 ? std::max(i - 1, 0) : std::min(i, mesh.nx - 1);
  return u * c[mesh.cell(donor, j)] * mesh.dy;
}
inline double y_face_flux(const Mesh& mesh, const std::vector<double>& c,
                          double w, int i, int j) {
  const int donor = w >= 0.0 ? std::max(j - 1, 0) : std::min(j, mesh.ny - 1);
  return w * c[mesh.cell(i, donor)] * mesh.dx;
}

inline double diffusion_increment(const Mesh& mesh, const std::vector<double>& c,
                                  double diffusivity, double dt, int i, int j) {
  // Zero-flux boundaries: absent neighbors contribute nothing.
  const double c0 = c[mesh.cell(i, j)];
  double lap = 0.0;
  if (i > 0) lap += (c[mesh.cell(i - 1, j)] - c0) / (mesh.dx * mesh.dx);
  if (i < mesh.nx - 1) lap += (c[mesh.cell(i + 1, j)] - c0) / (mesh.dx * mesh.dx);
  if (j > 0) lap += (c[mesh.cell(i, j - 1)] - c0) / (mesh.dy * mesh.dy);
  if (j < mesh.ny - 1) lap += (c[mesh.cell(i, j + 1)] - c0) / (mesh.dy * mesh.dy);
  return diffusivity * dt * lap;
}

TransportResult clip(ScalarField& field, TracerKind kind) {
  TransportResult r;
  const int n = field.size();
  std::int64_t low = 0, high = 0;
  double mn = field[0], mx = field[0];
  for (int i = 0; i < n; ++i) {
    const double v = field[i];
    mn = std::min(mn, v);
    mx = std::max(mx, v);
    if (v < 0.0) {
      field.c[i] = 0.0;
      ++low;
    } else if (kind == TracerKind::Concentration && v > 1.0) {
      field.c[i] = 1.0;
      ++high;
    }
  }
  r.pre_min = mn;
  r.pre_max = mx;
  r.clips.low = low;
  r.clips.high = high;
  return r;
}

}  // namespace

TransportResult advect_diffuse(const Mesh& mesh, ScalarField& field,
                               const VectorField& v, double diffusivity,
                               double dt, TracerKind kind) {
  check_sizes(mesh, field, v);
  const std::vector<double> old = field.c;
  const int nx = mesh.nx, ny = mesh.ny;

  std::vector<double> fx((nx + 1) * ny), fy(nx * (ny + 1));
  double cfl = 0.0;

#ifdef _OPENMP
#pragma omp parallel for schedule(static) reduction(max : cfl)
#endif
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i <= nx; ++i) {
      const double u = x_face_speed(mesh, v, i, j);
      cfl = std::max(cfl, std::abs(u) * dt / mesh.dx);
      fx[j * (nx + 1) + i] = x_face_flux(mesh, old, u, i, j);
    }
  }
#ifdef _OPENMP
#pragma omp parallel for schedule(static) reduction(max : cfl)
#endif
  for (int j = 0; j <= ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const double w = y_face_speed(mesh, v, i, j);
      cfl = std::max(cfl, std::abs(w) * dt / mesh.dy);
      fy[j * nx + i] = y_face_flux(mesh, old, w, i, j);
    }
  }
  check_stability(mesh, diffusivity, dt, cfl);

  const double inv_area = 1.0 / (mesh.dx * mesh.dy);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      double c = old[mesh.cell(i, j)];
      c -= dt * inv_area *
           (fx[j * (nx + 1) + i + 1] - fx[j * (nx + 1) + i] +
            fy[(j + 1) * nx + i] - fy[j * nx + i]);
      if (diffusivity > 0.0)
        c += diffusion_increment(mesh, old, diffusivity, dt, i, j);
      field.c[mesh.cell(i, j)] = c;
    }
  }

  TransportResult r = clip(field, kind);
  r.cfl = cfl;
  return r;
}

TransportResult advect_diffuse_reference(const Mesh& mesh, ScalarField& field,
                                         const VectorField& v, double diffusivity,
                                         double dt, TracerKind kind) {
  check_sizes(mesh, field, v);
  const std::vector<double> old = field.c;
  const int nx = mesh.nx, ny = mesh.ny;

  double cfl = 0.0;
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i <= nx; ++i)
      cfl = std::max(cfl, std::abs(x_face_speed(mesh, v, i, j)) * dt / mesh.dx);
  }
  for (int j = 0; j <= ny; ++j) {
    for (int i = 0; i < nx; ++i)
      cfl = std::max(cfl, std::abs(y_face_speed(mesh, v, i, j)) * dt / mesh.dy);
  }
  check_stability(mesh, diffusivity, dt, cfl);

  const double inv_area = 1.0 / (mesh.dx * mesh.dy);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const double f_w = x_face_flux(mesh, old, x_face_speed(mesh, v, i, j), i, j);
      const double f_e = x_face_flux(mesh, old, x_face_speed(mesh, v, i + 1, j), i + 1, j);
      const double f_s = y_face_flux(mesh, old, y_face_speed(mesh, v, i, j), i, j);
      const double f_n = y_face_flux(mesh, old, y_face_speed(mesh, v, i, j + 1), i, j + 1);
      double c = old[mesh.cell(i, j)];
      c -= dt * inv_area * (f_e - f_w + f_n - f_s);
      if (diffusivity > 0.0)
        c += diffusion_increment(mesh, old, diffusivity, dt, i, j);
      field.c[mesh.cell(i, j)] = c;
    }
  }

  TransportResult r = clip(field, kind);
  r.cfl = cfl;
  return r;
}

double total_mass(const ScalarField& field, const Mesh& mesh) {
  if (field.size() != mesh.n_cells())
    throw std::invalid_argument("total_mass: field size does not match mesh");
  const double sum =
      deterministic_sum(field.c.size(), [&](std::size_t i) { return field.c[i]; });
  return sum * mesh.dx * mesh.dy;
}

}  // namespace fastice
