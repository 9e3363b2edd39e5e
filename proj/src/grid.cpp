#include "fastice/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace fastice {

Mesh make_mesh(int nx, int ny, double length_x, double length_y) {
  if (nx < 2 || ny < 2)
    throw std::invalid_argument("mesh needs at least 2 cells per direction");
  if (!(length_x > 0.0) || !(length_y > 0.0))
    throw std::invalid_argument("mesh lengths must be strictly positive");
  Mesh m;
  m.nx = nx;
  m.ny = ny;
  m.dx = length_x / nx;
  m.dy = length_y / ny;
  return m;
}

State eval_initial_condition(const ScenarioSpec& spec, const Mesh& mesh) {
  spec.validate();
  State s;
  s.t = 0.0;
  s.v = VectorField(mesh.n_nodes());
  s.h = ScalarField(mesh.n_cells());
  s.A = ScalarField(mesh.n_cells(), spec.A0);

  const double Lx = mesh.Lx();
  const double Ly = mesh.Ly();

  for (int j = 0; j < mesh.ny; ++j) {
    for (int i = 0; i < mesh.nx; ++i) {
      double h = spec.h0_base;
      if (spec.initial_condition == "sine_thickness")
        h -= spec.h0_amplitude * std::sin(M_PI * mesh.cell_x(i) / Lx);
      if (h < 0.0) h = 0.0;
      s.h[mesh.cell(i, j)] = h;
    }
  }

  if (spec.v0_amplitude != 0.0) {
    const bool both = spec.initial_velocity_mode == "both";
    for (int j = 0; j <= mesh.ny; ++j) {
      for (int i = 0; i <= mesh.nx; ++i) {
        const double vx = spec.v0_amplitude *
                          std::sin(M_PI * mesh.node_x(i) / Lx) *
                          std::sin(M_PI * mesh.node_y(j) / Ly);
        const int n = mesh.node(i, j);
        s.v.x[n] = vx;
        s.v.y[n] = both ? vx : 0.0;
      }
    }
  }

  // sin(pi) evaluates to ~1e-16, not 0; the Dirichlet rows must be exact.
  for (int j = 0; j <= mesh.ny; ++j) {
    for (int i = 0; i <= mesh.nx; ++i) {
      if (mesh.is_boundary_node(i, j)) {
        const int n = mesh.node(i, j);
        s.v.x[n] = 0.0;
        s.v.y[n] = 0.0;
      }
    }
  }
  return s;
}

std::vector<double> cell_to_node_average(const Mesh& mesh,
                                         const std::vector<double>& cell_values) {
  if (static_cast<int>(cell_values.size()) != mesh.n_cells())
    throw std::invalid_argument("cell field size does not match mesh");
  std::vector<double> out(mesh.n_nodes());
  for (int j = 0; j <= mesh.ny; ++j) {
    for (int i = 0; i <= mesh.nx; ++i) {
      double sum = 0.0;
      int count = 0;
      for (int cj = j - 1; cj <= j; ++cj) {
        for (int ci = i - 1; ci <= i; ++ci) {
          if (ci < 0 || cj < 0 || ci >= mesh.nx || cj >= mesh.ny) continue;
          sum += cell_values[mesh.cell(ci, cj)];
          ++count;
        }
      }
      out[mesh.node(i, j)] = sum / count;
    }
  }
  return out;
}

std::vector<double> node_to_cell_average(const Mesh& mesh,
                                         const std::vector<double>& node_values) {
  if (static_cast<int>(node_values.size()) != mesh.n_nodes())
    throw std::invalid_argument("node field size does not match mesh");
  std::vector<double> out(mesh.n_cells());
  for (int j = 0; j < mesh.ny; ++j) {
    for (int i = 0; i < mesh.nx; ++i) {
      out[mesh.cell(i, j)] =
          0.25 * (node_values[mesh.node(i, j)] + node_values[mesh.node(i + 1, j)] +
                  node_values[mesh.node(i, j + 1)] + node_values[mesh.node(i + 1, j + 1)]);
    }
  }
  return out;
}

}  // namespace fastice
