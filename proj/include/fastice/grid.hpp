#pragma once

#include <vector>

#include "fastice/params.hpp"
#include "fastice/tensor.hpp"

namespace fastice {

// Uniform quadrilateral mesh. Velocity lives at nodes, tracers at cell
// centers (B-grid). Node (i,j), i in [0,nx], j in [0,ny]; cell (i,j),
// i in [0,nx), j in [0,ny). Both row-major with i fastest.
struct Mesh {
  int nx = 0, ny = 0;
  double dx = 0.0, dy = 0.0;
  double origin_x = 0.0, origin_y = 0.0;

  int n_nodes() const { return (nx + 1) * (ny + 1); }
  int n_cells() const { return nx * ny; }
  int node(int i, int j) const { return j * (nx + 1) + i; }
  int cell(int i, int j) const { return j * nx + i; }
  bool is_boundary_node(int i, int j) const {
    return i == 0 || j == 0 || i == nx || j == ny;
  }
  double node_x(int i) const { return origin_x + i * dx; }
  double node_y(int j) const { return origin_y + j * dy; }
  double cell_x(int i) const { return origin_x + (i + 0.5) * dx; }
  double cell_y(int j) const { return origin_y + (j + 0.5) * dy; }
  double Lx() const { return nx * dx; }
  double Ly() const { return ny * dy; }

  bool same_layout(const Mesh& o) const {
    return nx == o.nx && ny == o.ny && dx == o.dx && dy == o.dy &&
           origin_x == o.origin_x && origin_y == o.origin_y;
  }
};

Mesh make_mesh(int nx, int ny, double length_x, double length_y);
inline Mesh make_mesh(int n, double length) { return make_mesh(n, n, length, length); }

// One value per cell.
struct ScalarField {
  std::vector<double> c;

  explicit ScalarField(int n_cells = 0, double fill = 0.0) : c(n_cells, fill) {}
  double& operator[](int i) { return c[i]; }
  double operator[](int i) const { return c[i]; }
  int size() const { return static_cast<int>(c.size()); }
};

// Two components per node, stored as separate arrays.
struct VectorField {
  std::vector<double> x, y;

  explicit VectorField(int n_nodes = 0) : x(n_nodes, 0.0), y(n_nodes, 0.0) {}
  Vec2 at(int n) const { return {x[n], y[n]}; }
  void set(int n, Vec2 v) { x[n] = v.x; y[n] = v.y; }
  int size() const { return static_cast<int>(x.size()); }
};

struct State {
  double t = 0.0;
  VectorField v;
  ScalarField h;
  ScalarField A;
};

// Samples the scenario's analytic initial condition at native locations
// (v at nodes, h/A at cell centers) and zeroes the Dirichlet boundary nodes.
State eval_initial_condition(const ScenarioSpec& spec, const Mesh& mesh);

// Staggering glue. Node values are means of the adjacent cells (4 in the
// interior, 2 on edges, 1 at corners); cell values are means of the 4 corner
// nodes. Both preserve constants exactly and are linear.
std::vector<double> cell_to_node_average(const Mesh& mesh, const std::vector<double>& cell_values);
std::vector<double> node_to_cell_average(const Mesh& mesh, const std::vector<double>& node_values);

}  // namespace fastice
