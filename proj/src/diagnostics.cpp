#include "fastice/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "fastice/parallel.hpp"

namespace fastice {

namespace {

// 17 significant digits round-trip a double exactly.
std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

Vec2 cell_velocity(const State& s, const Mesh& mesh, int i, int j) {
  const int n00 = mesh.node(i, j), n10 = mesh.node(i + 1, j);
  const int n01 = mesh.node(i, j + 1), n11 = mesh.node(i + 1, j + 1);
  return {0.25 * (s.v.x[n00] + s.v.x[n10] + s.v.x[n01] + s.v.x[n11]),
          0.25 * (s.v.y[n00] + s.v.y[n10] + s.v.y[n01] + s.v.y[n11])};
}

}  // namespace

double kinetic_energy(const State& state, const Mesh& mesh, const Params& p,
                      std::vector<double>* integrand) {
  std::vector<double> density(mesh.n_cells());
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const int i = c % mesh.nx;
    const int j = c / mesh.nx;
    const Vec2 v = cell_velocity(state, mesh, i, j);
    density[c] = 0.5 * p.rho * state.h[c] * (v.x * v.x + v.y * v.y);
  }
  const double sum = deterministic_sum(density);
  if (integrand) *integrand = std::move(density);
  return sum * mesh.dx * mesh.dy;
}

double max_speed(const VectorField& v) {
  double mx = 0.0;
  for (int n = 0; n < v.size(); ++n)
    mx = std::max(mx, std::hypot(v.x[n], v.y[n]));
  return mx;
}

double p99_scaled_speed(const State& state, const Mesh& mesh) {
  std::vector<double> vals;
  vals.reserve(mesh.n_cells());
  for (int j = 0; j < mesh.ny; ++j) {
    for (int i = 0; i < mesh.nx; ++i) {
      const double a = state.A[mesh.cell(i, j)];
      if (a > 0.5) vals.push_back(a * cell_velocity(state, mesh, i, j).norm());
    }
  }
  if (vals.empty()) return 0.0;
  // Nearest-rank percentile.
  const std::size_t rank =
      static_cast<std::size_t>(std::ceil(0.99 * static_cast<double>(vals.size())));
  std::nth_element(vals.begin(), vals.begin() + (rank - 1), vals.end());
  return vals[rank - 1];
}

double polynya_area(const ScalarField& A, const Mesh& mesh, double threshold) {
  std::int64_t count = 0;
  for (int c = 0; c < A.size(); ++c)
    if (A[c] < threshold) ++count;
  return static_cast<double>(count) * mesh.dx * mesh.dy;
}

const char* const kTimeseriesHeader =
    "t_seconds,ke_inst,ke_cum,max_speed,p99_scaled_speed,polynya_area_m2,mass_h_m3,clip_count";

void write_timeseries(const std::vector<DiagnosticsRow>& rows, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << kTimeseriesHeader << "\n";
  for (const auto& r : rows) {
    out << fmt(r.t) << ',' << fmt(r.ke_inst) << ',' << fmt(r.ke_cum) << ','
        << fmt(r.max_speed) << ',' << fmt(r.p99_scaled_speed) << ','
        << fmt(r.polynya_area) << ',' << fmt(r.mass_h) << ',' << r.clip_count << "\n";
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::vector<DiagnosticsRow> read_timeseries(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty time series: " + path);
  if (line != kTimeseriesHeader)
    throw std::runtime_error("unexpected time series header in " + path);
  std::vector<DiagnosticsRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    DiagnosticsRow r;
    long long clips = 0;
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf,%lf,%lf,%lf,%lld", &r.t,
                    &r.ke_inst, &r.ke_cum, &r.max_speed, &r.p99_scaled_speed,
                    &r.polynya_area, &r.mass_h, &clips) != 8)
      throw std::runtime_error("malformed time series row in " + path);
    r.clip_count = clips;
    rows.push_back(r);
  }
  return rows;
}

void write_snapshot(const State& state, const Mesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  const int npx = mesh.nx + 1, npy = mesh.ny + 1;
  out << "# vtk DataFile Version 3.0\n";
  out << "sea ice state at t=" << fmt(state.t) << " s\n";
  out << "ASCII\n";
  out << "DATASET STRUCTURED_POINTS\n";
  out << "DIMENSIONS " << npx << ' ' << npy << " 1\n";
  out << "ORIGIN " << fmt(mesh.origin_x) << ' ' << fmt(mesh.origin_y) << " 0\n";
  out << "SPACING " << fmt(mesh.dx) << ' ' << fmt(mesh.dy) << " 1\n";
  out << "FIELD FieldData 1\n";
  out << "TIME 1 1 double\n" << fmt(state.t) << "\n";

  out << "POINT_DATA " << npx * npy << "\n";
  out << "VECTORS velocity double\n";
  for (int n = 0; n < mesh.n_nodes(); ++n)
    out << fmt(state.v.x[n]) << ' ' << fmt(state.v.y[n]) << " 0\n";

  out << "CELL_DATA " << mesh.n_cells() << "\n";
  out << "SCALARS h double 1\nLOOKUP_TABLE default\n";
  for (int c = 0; c < mesh.n_cells(); ++c) out << fmt(state.h[c]) << "\n";
  out << "SCALARS A double 1\nLOOKUP_TABLE default\n";
  for (int c = 0; c < mesh.n_cells(); ++c) out << fmt(state.A[c]) << "\n";
  out << "SCALARS scaled_speed double 1\nLOOKUP_TABLE default\n";
  for (int j = 0; j < mesh.ny; ++j)
    for (int i = 0; i < mesh.nx; ++i)
      out << fmt(state.A[mesh.cell(i, j)] * cell_velocity(state, mesh, i, j).norm())
          << "\n";
  if (!out) throw std::runtime_error("write failed: " + path);
}

namespace {

[[noreturn]] void bad_snapshot(const std::string& path, const std::string& why) {
  throw std::runtime_error("cannot parse snapshot " + path + ": " + why);
}

}  // namespace

Snapshot read_snapshot(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  Snapshot snap;
  std::string line, word;
  int npx = 0, npy = 0, npz = 0;
  double sx = 0, sy = 0, sz = 0;

  auto expect_line = [&](const char* what) {
    if (!std::getline(in, line)) bad_snapshot(path, std::string("missing ") + what);
  };
  expect_line("header");
  expect_line("title");
  expect_line("format");
  if (line != "ASCII") bad_snapshot(path, "not ASCII");
  expect_line("dataset");
  if (line != "DATASET STRUCTURED_POINTS") bad_snapshot(path, "not structured points");

  while (std::getline(in, line)) {
    std::istringstream ls(line);
    ls >> word;
    if (word == "DIMENSIONS") {
      ls >> npx >> npy >> npz;
      if (npx < 3 || npy < 3 || npz != 1) bad_snapshot(path, "bad dimensions");
      snap.mesh.nx = npx - 1;
      snap.mesh.ny = npy - 1;
    } else if (word == "ORIGIN") {
      ls >> snap.mesh.origin_x >> snap.mesh.origin_y;
    } else if (word == "SPACING") {
      ls >> sx >> sy >> sz;
      snap.mesh.dx = sx;
      snap.mesh.dy = sy;
    } else if (word == "TIME") {
      expect_line("time value");
      snap.state.t = std::stod(line);
    } else if (word == "POINT_DATA") {
      break;
    }
  }
  if (npx == 0) bad_snapshot(path, "no dimensions");
  const Mesh& mesh = snap.mesh;

  expect_line("vectors");
  if (line.rfind("VECTORS velocity", 0) != 0) bad_snapshot(path, "expected velocity");
  snap.state.v = VectorField(mesh.n_nodes());
  for (int n = 0; n < mesh.n_nodes(); ++n) {
    double z;
    if (!(in >> snap.state.v.x[n] >> snap.state.v.y[n] >> z))
      bad_snapshot(path, "truncated velocity");
  }

  auto read_scalars = [&](const std::string& name, std::vector<double>& out) {
    std::string s;
    in >> s;                       // SCALARS or CELL_DATA
    if (s == "CELL_DATA") {
      int n;
      in >> n >> s;
    }
    if (s != "SCALARS") bad_snapshot(path, "expected SCALARS");
    in >> s;
    if (s != name) bad_snapshot(path, "expected field " + name + ", got " + s);
    in >> s >> s;                  // type, component count
    in >> s >> s;                  // LOOKUP_TABLE default
    out.resize(mesh.n_cells());
    for (int c = 0; c < mesh.n_cells(); ++c)
      if (!(in >> out[c])) bad_snapshot(path, "truncated field " + name);
  };
  read_scalars("h", snap.state.h.c);
  read_scalars("A", snap.state.A.c);
  read_scalars("scaled_speed", snap.scaled_speed);
  return snap;
}

void save_state(const State& state, const Mesh& mesh, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  const char magic[8] = {'F', 'I', 'S', 'T', 'A', 'T', 'E', '1'};
  out.write(magic, 8);
  const std::int32_t dims[2] = {mesh.nx, mesh.ny};
  out.write(reinterpret_cast<const char*>(dims), sizeof(dims));
  const double geom[5] = {mesh.dx, mesh.dy, mesh.origin_x, mesh.origin_y, state.t};
  out.write(reinterpret_cast<const char*>(geom), sizeof(geom));
  auto dump = [&](const std::vector<double>& v) {
    out.write(reinterpret_cast<const char*>(v.data()),
              static_cast<std::streamsize>(v.size() * sizeof(double)));
  };
  dump(state.v.x);
  dump(state.v.y);
  dump(state.h.c);
  dump(state.A.c);
  if (!out) throw std::runtime_error("write failed: " + path);
}

State load_state(const std::string& path, Mesh& mesh_out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path);
  char magic[8];
  in.read(magic, 8);
  if (std::memcmp(magic, "FISTATE1", 8) != 0)
    throw std::runtime_error("not a state file: " + path);
  std::int32_t dims[2];
  in.read(reinterpret_cast<char*>(dims), sizeof(dims));
  double geom[5];
  in.read(reinterpret_cast<char*>(geom), sizeof(geom));
  if (!in || dims[0] < 2 || dims[1] < 2)
    throw std::runtime_error("corrupt state file: " + path);
  mesh_out = Mesh{dims[0], dims[1], geom[0], geom[1], geom[2], geom[3]};
  State s;
  s.t = geom[4];
  s.v = VectorField(mesh_out.n_nodes());
  s.h = ScalarField(mesh_out.n_cells());
  s.A = ScalarField(mesh_out.n_cells());
  auto slurp = [&](std::vector<double>& v) {
    in.read(reinterpret_cast<char*>(v.data()),
            static_cast<std::streamsize>(v.size() * sizeof(double)));
  };
  slurp(s.v.x);
  slurp(s.v.y);
  slurp(s.h.c);
  slurp(s.A.c);
  if (!in) throw std::runtime_error("truncated state file: " + path);
  return s;
}

}  // namespace fastice
