#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fastice/grid.hpp"
#include "fastice/params.hpp"

namespace fastice {

struct DiagnosticsRow {
  double t = 0.0;                // s
  double ke_inst = 0.0;          // J
  double ke_cum = 0.0;           // J s, trapezoidal in t
  double max_speed = 0.0;        // max nodal |v|, m/s
  double p99_scaled_speed = 0.0; // see p99_scaled_speed()
  double polynya_area = 0.0;     // m^2
  double mass_h = 0.0;           // m^3
  std::int64_t clip_count = 0;   // tracer clips this step
};

// Midpoint-rule integral of (1/2) rho h |v|^2 with v averaged to cell centers.
// If non-null, `integrand` receives the per-cell energy density (J/m^2).
double kinetic_energy(const State& state, const Mesh& mesh, const Params& p,
                      std::vector<double>* integrand = nullptr);

// Max Euclidean speed over nodes.
double max_speed(const VectorField& v);

// Nearest-rank 99th percentile of A|v| (v cell-averaged) over cells with
// A > 0.5; zero if no cell qualifies.
double p99_scaled_speed(const State& state, const Mesh& mesh);

// Total area of cells with A < threshold.
double polynya_area(const ScalarField& A, const Mesh& mesh, double threshold);

// CSV time series. Fixed header, one row per step.
extern const char* const kTimeseriesHeader;
void write_timeseries(const std::vector<DiagnosticsRow>& rows, const std::string& path);
std::vector<DiagnosticsRow> read_timeseries(const std::string& path);

// Legacy-ASCII structured-points snapshot: point vectors v, cell scalars
// h, A and A|v|, with the time stamp in a FIELD block. Values are printed
// with 17 significant digits so a parse is bit-exact.
void write_snapshot(const State& state, const Mesh& mesh, const std::string& path);

struct Snapshot {
  Mesh mesh;
  State state;
  std::vector<double> scaled_speed;  // cell A|v| as written
};

Snapshot read_snapshot(const std::string& path);

// Raw binary state dump for exact restarts.
void save_state(const State& state, const Mesh& mesh, const std::string& path);
State load_state(const std::string& path, Mesh& mesh_out);

}  // namespace fastice
