#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fastice/diagnostics.hpp"
#include "fastice/params.hpp"

namespace fastice {

struct RunOptions {
  std::string out_dir;
  std::uint64_t seed = 42;        // recorded; runs are deterministic regardless
  double snapshot_interval = -1;  // <0: take the scenario's value
  std::string resume_from;        // binary state path; empty = fresh start
  int max_steps = -1;             // <0: run the full duration (debug aid)
  bool quiet = false;
};

struct StepSummary {
  int iterations = 0;
  double final_residual = 0.0;
  bool converged = true;
};

struct RunManifest {
  Params params;        // as resolved for the run (after toggles)
  ScenarioSpec scenario;
  SolverConfig solver;
  std::string version;
  std::uint64_t seed = 0;
  double wall_seconds = 0.0;
  int steps = 0;
  std::vector<std::string> files;
  std::vector<StepSummary> step_summaries;

  // Invariants tracked across the whole run.
  double mass_initial = 0.0;
  double max_rel_mass_drift = 0.0;
  double min_h = 0.0;
  double min_A = 0.0, max_A = 0.0;
  double max_boundary_speed = 0.0;  // must stay exactly 0
  std::int64_t total_clips = 0;
  double max_ke_increase = 0.0;     // most positive relative KE increase seen
  bool aborted = false;
  int abort_step = -1;
  std::string abort_reason;
};

// Executes ceil(duration/dt) momentum+transport steps, writing
// timeseries.csv, snapshots/NNNN.vtk, state_final.bin and manifest.json
// into out_dir. On solver NaN the manifest is written before throwing.
RunManifest run(const ScenarioSpec& spec, const Params& params,
                const SolverConfig& solver, const RunOptions& options);

void write_manifest(const RunManifest& m, const std::string& path);
RunManifest read_manifest(const std::string& path);

// Field and summary comparison of two finished run directories.
struct RunSummaryMetrics {
  double interior_mean_eastward = 0.0;   // mean v_x over interior nodes
  double left_strip_mean_speed = 0.0;    // cells with x < strip_width
  double grounded_strip_mean_speed = 0.0;// ... and h > h_crit; 0 if none
  int grounded_strip_cells = 0;
  double min_A_left_half = 0.0;
  double final_t = 0.0;
};

struct CompareReport {
  RunSummaryMetrics a, b;
  double max_abs_dh = 0.0;
  double max_abs_dA = 0.0;
  double max_abs_dv = 0.0;
  double strip_width = 64e3;  // m
};

CompareReport compare(const std::string& dir_a, const std::string& dir_b);
std::string format_report(const CompareReport& r);

// Metrics of a single run directory's final snapshot (used by compare and
// the acceptance checks).
RunSummaryMetrics summarize_run(const std::string& dir, double strip_width = 64e3);

}  // namespace fastice
