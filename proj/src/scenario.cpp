#include "fastice/scenario.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "fastice/momentum.hpp"
#include "fastice/transport.hpp"
#include "fastice/version.hpp"

namespace fastice {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string snapshot_name(int step) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "snapshots/step_%04d.vtk", step);
  return buf;
}

Vec2 cell_velocity(const State& s, const Mesh& mesh, int i, int j) {
  const int n00 = mesh.node(i, j), n10 = mesh.node(i + 1, j);
  const int n01 = mesh.node(i, j + 1), n11 = mesh.node(i + 1, j + 1);
  return {0.25 * (s.v.x[n00] + s.v.x[n10] + s.v.x[n01] + s.v.x[n11]),
          0.25 * (s.v.y[n00] + s.v.y[n10] + s.v.y[n01] + s.v.y[n11])};
}

void track_field_bounds(const State& state, const Mesh& mesh, RunManifest& m) {
  for (int c = 0; c < mesh.n_cells(); ++c) {
    m.min_h = std::min(m.min_h, state.h[c]);
    m.min_A = std::min(m.min_A, state.A[c]);
    m.max_A = std::max(m.max_A, state.A[c]);
  }
  for (int j = 0; j <= mesh.ny; ++j)
    for (int i = 0; i <= mesh.nx; ++i)
      if (mesh.is_boundary_node(i, j)) {
        const int n = mesh.node(i, j);
        m.max_boundary_speed =
            std::max(m.max_boundary_speed, std::hypot(state.v.x[n], state.v.y[n]));
      }
}

DiagnosticsRow make_row(const State& state, const Mesh& mesh, const Params& p,
                        double prev_ke, double prev_cum, double dt,
                        std::int64_t clips) {
  DiagnosticsRow row;
  row.t = state.t;
  row.ke_inst = kinetic_energy(state, mesh, p);
  row.ke_cum = dt > 0.0 ? prev_cum + 0.5 * (prev_ke + row.ke_inst) * dt : 0.0;
  row.max_speed = max_speed(state.v);
  row.p99_scaled_speed = p99_scaled_speed(state, mesh);
  row.polynya_area = polynya_area(state.A, mesh, p.polynya_threshold);
  row.mass_h = total_mass(state.h, mesh);
  row.clip_count = clips;
  return row;
}

}  // namespace

RunManifest run(const ScenarioSpec& spec, const Params& params,
                const SolverConfig& solver, const RunOptions& options) {
  spec.validate();
  params.validate();
  solver.validate();
  if (options.out_dir.empty()) throw std::invalid_argument("output directory not set");

  Params p = params;
  if (!spec.use_tensile) p.k_t = 0.0;

  const Mesh mesh = make_mesh(spec.cells_per_side, spec.domain_length);
  State state;
  int step0 = 0;
  if (!options.resume_from.empty()) {
    Mesh loaded;
    state = load_state(options.resume_from, loaded);
    if (!loaded.same_layout(mesh))
      throw std::invalid_argument("resume state does not match the scenario mesh");
    step0 = static_cast<int>(std::llround(state.t / spec.dt));
  } else {
    state = eval_initial_condition(spec, mesh);
  }

  const int duration_steps =
      static_cast<int>(std::ceil(spec.duration / spec.dt - 1e-12));
  int last_step = duration_steps;
  if (options.max_steps >= 0) last_step = std::min(last_step, step0 + options.max_steps);

  const double snap_interval = options.snapshot_interval >= 0.0
                                   ? options.snapshot_interval
                                   : spec.snapshot_interval;
  const int snap_every =
      snap_interval > 0.0
          ? std::max(1, static_cast<int>(std::llround(snap_interval / spec.dt)))
          : 0;

  fs::create_directories(options.out_dir);
  fs::create_directories(fs::path(options.out_dir) / "snapshots");
  const auto in_dir = [&](const std::string& rel) {
    return (fs::path(options.out_dir) / rel).string();
  };

  RunManifest manifest;
  manifest.params = p;
  manifest.scenario = spec;
  manifest.solver = solver;
  manifest.version = kVersion;
  manifest.seed = options.seed;
  manifest.mass_initial = total_mass(state.h, mesh);
  manifest.min_h = state.h[0];
  manifest.min_A = manifest.max_A = state.A[0];
  track_field_bounds(state, mesh, manifest);

  const ForcingInputs forcing = forcing_from(spec);

  std::vector<DiagnosticsRow> rows;
  rows.push_back(make_row(state, mesh, p, 0.0, 0.0, 0.0, 0));

  auto snap = [&](int step) {
    const std::string rel = snapshot_name(step);
    write_snapshot(state, mesh, in_dir(rel));
    manifest.files.push_back(rel);
  };
  if (step0 == 0) snap(0);

  const auto t_start = std::chrono::steady_clock::now();
  auto finalize = [&]() {
    manifest.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
            .count();
    write_timeseries(rows, in_dir("timeseries.csv"));
    save_state(state, mesh, in_dir("state_final.bin"));
    manifest.files.push_back("timeseries.csv");
    manifest.files.push_back("state_final.bin");
    manifest.files.push_back("manifest.json");
    write_manifest(manifest, in_dir("manifest.json"));
  };

  for (int step = step0 + 1; step <= last_step; ++step) {
    try {
      MomentumProblem prob;
      prob.mesh = mesh;
      prob.v_prev = &state.v;
      prob.h = &state.h;
      prob.A = &state.A;
      prob.forcing = forcing;
      prob.dt = spec.dt;
      prob.params = p;
      auto [v_new, report] = solve_momentum(prob, solver);
      state.v = std::move(v_new);

      const TransportResult rh =
          advect_diffuse(mesh, state.h, state.v, p.d_h, spec.dt, TracerKind::Thickness);
      const TransportResult ra = advect_diffuse(mesh, state.A, state.v, p.d_A, spec.dt,
                                                TracerKind::Concentration);
      state.t = step * spec.dt;

      const DiagnosticsRow& prev = rows.back();
      rows.push_back(make_row(state, mesh, p, prev.ke_inst, prev.ke_cum, spec.dt,
                              rh.clips.total() + ra.clips.total()));
      const DiagnosticsRow& row = rows.back();

      manifest.steps = step;
      manifest.total_clips += row.clip_count;
      if (manifest.mass_initial > 0.0)
        manifest.max_rel_mass_drift =
            std::max(manifest.max_rel_mass_drift,
                     std::abs(row.mass_h - manifest.mass_initial) / manifest.mass_initial);
      if (prev.ke_inst > 0.0)
        manifest.max_ke_increase = std::max(
            manifest.max_ke_increase, (row.ke_inst - prev.ke_inst) / prev.ke_inst);
      track_field_bounds(state, mesh, manifest);
      manifest.step_summaries.push_back(
          {report.iterations, report.final_residual, report.converged});

      if ((snap_every > 0 && step % snap_every == 0) || step == last_step) snap(step);
      if (!options.quiet &&
          (step == last_step || step % std::max(1, last_step / 10) == 0))
        std::printf("step %d/%d  t=%.0f s  iters=%d  res=%.3e%s\n", step, last_step,
                    state.t, report.iterations, report.final_residual,
                    report.converged ? "" : "  [not converged]");
    } catch (const std::exception& err) {
      manifest.aborted = true;
      manifest.abort_step = step;
      manifest.abort_reason = err.what();
      finalize();
      throw;
    }
  }

  finalize();
  return manifest;
}

void write_manifest(const RunManifest& m, const std::string& path) {
  Config cfg{m.params, m.scenario, m.solver};
  json j;
  j["version"] = m.version;
  j["seed"] = m.seed;
  j["wall_seconds"] = m.wall_seconds;
  j["steps"] = m.steps;
  j["config"] = json::parse(serialize_config(cfg));
  j["files"] = m.files;
  json inv;
  inv["mass_initial"] = m.mass_initial;
  inv["max_rel_mass_drift"] = m.max_rel_mass_drift;
  inv["min_h"] = m.min_h;
  inv["min_A"] = m.min_A;
  inv["max_A"] = m.max_A;
  inv["max_boundary_speed"] = m.max_boundary_speed;
  inv["total_clips"] = m.total_clips;
  inv["max_ke_increase"] = m.max_ke_increase;
  j["invariants"] = inv;
  j["aborted"] = m.aborted;
  j["abort_step"] = m.abort_step;
  j["abort_reason"] = m.abort_reason;
  json summaries = json::array();
  for (const auto& s : m.step_summaries)
    summaries.push_back({s.iterations, s.final_residual, s.converged});
  j["step_summaries"] = summaries;

  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << j.dump(2) << "\n";
  if (!out) throw std::runtime_error("write failed: " + path);
}

RunManifest read_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  json j = json::parse(in);
  RunManifest m;
  const Config cfg = parse_config(j.at("config").dump());
  m.params = cfg.params;
  m.scenario = cfg.scenario;
  m.solver = cfg.solver;
  m.version = j.at("version").get<std::string>();
  m.seed = j.at("seed").get<std::uint64_t>();
  m.wall_seconds = j.at("wall_seconds").get<double>();
  m.steps = j.at("steps").get<int>();
  m.files = j.at("files").get<std::vector<std::string>>();
  const json& inv = j.at("invariants");
  m.mass_initial = inv.at("mass_initial").get<double>();
  m.max_rel_mass_drift = inv.at("max_rel_mass_drift").get<double>();
  m.min_h = inv.at("min_h").get<double>();
  m.min_A = inv.at("min_A").get<double>();
  m.max_A = inv.at("max_A").get<double>();
  m.max_boundary_speed = inv.at("max_boundary_speed").get<double>();
  m.total_clips = inv.at("total_clips").get<std::int64_t>();
  m.max_ke_increase = inv.at("max_ke_increase").get<double>();
  m.aborted = j.at("aborted").get<bool>();
  m.abort_step = j.at("abort_step").get<int>();
  m.abort_reason = j.at("abort_reason").get<std::string>();
  for (const auto& s : j.at("step_summaries")) {
    StepSummary sum;
    sum.iterations = s.at(0).get<int>();
    sum.final_residual = s.at(1).get<double>();
    sum.converged = s.at(2).get<bool>();
    m.step_summaries.push_back(sum);
  }
  return m;
}

namespace {

RunSummaryMetrics metrics_of(const State& state, const Mesh& mesh, double h_crit,
                             double strip_width) {
  RunSummaryMetrics s;
  s.final_t = state.t;

  double vx_sum = 0.0;
  int interior = 0;
  for (int j = 1; j < mesh.ny; ++j)
    for (int i = 1; i < mesh.nx; ++i) {
      vx_sum += state.v.x[mesh.node(i, j)];
      ++interior;
    }
  s.interior_mean_eastward = interior > 0 ? vx_sum / interior : 0.0;

  double strip_sum = 0.0, grounded_sum = 0.0, min_A = 1.0;
  int strip_cells = 0;
  for (int j = 0; j < mesh.ny; ++j)
    for (int i = 0; i < mesh.nx; ++i) {
      const double x = mesh.cell_x(i);
      const int c = mesh.cell(i, j);
      if (x < 0.5 * mesh.Lx()) min_A = std::min(min_A, state.A[c]);
      if (x >= strip_width) continue;
      const double speed = cell_velocity(state, mesh, i, j).norm();
      strip_sum += speed;
      ++strip_cells;
      if (state.h[c] > h_crit) {
        grounded_sum += speed;
        ++s.grounded_strip_cells;
      }
    }
  s.left_strip_mean_speed = strip_cells > 0 ? strip_sum / strip_cells : 0.0;
  // Empty grounded set reports 0 with the count; callers decide what that means.
  s.grounded_strip_mean_speed =
      s.grounded_strip_cells > 0 ? grounded_sum / s.grounded_strip_cells : 0.0;
  s.min_A_left_half = min_A;
  return s;
}

}  // namespace

RunSummaryMetrics summarize_run(const std::string& dir, double strip_width) {
  const RunManifest m = read_manifest((fs::path(dir) / "manifest.json").string());
  Mesh mesh;
  const State state = load_state((fs::path(dir) / "state_final.bin").string(), mesh);
  return metrics_of(state, mesh, m.params.h_crit, strip_width);
}

CompareReport compare(const std::string& dir_a, const std::string& dir_b) {
  const RunManifest ma = read_manifest((fs::path(dir_a) / "manifest.json").string());
  const RunManifest mb = read_manifest((fs::path(dir_b) / "manifest.json").string());
  Mesh mesh_a, mesh_b;
  const State a = load_state((fs::path(dir_a) / "state_final.bin").string(), mesh_a);
  const State b = load_state((fs::path(dir_b) / "state_final.bin").string(), mesh_b);
  if (!mesh_a.same_layout(mesh_b))
    throw std::invalid_argument("runs use incompatible meshes");

  CompareReport r;
  r.a = metrics_of(a, mesh_a, ma.params.h_crit, r.strip_width);
  r.b = metrics_of(b, mesh_b, mb.params.h_crit, r.strip_width);
  for (int c = 0; c < mesh_a.n_cells(); ++c) {
    r.max_abs_dh = std::max(r.max_abs_dh, std::abs(a.h[c] - b.h[c]));
    r.max_abs_dA = std::max(r.max_abs_dA, std::abs(a.A[c] - b.A[c]));
  }
  for (int n = 0; n < mesh_a.n_nodes(); ++n) {
    const Vec2 dv = a.v.at(n) - b.v.at(n);
    r.max_abs_dv = std::max(r.max_abs_dv, dv.norm());
  }
  return r;
}

std::string format_report(const CompareReport& r) {
  std::ostringstream os;
  os.precision(6);
  os << std::scientific;
  auto line = [&](const char* label, double a, double b) {
    os << "  " << label << "  A=" << a << "  B=" << b << "\n";
  };
  os << "final states at t_A=" << r.a.final_t << " s, t_B=" << r.b.final_t << " s\n";
  os << "max |dh| " << r.max_abs_dh << "  max |dA| " << r.max_abs_dA << "  max |dv| "
     << r.max_abs_dv << "\n";
  line("interior mean eastward v ", r.a.interior_mean_eastward,
       r.b.interior_mean_eastward);
  line("left-strip mean speed    ", r.a.left_strip_mean_speed,
       r.b.left_strip_mean_speed);
  line("grounded-strip mean speed", r.a.grounded_strip_mean_speed,
       r.b.grounded_strip_mean_speed);
  os << "  grounded-strip cells       A=" << r.a.grounded_strip_cells
     << "  B=" << r.b.grounded_strip_cells << "\n";
  line("min A on left half       ", r.a.min_A_left_half, r.b.min_A_left_half);
  return os.str();
}

}  // namespace fastice
