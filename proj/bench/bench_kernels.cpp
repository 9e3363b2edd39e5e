// Parallel kernels against their serial reference implementations on a
// production-sized state. The reference paths are the test oracles; keeping
// them benchmarked stops them from silently rotting into dead code.
#include <benchmark/benchmark.h>

#include "fastice/grid.hpp"
#include "fastice/momentum.hpp"
#include "fastice/params.hpp"
#include "fastice/transport.hpp"

namespace {

struct Fixture {
  fastice::Mesh mesh;
  fastice::State state;
  fastice::MomentumProblem prob;

  explicit Fixture(int n) {
    fastice::ScenarioSpec spec;
    spec.cells_per_side = n;
    spec.domain_length = 512e3;
    spec.initial_condition = "sine_thickness";
    spec.v0_amplitude = 0.05;
    spec.wind = {20.0, 0.0};
    mesh = fastice::make_mesh(n, spec.domain_length);
    state = fastice::eval_initial_condition(spec, mesh);
    prob.mesh = mesh;
    prob.v_prev = &state.v;
    prob.h = &state.h;
    prob.A = &state.A;
    prob.forcing = fastice::forcing_from(spec);
    prob.dt = spec.dt;
    prob.params = fastice::Params{};
  }
};

void BM_residual_parallel(benchmark::State& bs) {
  Fixture f(static_cast<int>(bs.range(0)));
  fastice::VectorField out(f.mesh.n_nodes());
  for (auto _ : bs) {
    fastice::momentum_residual(f.state.v, f.prob, out);
    benchmark::DoNotOptimize(out.x.data());
  }
}

void BM_residual_reference(benchmark::State& bs) {
  Fixture f(static_cast<int>(bs.range(0)));
  fastice::VectorField out(f.mesh.n_nodes());
  for (auto _ : bs) {
    fastice::momentum_residual_reference(f.state.v, f.prob, out);
    benchmark::DoNotOptimize(out.x.data());
  }
}

void BM_transport_parallel(benchmark::State& bs) {
  Fixture f(static_cast<int>(bs.range(0)));
  for (auto _ : bs) {
    fastice::ScalarField h = f.state.h;
    auto r = fastice::advect_diffuse(f.mesh, h, f.state.v, 0.0, f.prob.dt,
                                     fastice::TracerKind::Thickness);
    benchmark::DoNotOptimize(r.cfl);
  }
}

void BM_transport_reference(benchmark::State& bs) {
  Fixture f(static_cast<int>(bs.range(0)));
  for (auto _ : bs) {
    fastice::ScalarField h = f.state.h;
    auto r = fastice::advect_diffuse_reference(f.mesh, h, f.state.v, 0.0, f.prob.dt,
                                               fastice::TracerKind::Thickness);
    benchmark::DoNotOptimize(r.cfl);
  }
}

}  // namespace

BENCHMARK(BM_residual_parallel)->Arg(64)->Arg(128)->Arg(256);
BENCHMARK(BM_residual_reference)->Arg(64)->Arg(128)->Arg(256);
BENCHMARK(BM_transport_parallel)->Arg(64)->Arg(128)->Arg(256);
BENCHMARK(BM_transport_reference)->Arg(64)->Arg(128)->Arg(256);

BENCHMARK_MAIN();
