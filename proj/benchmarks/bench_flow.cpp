#include <benchmark/benchmark.h>

#include <vector>

#include "curvflow/flow.hpp"
#include "curvflow/geometry.hpp"
#include "curvflow/shapes.hpp"
#include "curvflow/sphere_grid.hpp"
#include "curvflow/zonal_filter.hpp"

namespace {

using namespace curvflow;

const SphereGrid& default_grid() {
  static const SphereGrid g = SphereGrid::sphere(96, 192);
  return g;
}

std::vector<double> perturbed_sphere() {
  return build_initial_shape("harmonic(r0=1,e10=0.1,e21=0.05)", default_grid(),
                             SpaceForm::euclidean(), 1);
}

void BM_FrameDerivatives(benchmark::State& state) {
  const SphereGrid& g = default_grid();
  const std::vector<double> rho = perturbed_sphere();
  std::vector<double> g1(g.node_count()), g2(g.node_count()), h11(g.node_count()),
      h12(g.node_count()), h22(g.node_count());
  for (auto _ : state) {
    frame_derivatives(g, rho, g1, g2, h11, h12, h22);
    benchmark::DoNotOptimize(h22.data());
  }
  state.SetItemsProcessed(state.iterations() * g.node_count());
}
BENCHMARK(BM_FrameDerivatives);

void BM_BuildGeometry(benchmark::State& state) {
  const SphereGrid& g = default_grid();
  const std::vector<double> rho = perturbed_sphere();
  for (auto _ : state) {
    const SurfaceGeometry geom = build_geometry(SpaceForm::euclidean(), g, rho);
    benchmark::DoNotOptimize(geom.H.data());
  }
  state.SetItemsProcessed(state.iterations() * g.node_count());
}
BENCHMARK(BM_BuildGeometry);

void BM_SpeedEval(benchmark::State& state) {
  const SphereGrid& g = default_grid();
  FlowConfig fc;
  fc.t_end = 1.0;
  FlowSolver solver(SpaceForm::hyperbolic(), g, fc);
  const std::vector<double> rho =
      build_initial_shape("harmonic(r0=1,e10=0.1)", g, SpaceForm::hyperbolic(), 1);
  std::vector<double> out(g.node_count());
  for (auto _ : state) {
    solver.speed(rho, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * g.node_count());
}
BENCHMARK(BM_SpeedEval);

void BM_StepRK2(benchmark::State& state) {
  const SphereGrid& g = default_grid();
  const Formulation form = state.range(0) ? Formulation::divergence : Formulation::direct;
  FlowConfig fc;
  fc.t_end = 100.0;
  fc.formulation = form;
  FlowSolver solver(SpaceForm::euclidean(), g, fc);
  FlowState st;
  st.rho = perturbed_sphere();
  const double dt = 0.9 * solver.dt_stable(st.rho);
  for (auto _ : state) {
    solver.step(st, dt);
    benchmark::DoNotOptimize(st.rho.data());
  }
  state.SetItemsProcessed(state.iterations() * g.node_count());
}
BENCHMARK(BM_StepRK2)->Arg(0)->Arg(1);

void BM_ZonalFilter(benchmark::State& state) {
  const SphereGrid& g = default_grid();
  ZonalFilter filter(g);
  std::vector<double> f = perturbed_sphere();
  for (auto _ : state) {
    filter.apply(f);
    benchmark::DoNotOptimize(f.data());
  }
  state.SetItemsProcessed(state.iterations() * g.node_count());
}
BENCHMARK(BM_ZonalFilter);

}  // namespace

BENCHMARK_MAIN();
