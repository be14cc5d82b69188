#include <benchmark/benchmark.h>

#include "nlstab/domains.hpp"
#include "nlstab/frlap.hpp"
#include "nlstab/measures.hpp"
#include "nlstab/movingplanes.hpp"
#include "nlstab/seminorm.hpp"
#include "nlstab/specfun.hpp"

using namespace nlstab;

static void BM_GammaNse(benchmark::State& state) {
  const FracParams p = FracParams::make(2, 0.5);
  double eps = 0.01;
  for (auto _ : state) {
    benchmark::DoNotOptimize(gamma_nse(p, eps));
    eps = eps == 0.01 ? 0.02 : 0.01;
  }
}
BENCHMARK(BM_GammaNse);

static void BM_FrLapTorsion(benchmark::State& state) {
  const ScalarField u = torsion_ball(FracParams::make(2, 0.5));
  const Point x = make_point({0.3, -0.2});
  for (auto _ : state) benchmark::DoNotOptimize(frlap_value(u, x, {}));
}
BENCHMARK(BM_FrLapTorsion)->Unit(benchmark::kMicrosecond);

static void BM_EllipseDistance(benchmark::State& state) {
  const ImplicitDomain e = ellipsoid(2, 0.1);
  const Point x = make_point({0.9, 0.4});
  for (auto _ : state) benchmark::DoNotOptimize(boundary_distance(e, x));
}
BENCHMARK(BM_EllipseDistance);

static void BM_CriticalLambdaBump(benchmark::State& state) {
  const ImplicitDomain d = bump_domain(1e-4, 2.0);
  const Point e1 = make_point({1.0, 0.0});
  for (auto _ : state) benchmark::DoNotOptimize(critical_lambda(d, e1).lambda);
}
BENCHMARK(BM_CriticalLambdaBump)->Unit(benchmark::kMillisecond);

static void BM_SlabGrid(benchmark::State& state) {
  const ImplicitDomain d = bump_domain(1e-4, 2.0);
  const CriticalPlaneResult r = critical_lambda(d, make_point({1.0, 0.0}));
  for (auto _ : state) {
    benchmark::DoNotOptimize(slab_measure(d, r, 0.2, state.range(0), 0, MeasureMethod::kGrid).value);
  }
}
BENCHMARK(BM_SlabGrid)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

static void BM_SeminormRatio(benchmark::State& state) {
  const FracParams p = FracParams::make(2, 0.5);
  SeminormOptions o;
  o.grid = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(ellipsoid_seminorm_ratio(p, 0.01, o).value);
}
BENCHMARK(BM_SeminormRatio)->Arg(112)->Arg(224)->Arg(448)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
