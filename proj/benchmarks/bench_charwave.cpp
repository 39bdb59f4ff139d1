#include <benchmark/benchmark.h>

#include <numbers>

#include "charwave/cauchy.hpp"
#include "charwave/estimates.hpp"
#include "charwave/nullcone.hpp"
#include "charwave/nullplane.hpp"
#include "charwave/operators.hpp"
#include "charwave/random_data.hpp"

using namespace charwave;

namespace {

GridSpec plane(std::size_t n) {
  PlaneGridParams gp;
  gp.N_z = gp.N_x = gp.N_y = n;
  return make_nullplane_grid(gp);
}

GridSpec cone(std::size_t n) {
  ConeGridParams gp;
  gp.N_r = n;
  gp.N_s = gp.N_phi = 3 * n / 4;
  return make_nullcone_grid(gp);
}

void BM_DerivPeriodic(benchmark::State& st) {
  const std::size_t n = static_cast<std::size_t>(st.range(0));
  const int p = static_cast<int>(st.range(1));
  const GridSpec g = plane(n);
  const FieldSlice f = random_plane_data(g, 1).R_on_u0;
  for (auto _ : st) benchmark::DoNotOptimize(deriv(f, 1, p));
  st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(f.size()));
}
BENCHMARK(BM_DerivPeriodic)->Args({32, 2})->Args({32, 4})->Args({64, 2})->Args({64, 4});

void BM_MarchOde(benchmark::State& st) {
  const GridSpec g = cone(static_cast<std::size_t>(st.range(0)));
  const FieldSlice f = random_cone_data(g, 1).R_on_u0;
  const std::vector<double> b(g.axes[1].points() * g.axes[2].points(), 1.0);
  for (auto _ : st) benchmark::DoNotOptimize(march_ode(f, b, 0, 2, 1));
  st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(f.size()));
}
BENCHMARK(BM_MarchOde)->Arg(32)->Arg(64);

void BM_PlaneEvolve(benchmark::State& st) {
  const PlaneCharData d = random_plane_data(plane(static_cast<std::size_t>(st.range(0))), 1);
  for (auto _ : st) benchmark::DoNotOptimize(plane_evolve(d));
}
BENCHMARK(BM_PlaneEvolve)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_ConeEvolve(benchmark::State& st) {
  const ConeCharData d = random_cone_data(cone(static_cast<std::size_t>(st.range(0))), 1);
  for (auto _ : st) benchmark::DoNotOptimize(cone_evolve(d));
}
BENCHMARK(BM_ConeEvolve)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_ConeDerivativeEvolve(benchmark::State& st) {
  const ConeDerivData d = ConeDerivData::from(random_cone_data(cone(static_cast<std::size_t>(st.range(0))), 1));
  for (auto _ : st) benchmark::DoNotOptimize(cone_derivative_evolve(d));
}
BENCHMARK(BM_ConeDerivativeEvolve)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_CauchyEvolve(benchmark::State& st) {
  CauchyGridParams k;
  const std::size_t n = static_cast<std::size_t>(st.range(0));
  k.cells = {n, n, n};
  const CauchyState s = random_cauchy_state(make_cauchy_grid(k), 1);
  for (auto _ : st) benchmark::DoNotOptimize(cauchy_evolve(s));
}
BENCHMARK(BM_CauchyEvolve)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_AssembleReport(benchmark::State& st) {
  const EvolutionRecord rec = cone_evolve(random_cone_data(cone(32), 1));
  for (auto _ : st) benchmark::DoNotOptimize(assemble_report(rec, Problem::nullcone));
}
BENCHMARK(BM_AssembleReport);

}  // namespace

BENCHMARK_MAIN();
