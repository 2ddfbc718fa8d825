// Serial reference vs OpenMP kernels.
#include <benchmark/benchmark.h>

#include "wpt/design_sweep.hpp"
#include "wpt/em_model.hpp"
#include "wpt/kernels.hpp"
#include "wpt/protocol_sim.hpp"

using namespace wpt;

namespace {

std::pair<std::vector<kernels::Filament>, std::vector<kernels::Filament>> coil_pair(int pieces) {
  const auto spec = prototype_sheet();
  const auto a = coil_filaments(spec.coil, {0, 0, 0});
  const auto b = coil_filaments(spec.coil, {12, 7, 5});
  return {kernels::subdivide(a, pieces), kernels::subdivide(b, pieces)};
}

void BM_NeumannSerial(benchmark::State& st) {
  const auto [a, b] = coil_pair(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(kernels::neumann_sum_serial(a, b));
  st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(a.size() * b.size()));
}

void BM_NeumannParallel(benchmark::State& st) {
  const auto [a, b] = coil_pair(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(kernels::neumann_sum_parallel(a, b));
  st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(a.size() * b.size()));
}

SimContext sheet_context() {
  const auto spec = prototype_sheet();
  std::set<CoilIndex> all;
  for (int r = 0; r < spec.grid_size(); ++r)
    for (int c = 0; c < spec.grid_size(); ++c) all.insert({r, c});
  return make_context(spec, all, default_calibration());
}

void BM_CoverageSerial(benchmark::State& st) {
  const auto ctx = sheet_context();
  RxDevice rx;
  rx.coil = ctx.spec.coil;
  for (auto _ : st) benchmark::DoNotOptimize(coverage_map_serial(ctx, rx, {}, 10.0));
}

void BM_CoverageParallel(benchmark::State& st) {
  const auto ctx = sheet_context();
  RxDevice rx;
  rx.coil = ctx.spec.coil;
  for (auto _ : st) benchmark::DoNotOptimize(coverage_map(ctx, rx, {}, 10.0));
}

void BM_SweepSerial(benchmark::State& st) {
  const auto spec = prototype_sheet();
  std::vector<Length> grid;
  for (std::int64_t um = 240; um <= 4800; um += 40) grid.push_back(Length::from_um(um));
  for (auto _ : st) benchmark::DoNotOptimize(sweep_thickness_serial(spec, grid, default_calibration()));
}

void BM_SweepParallel(benchmark::State& st) {
  const auto spec = prototype_sheet();
  std::vector<Length> grid;
  for (std::int64_t um = 240; um <= 4800; um += 40) grid.push_back(Length::from_um(um));
  for (auto _ : st) benchmark::DoNotOptimize(sweep_thickness(spec, grid, default_calibration()));
}

}  // namespace

BENCHMARK(BM_NeumannSerial)->Arg(8)->Arg(32);
BENCHMARK(BM_NeumannParallel)->Arg(8)->Arg(32);
BENCHMARK(BM_CoverageSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CoverageParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SweepSerial);
BENCHMARK(BM_SweepParallel);

BENCHMARK_MAIN();
