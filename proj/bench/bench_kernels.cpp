// Serial reference path vs OpenMP path for each data-parallel kernel.
// Argument 0 is serial, 1 is parallel.

#include <benchmark/benchmark.h>

#include "hypsweep/coned_surface.hpp"
#include "hypsweep/fixtures.hpp"
#include "hypsweep/flip_graph.hpp"
#include "hypsweep/isoperimetric.hpp"

using namespace hypsweep;

namespace {

Exec exec_of(const benchmark::State& st) { return st.range(0) ? Exec::parallel : Exec::serial; }

void BM_FlipBall(benchmark::State& st) {
  const auto t = tri::standard_genus_g(2);
  tri::SearchOptions opt;
  opt.exec = exec_of(st);
  for (auto _ : st) benchmark::DoNotOptimize(tri::flip_ball(t, 3, opt));
}
BENCHMARK(BM_FlipBall)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_FlipFamily(benchmark::State& st) {
  const auto s = fixtures::octagon_genus2().realize();
  for (auto _ : st) benchmark::DoNotOptimize(surf::flip_family(s, {1}, 4000, exec_of(st)));
}
BENCHMARK(BM_FlipFamily)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_PlaneScan(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(iso::plane_family_scan({2.0}, 400, exec_of(st)));
}
BENCHMARK(BM_PlaneScan)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_CapScan(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(iso::sphere_cap_family_scan({1.0}, 24, exec_of(st)));
}
BENCHMARK(BM_CapScan)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
