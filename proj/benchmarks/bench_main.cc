#include <benchmark/benchmark.h>

#include "twoscvrp/instance.h"
#include "twoscvrp/model_build.h"
#include "twoscvrp/mps.h"
#include "twoscvrp/solver.h"
#include "twoscvrp/verify.h"

using namespace twoscvrp;

namespace {

Instance Tiny(uint64_t seed) {
  GenSpec g;
  g.boxes = 4;
  g.pallets = 3;
  g.trucks = 2;
  g.destinations = 3;
  g.volume = {1, 6};
  g.pallet_capacity = {5, 12};
  g.truck_capacity = {10, 30};
  g.pallet_cost = {1, 9};
  g.truck_cost = {2, 12};
  g.travel_cost = {1, 9};
  g.seed = seed;
  return Generate(g);
}

void BM_BuildFullReal(benchmark::State& state) {
  const Instance in = BuiltinRealInstance();
  for (auto _ : state) benchmark::DoNotOptimize(BuildFull(in));
}
BENCHMARK(BM_BuildFullReal)->Unit(benchmark::kMillisecond);

void BM_ExportMpsReal(benchmark::State& state) {
  const ModelIR m = BuildFull(BuiltinRealInstance()).model;
  for (auto _ : state) benchmark::DoNotOptimize(ExportMps(m));
}
BENCHMARK(BM_ExportMpsReal)->Unit(benchmark::kMillisecond);

void BM_ParseMpsReal(benchmark::State& state) {
  const std::string text = ExportMps(BuildFull(BuiltinRealInstance()).model);
  for (auto _ : state) benchmark::DoNotOptimize(ParseMps(text));
  state.SetBytesProcessed(state.iterations() * static_cast<int64_t>(text.size()));
}
BENCHMARK(BM_ParseMpsReal)->Unit(benchmark::kMillisecond);

void BM_LpRelaxPreset(benchmark::State& state) {
  GenSpec spec = *PresetSpec(state.range(0) ? "ins-5" : "ins-1");
  spec.seed = 1;
  const ModelIR m = BuildBase1D(Generate(spec)).model;
  for (auto _ : state) benchmark::DoNotOptimize(LpRelax(m));
}
BENCHMARK(BM_LpRelaxPreset)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_LpRelaxRealFull(benchmark::State& state) {
  const ModelIR m = BuildFull(BuiltinRealInstance()).model;
  for (auto _ : state) benchmark::DoNotOptimize(LpRelax(m));
}
BENCHMARK(BM_LpRelaxRealFull)->Unit(benchmark::kMillisecond);

void BM_BnbTiny(benchmark::State& state) {
  const ModelIR m = BuildBase1D(Tiny(static_cast<uint64_t>(state.range(0)))).model;
  for (auto _ : state) benchmark::DoNotOptimize(SolveBnb(m));
}
BENCHMARK(BM_BnbTiny)->DenseRange(1, 4)->Unit(benchmark::kMillisecond);

void BM_OracleTiny(benchmark::State& state) {
  const Instance in = Tiny(static_cast<uint64_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(OracleSolve1D(in));
}
BENCHMARK(BM_OracleTiny)->DenseRange(1, 4)->Unit(benchmark::kMillisecond);

void BM_HeldKarp(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  TravelMatrix t;
  t.destinations.push_back("D0");
  for (int d = 1; d <= n; ++d) t.destinations.push_back("D" + std::to_string(d));
  t.cost.assign(n + 1, std::vector<int64_t>(n + 1, 0));
  for (int a = 0; a <= n; ++a)
    for (int b = 0; b <= n; ++b)
      if (a != b) t.cost[a][b] = 1 + (a * 7 + b * 13) % 17;
  std::vector<int> all;
  for (int d = 1; d <= n; ++d) all.push_back(d);
  for (auto _ : state) benchmark::DoNotOptimize(OracleRoute(all, t));
}
BENCHMARK(BM_HeldKarp)->DenseRange(4, 10, 2);

void BM_VerifyWithMutations(benchmark::State& state) {
  uint64_t seed = 1;
  while (!OracleSolve1D(Tiny(seed)).feasible) ++seed;
  const Instance in = Tiny(seed);
  const Solution s = OracleSolve1D(in).solution;
  for (auto _ : state) {
    for (const auto& m : MutateSuite(in, s, 1)) benchmark::DoNotOptimize(Verify(in, m.solution));
  }
}
BENCHMARK(BM_VerifyWithMutations);

}  // namespace
BENCHMARK_MAIN();
