// Serial reference vs OpenMP kernels. Arg 0 = serial, 1 = parallel.
#include <benchmark/benchmark.h>

#include <random>

#include "homodyne/gkp_sim.hpp"
#include "homodyne/witness.hpp"

using namespace homodyne;

namespace {

Exec mode(const benchmark::State& st) { return st.range(0) ? Exec::Parallel : Exec::Serial; }

void BM_WitnessScan(benchmark::State& st) {
  WitnessGrid g = default_witness_grid();
  for (auto _ : st) benchmark::DoNotOptimize(scan_witness(g, mode(st)));
  st.SetItemsProcessed(st.iterations() * 2 * g.deltas.size() * g.ss.size() * g.gammas.size());
}

void BM_BlockChannelBuild(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(displacement_channel(0.04, 30, mode(st)));
}

void BM_BlockChannelApply(benchmark::State& st) {
  auto ch = displacement_channel(0.04, 30);
  std::mt19937_64 rng(1);
  CMat rho = random_density_matrix(31, 20, rng);
  for (auto _ : st) benchmark::DoNotOptimize(ch.apply(rho, mode(st)));
}

void BM_KrausBuild(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(displacement_channel_kraus(0.04, 30, {}, mode(st)));
}

void BM_KrausApply(benchmark::State& st) {
  auto ch = displacement_channel_kraus(0.04, 30);
  std::mt19937_64 rng(2);
  CMat rho = random_density_matrix(31, 20, rng);
  for (auto _ : st) benchmark::DoNotOptimize(ch.apply(rho, mode(st)));
}

}  // namespace

BENCHMARK(BM_WitnessScan)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BlockChannelBuild)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BlockChannelApply)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_KrausBuild)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_KrausApply)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
