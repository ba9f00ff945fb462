#include <benchmark/benchmark.h>

#include "lipfree/constructions.hpp"
#include "lipfree/norm.hpp"

using namespace lipfree;

namespace {

// Fat Cantor witness molecule at stage k, in both arithmetic modes.
struct Stage {
  explicit Stage(int k) : w(svc_witness(k)), fmu(to_floating(w.mu, to_floating(w.domain))) {}
  WitnessInstance<Rational> w;
  Molecule<double> fmu;
};

void BM_FlowExact(benchmark::State& state) {
  Stage s(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(norm_flow(s.w.mu).value);
  state.counters["points"] = static_cast<double>(s.w.domain->size());
}

void BM_FlowFloat(benchmark::State& state) {
  Stage s(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(norm_flow(s.fmu).value);
}

void BM_DualLpExact(benchmark::State& state) {
  Stage s(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(norm_dual_lp(s.w.mu).value);
}

void BM_DualLpFloat(benchmark::State& state) {
  Stage s(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(norm_dual_lp(s.fmu).value);
}

void BM_LineExact(benchmark::State& state) {
  Stage s(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(norm_line(s.w.mu).value);
}

}  // namespace

BENCHMARK(BM_FlowExact)->DenseRange(2, 6, 2);
BENCHMARK(BM_FlowFloat)->DenseRange(2, 8, 2);
BENCHMARK(BM_DualLpExact)->DenseRange(2, 6, 2);
BENCHMARK(BM_DualLpFloat)->DenseRange(2, 8, 2);
BENCHMARK(BM_LineExact)->DenseRange(2, 10, 2);
