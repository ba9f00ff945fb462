#include <benchmark/benchmark.h>

#include "lipfree/constructions.hpp"
#include "lipfree/operators.hpp"

using namespace lipfree;

namespace {

void BM_KernelBasisXSquared(benchmark::State& state) {
  auto w = xsquared_grid(state.range(0));
  auto op = linearize(w.map);
  for (auto _ : state) benchmark::DoNotOptimize(kernel_basis(op).rank);
}

void BM_KernelBasisSvc(benchmark::State& state) {
  auto w = svc_witness(static_cast<int>(state.range(0)));
  auto op = linearize(w.map);
  for (auto _ : state) benchmark::DoNotOptimize(kernel_basis(op).rank);
}

void BM_BilipXSquared(benchmark::State& state) {
  auto w = xsquared_grid(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(bilip_constants(w.map).a);
}

}  // namespace

BENCHMARK(BM_KernelBasisXSquared)->RangeMultiplier(10)->Range(10, 1000);
BENCHMARK(BM_KernelBasisSvc)->DenseRange(2, 8, 2);
BENCHMARK(BM_BilipXSquared)->RangeMultiplier(10)->Range(10, 1000);
