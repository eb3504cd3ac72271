// bench/bench_kernels.cc

// Copyright 2026 The narb Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

// Serial reference kernels against their OpenMP versions.

#include <benchmark/benchmark.h>

#include <cstddef>
#include <vector>

#include "narb/kernels.h"
#include "narb/random.h"

namespace {

std::vector<double> Random(std::size_t n, std::uint64_t seed) {
  narb::Rng rng(seed);
  std::vector<double> v(n);
  for (double &x : v) x = rng.Normal();
  return v;
}

template <auto Kernel>
void BM_Gemv(benchmark::State &state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = Random(n * n, 1), x = Random(n, 2);
  std::vector<double> y(n);
  for (auto _ : state) {
    Kernel(a, n, n, x, y);
    benchmark::DoNotOptimize(y.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(n * n));
}

template <auto Kernel>
void BM_GemvTransAcc(benchmark::State &state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = Random(n * n, 1), y = Random(n, 2);
  std::vector<double> x(n);
  for (auto _ : state) {
    Kernel(a, n, n, y, x);
    benchmark::DoNotOptimize(x.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(n * n));
}

template <auto Kernel>
void BM_Ger(benchmark::State &state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto y = Random(n, 1), x = Random(n, 2);
  std::vector<double> a(n * n);
  for (auto _ : state) {
    Kernel(y, x, n, n, a);
    benchmark::DoNotOptimize(a.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(n * n));
}

template <auto Kernel>
void BM_Gemm(benchmark::State &state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = Random(n * n, 1), b = Random(n * n, 2);
  std::vector<double> c(n * n);
  for (auto _ : state) {
    Kernel(a, b, n, n, n, c);
    benchmark::DoNotOptimize(c.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(n * n * n));
}

// Retrieval-shaped scan: many rows, a few hundred terms.
template <auto Kernel>
void BM_CosineRows(benchmark::State &state) {
  const auto rows = static_cast<std::size_t>(state.range(0));
  const std::size_t cols = 512;
  const auto m = Random(rows * cols, 1), q = Random(cols, 2);
  std::vector<double> out(rows);
  for (auto _ : state) {
    Kernel(m, rows, cols, q, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(rows * cols));
}

using namespace narb::kernels;

BENCHMARK(BM_Gemv<GemvSerial>)->RangeMultiplier(4)->Range(64, 2048);
BENCHMARK(BM_Gemv<GemvParallel>)->RangeMultiplier(4)->Range(64, 2048)->UseRealTime();
BENCHMARK(BM_GemvTransAcc<GemvTransAccSerial>)->RangeMultiplier(4)->Range(64, 2048);
BENCHMARK(BM_GemvTransAcc<GemvTransAccParallel>)->RangeMultiplier(4)->Range(64, 2048)->UseRealTime();
BENCHMARK(BM_Ger<GerSerial>)->RangeMultiplier(4)->Range(64, 2048);
BENCHMARK(BM_Ger<GerParallel>)->RangeMultiplier(4)->Range(64, 2048)->UseRealTime();
BENCHMARK(BM_Gemm<GemmSerial>)->RangeMultiplier(2)->Range(32, 256);
BENCHMARK(BM_Gemm<GemmParallel>)->RangeMultiplier(2)->Range(32, 256)->UseRealTime();
BENCHMARK(BM_CosineRows<CosineRowsSerial>)->RangeMultiplier(4)->Range(256, 16384);
BENCHMARK(BM_CosineRows<CosineRowsParallel>)->RangeMultiplier(4)->Range(256, 16384)->UseRealTime();

}  // namespace

BENCHMARK_MAIN();
