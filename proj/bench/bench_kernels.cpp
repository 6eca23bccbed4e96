// Copyright 2026 The lprlab Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Serial reference against OpenMP variants of the data-parallel kernels.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "lprlab/lp/kernels.hpp"
#include "lprlab/querygen.hpp"

namespace {

using lprlab::KernelMode;

void pivot(benchmark::State& state, bool parallel) {
  const auto rows = static_cast<std::size_t>(state.range(0));
  const std::size_t cols = 26 * rows;  // a compact dual of n rows, 2550 queries
  std::mt19937_64 g(1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> tab(rows * cols), cost(cols);
  for (double& v : tab) v = u(g);
  for (double& v : cost) v = u(g);
  std::size_t k = 0;
  for (auto _ : state) {
    const std::size_t r = k % rows, q = (k * 7919) % cols;
    if (parallel) {
      lprlab::lp::kernels::pivot_parallel(tab, rows, cols, cost, r, q);
    } else {
      lprlab::lp::kernels::pivot_serial(tab, rows, cols, cost, r, q);
    }
    ++k;
    benchmark::DoNotOptimize(tab.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(rows * cols));
}

void BM_PivotSerial(benchmark::State& s) { pivot(s, false); }
void BM_PivotParallel(benchmark::State& s) { pivot(s, true); }
BENCHMARK(BM_PivotSerial)->Arg(100)->Arg(400);
BENCHMARK(BM_PivotParallel)->Arg(100)->Arg(400);

void materialize(benchmark::State& state, KernelMode mode) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const lprlab::QueryFamily family = lprlab::truncate(lprlab::standard_family(), 500);
  std::vector<lprlab::Identifier> ids(n);
  for (std::size_t i = 0; i < n; ++i) ids[i] = 2000 + 3 * i;
  for (auto _ : state) {
    auto m = lprlab::materialize_all(family, ids, mode);
    benchmark::DoNotOptimize(m.coef.data());
  }
}

void BM_MaterializeSerial(benchmark::State& s) { materialize(s, KernelMode::Serial); }
void BM_MaterializeParallel(benchmark::State& s) { materialize(s, KernelMode::Parallel); }
BENCHMARK(BM_MaterializeSerial)->Arg(100)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MaterializeParallel)->Arg(100)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
