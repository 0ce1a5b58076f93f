// Copyright 2026 The detqkd Authors
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

#include <benchmark/benchmark.h>

#include "detqkd/adversary.hpp"
#include "detqkd/protocol.hpp"
#include "detqkd/schemes.hpp"

using namespace detqkd;

static void BM_EigenDecompose(benchmark::State& state) {
  const auto [p, m] = bit_mixtures(k_scheme(2.0));
  const HermitianMatrix4 h = p.matrix() - m.matrix();
  for (auto _ : state) benchmark::DoNotOptimize(eigen_decompose(h));
}
BENCHMARK(BM_EigenDecompose);

static void BM_MeasurementErrorRate(benchmark::State& state) {
  const Scheme s = state.range(0) == 0 ? k_scheme(1.0) : three_one_scheme();
  RandomStream rng(1);
  std::array<double, 16> params;
  for (auto& x : params) x = rng.uniform();
  const auto m = MeasurementBasis::from_columns("bench", unitary_from_parameters(params));
  for (auto _ : state) benchmark::DoNotOptimize(measurement_error_rate(s, m));
}
BENCHMARK(BM_MeasurementErrorRate)->Arg(0)->Arg(1);

static void BM_QkdSession(benchmark::State& state) {
  const Scheme s = k_scheme(1.0);
  RandomStream rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(run_qkd_session(s, 1000, 100, {}, rng));
}
BENCHMARK(BM_QkdSession)->Unit(benchmark::kMicrosecond);

static void BM_OptimizeStrategy(benchmark::State& state) {
  const Scheme s = k_scheme(1.0);
  RandomStream rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(optimize_strategy(s, {.restarts = 4, .threads = 1}, rng));
}
BENCHMARK(BM_OptimizeStrategy)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
