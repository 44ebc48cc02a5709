// Copyright 2026 The covergen Authors
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


// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include <random>

#include "covergen/kernels.hpp"

namespace covergen {
namespace {

std::vector<TestConfig> random_suite(const CAInstance& instance, int size) {
  std::mt19937_64 rng(1);
  std::vector<TestConfig> suite(static_cast<std::size_t>(size));
  for (TestConfig& test : suite) {
    for (int v : instance.domains) {
      test.assignment.push_back(std::uniform_int_distribution<int>(0, v - 1)(rng));
    }
  }
  return suite;
}

std::vector<double> random_weights(std::size_t n) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> w(n);
  for (double& x : w) x = unit(rng);
  return w;
}

template <bool kParallel>
void BM_CoveredUnion(benchmark::State& state) {
  const CAInstance instance = CAInstance::uniform(3, 20, 3);
  const InteractionSpace space(instance);
  const auto suite = random_suite(instance, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    auto pattern = kParallel ? kernels::covered_union(space, suite)
                             : kernels::covered_union_serial(space, suite);
    benchmark::DoNotOptimize(pattern);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_CoveredUnion<false>)->Arg(64)->Arg(1024)->Arg(8192);
BENCHMARK(BM_CoveredUnion<true>)->Arg(64)->Arg(1024)->Arg(8192);

template <bool kParallel>
void BM_BestTest(benchmark::State& state) {
  const InteractionSpace space(
      CAInstance::uniform(2, static_cast<int>(state.range(0)), 2));
  const auto weights = random_weights(space.size());
  for (auto _ : state) {
    auto best = kParallel ? kernels::best_test(space, weights)
                          : kernels::best_test_serial(space, weights);
    benchmark::DoNotOptimize(best);
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<std::int64_t>(space.num_tests()));
}
BENCHMARK(BM_BestTest<false>)->Arg(10)->Arg(14)->Arg(16);
BENCHMARK(BM_BestTest<true>)->Arg(10)->Arg(14)->Arg(16);

template <bool kParallel>
void BM_ReducedCosts(benchmark::State& state) {
  const auto columns = static_cast<std::size_t>(state.range(0));
  const std::size_t rows = 4096;
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> row(0, static_cast<int>(rows) - 1);
  std::vector<std::size_t> starts{0};
  std::vector<int> entries;
  for (std::size_t j = 0; j < columns; ++j) {
    for (int e = 0; e < 120; ++e) entries.push_back(row(rng));
    starts.push_back(entries.size());
  }
  const std::vector<double> costs(columns, 1.0);
  const auto duals = random_weights(rows);
  std::vector<double> out(columns);
  const kernels::SparseColumns sparse{starts, entries};
  for (auto _ : state) {
    if (kParallel) {
      kernels::reduced_costs(sparse, costs, duals, out);
    } else {
      kernels::reduced_costs_serial(sparse, costs, duals, out);
    }
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ReducedCosts<false>)->Arg(1024)->Arg(16384);
BENCHMARK(BM_ReducedCosts<true>)->Arg(1024)->Arg(16384);

}  // namespace
}  // namespace covergen

BENCHMARK_MAIN();
