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


#include <gtest/gtest.h>

#include <random>

#include "covergen/kernels.hpp"
#include "fixtures.hpp"

namespace covergen {
namespace {

TEST(Kernels, CoveredUnionParallelMatchesSerial) {
  std::mt19937_64 rng(3);
  const CAInstance instance = CAInstance::uniform(3, 12, 3);
  const InteractionSpace space(instance);
  for (int size : {0, 1, 7, 300}) {
    std::vector<TestConfig> suite;
    for (int i = 0; i < size; ++i) {
      suite.push_back(fixtures::random_test(rng, instance));
    }
    EXPECT_EQ(kernels::covered_union(space, suite),
              kernels::covered_union_serial(space, suite));
  }
}

TEST(Kernels, BestTestParallelMatchesSerial) {
  std::mt19937_64 rng(4);
  for (const CAInstance& instance :
       {CAInstance::uniform(2, 5, 2), CAInstance::uniform(2, 9, 3),
        CAInstance::uniform(3, 14, 2)}) {
    const InteractionSpace space(instance);
    for (int trial = 0; trial < 3; ++trial) {
      const auto duals = fixtures::random_duals(rng, space.size());
      const auto serial = kernels::best_test_serial(space, duals);
      const auto parallel = kernels::best_test(space, duals);
      EXPECT_TRUE(serial.found);
      EXPECT_EQ(parallel.found, serial.found);
      EXPECT_EQ(parallel.rank, serial.rank);
      EXPECT_DOUBLE_EQ(parallel.value, serial.value);
      EXPECT_EQ(parallel.evaluated, serial.evaluated);
    }
  }
}

TEST(Kernels, BestTestTiesGoToLowestRank) {
  const InteractionSpace space(CAInstance::uniform(2, 4, 2));
  const std::vector<double> flat(space.size(), 0.5);
  EXPECT_EQ(kernels::best_test(space, flat).rank, 0u);
  EXPECT_EQ(kernels::best_test_serial(space, flat).rank, 0u);
}

TEST(Kernels, BestTestSkipsForbidden) {
  CAInstance instance = CAInstance::uniform(2, 3, 2);
  instance.forbidden = {{{0, 0}}};
  const InteractionSpace space(instance);
  const std::vector<double> zero(space.size(), 0.0);
  const auto best = kernels::best_test_serial(space, zero);
  ASSERT_TRUE(best.found);
  EXPECT_EQ(space.test_at(best.rank).assignment[0], 1);
  EXPECT_EQ(best.evaluated, 4u);
}

TEST(Kernels, ReducedCostsParallelMatchesSerial) {
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<int> row(0, 199);
  std::vector<std::size_t> starts{0};
  std::vector<int> rows;
  std::vector<double> costs;
  for (int j = 0; j < 10000; ++j) {
    for (int e = 0; e < 5; ++e) rows.push_back(row(rng));
    starts.push_back(rows.size());
    costs.push_back(1.0);
  }
  const auto duals = fixtures::random_duals(rng, 200);
  std::vector<double> serial(costs.size()), parallel(costs.size());
  const kernels::SparseColumns columns{starts, rows};
  kernels::reduced_costs_serial(columns, costs, duals, serial);
  kernels::reduced_costs(columns, costs, duals, parallel);
  EXPECT_EQ(serial, parallel);
  double expected = 1.0;
  for (std::size_t e = starts[0]; e < starts[1]; ++e) expected -= duals[rows[e]];
  EXPECT_DOUBLE_EQ(serial[0], expected);
}

}  // namespace
}  // namespace covergen
