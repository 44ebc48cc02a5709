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

#include <cmath>
#include <random>

#include "covergen/baselines.hpp"
#include "covergen/colgen.hpp"
#include "covergen/errors.hpp"
#include "covergen/pricing.hpp"
#include "fixtures.hpp"
#include "oracles/oracles.hpp"

namespace covergen {
namespace {

CGConfig quick_config() {
  CGConfig config;
  config.time_limit_seconds = 20.0;
  return config;
}

void expect_result_invariants(const CAInstance& instance,
                              const CGResult& result) {
  const InteractionSpace space(instance);
  EXPECT_TRUE(verify_covering_array(space, result.tests).covers);
  EXPECT_EQ(result.ip_objective, result.tests.size());
  const double tol = 1e-6;
  const auto ceil_lp = static_cast<std::size_t>(
      std::max(0.0, std::ceil(result.lp_bound - tol)));
  EXPECT_LE(ceil_lp, result.ip_objective);
  EXPECT_LE(result.lower_bound, result.ip_objective);
  EXPECT_EQ(result.optimal,
            result.lp_optimal && result.ip_objective == ceil_lp);
}

TEST(Artificial, OnePerRequiredRow) {
  const InteractionSpace space(fixtures::web_app());
  const auto columns = init_artificial_columns(space);
  ASSERT_EQ(columns.size(), 40u);
  for (std::size_t p = 0; p < columns.size(); ++p) {
    EXPECT_EQ(columns[p].pattern.count(), 1u);
    EXPECT_TRUE(columns[p].pattern.test(p));
    EXPECT_EQ(columns[p].cost, 41.0);
    EXPECT_EQ(columns[p].origin, ColumnOrigin::kArtificial);
    EXPECT_FALSE(columns[p].test);
  }
}

TEST(Artificial, FullyExemptInstanceHasNone) {
  CAInstance instance;
  instance.strength = 1;
  instance.domains = {2};
  instance.forbidden = {{{0, 0}}, {{0, 1}}};
  EXPECT_TRUE(init_artificial_columns(InteractionSpace(instance)).empty());
}

TEST(Artificial, FourWayTenBinaryCount) {
  EXPECT_EQ(init_artificial_columns(
                InteractionSpace(CAInstance::uniform(4, 10, 2)))
                .size(),
            3360u);
}

TEST(ColumnGeneration, WebAppBothWarmStarts) {
  for (WarmStart warm : {WarmStart::kGreedy, WarmStart::kNone}) {
    CGConfig config = quick_config();
    config.warm_start = warm;
    const CGResult result = run_column_generation(fixtures::web_app(), config);
    EXPECT_EQ(result.ip_objective, 6u);
    EXPECT_TRUE(result.lp_optimal);
    expect_result_invariants(fixtures::web_app(), result);
  }
}

TEST(ColumnGeneration, FullStrengthTwoByTwo) {
  const CAInstance instance = CAInstance::uniform(2, 2, 2);
  const CGResult result = run_column_generation(instance, quick_config());
  EXPECT_EQ(result.ip_objective, 4u);
  EXPECT_TRUE(result.optimal);
  expect_result_invariants(instance, result);
}

TEST(ColumnGeneration, PairwiseThreeBinary) {
  const CAInstance instance = CAInstance::uniform(2, 3, 2);
  const CGResult result = run_column_generation(instance, quick_config());
  EXPECT_EQ(result.ip_objective, 4u);
  expect_result_invariants(instance, result);
}

TEST(ColumnGeneration, UniformLpBoundIsAlphabetPower) {
  // Uniform duals 1/C(k,t) and uniform x certify LP = g^t.
  const CAInstance instance = CAInstance::uniform(3, 5, 2);
  const CGResult result = run_column_generation(instance, quick_config());
  ASSERT_TRUE(result.lp_optimal);
  EXPECT_NEAR(result.lp_bound, 8.0, 1e-6);
  EXPECT_EQ(lower_bound(InteractionSpace(instance), result.lp_bound), 8u);
  EXPECT_EQ(result.ip_objective, 10u);
  expect_result_invariants(instance, result);
}

TEST(ColumnGeneration, LpOptimalMeansNoImprovingTest) {
  for (const CAInstance& instance :
       {CAInstance::uniform(2, 5, 2), CAInstance::uniform(2, 4, 3),
        CAInstance::uniform(3, 5, 2)}) {
    const InteractionSpace space(instance);
    // Re-run the loop by hand to capture the final duals.
    MasterSolver master(space.size(), space.exempt());
    for (Column& c : init_artificial_columns(space)) master.add_column(std::move(c));
    for (TestConfig& t : greedy_construct(space, 0).tests) {
      master.add_column(Column::from_test(space, t, ColumnOrigin::kWarmStart));
    }
    MasterSolution solution;
    for (int guard = 0; guard < 1000; ++guard) {
      solution = master.solve();
      const PricingResult priced = price(space, solution.duals);
      if (!priced.improving) break;
      master.add_column(
          Column::from_test(space, priced.test, ColumnOrigin::kGenerated));
    }
    const PricingResult check = price_exhaustive(space, solution.duals);
    EXPECT_LE(check.objective, 1.0 + 1e-6);
    const CGResult result = run_column_generation(instance, quick_config());
    EXPECT_NEAR(result.lp_bound, solution.objective, 1e-6);
  }
}

TEST(ColumnGeneration, ForbiddenPairNeverEmitted) {
  CAInstance instance = fixtures::web_app();
  instance.forbidden = {{{0, 1}, {1, 0}}};
  const CGResult result = run_column_generation(instance, quick_config());
  for (const TestConfig& test : result.tests) {
    EXPECT_FALSE(test.assignment[0] == 1 && test.assignment[1] == 0);
  }
  expect_result_invariants(instance, result);
}

TEST(ColumnGeneration, ColumnsPerIterationExtension) {
  CGConfig config = quick_config();
  config.columns_per_iteration = 4;
  const CAInstance instance = CAInstance::uniform(3, 6, 2);
  const CGResult result = run_column_generation(instance, config);
  expect_result_invariants(instance, result);
  EXPECT_EQ(result.ip_objective, 12u);
}

TEST(ColumnGeneration, DeterministicGivenConfig) {
  const CAInstance instance = CAInstance::uniform(2, 6, 3);
  const CGResult a = run_column_generation(instance, quick_config());
  const CGResult b = run_column_generation(instance, quick_config());
  EXPECT_EQ(a.tests, b.tests);
  EXPECT_EQ(a.iterations, b.iterations);
}

TEST(ColumnGeneration, NeverWorseThanGreedy) {
  for (const CAInstance& instance :
       {CAInstance::uniform(2, 6, 3), CAInstance::uniform(3, 6, 2),
        CAInstance::uniform(2, 3, 5)}) {
    const CGResult result = run_column_generation(instance, quick_config());
    EXPECT_LE(result.ip_objective,
              greedy_construct(InteractionSpace(instance), 0).tests.size());
  }
}

TEST(ColumnGeneration, ProgressEventsArrive) {
  std::vector<ProgressEvent> events;
  run_column_generation(CAInstance::uniform(2, 4, 3), quick_config(),
                        [&](const ProgressEvent& e) { events.push_back(e); });
  ASSERT_FALSE(events.empty());
  for (std::size_t i = 1; i < events.size(); ++i) {
    EXPECT_EQ(events[i].iteration, events[i - 1].iteration + 1);
    EXPECT_LE(events[i].lp_objective, events[i - 1].lp_objective + 1e-9);
  }
}

TEST(ColumnGeneration, TimeLimitIsRespected) {
  CGConfig config;
  config.time_limit_seconds = 2.0;
  const auto start = std::chrono::steady_clock::now();
  const CAInstance instance = CAInstance::uniform(4, 10, 2);
  const CGResult result = run_column_generation(instance, config);
  const double seconds = std::chrono::duration<double>(
                             std::chrono::steady_clock::now() - start)
                             .count();
  EXPECT_LT(seconds, 3.0);
  expect_result_invariants(instance, result);
}

TEST(ColumnGeneration, ConfigValidation) {
  CGConfig config;
  config.time_limit_seconds = 0.0;
  EXPECT_THROW(config.validate(), InvalidArgument);
  config = {};
  config.columns_per_iteration = 0;
  EXPECT_THROW(config.validate(), InvalidArgument);
  config = {};
  config.big_m = 0.5;
  EXPECT_THROW(config.validate(), InvalidArgument);
}

std::vector<Column> columns_from(const InteractionSpace& space,
                                 const std::vector<TestConfig>& tests) {
  std::vector<Column> pool;
  for (const TestConfig& test : tests) {
    pool.push_back(Column::from_test(space, test, ColumnOrigin::kGenerated));
  }
  return pool;
}

TEST(FinalizeIp, ExactPool) {
  const InteractionSpace space(fixtures::web_app());
  const auto pool = columns_from(space, fixtures::web_app_suite());
  const IpSolution ip = finalize_ip(pool, space.exempt(), 10000);
  EXPECT_EQ(ip.tests.size(), 6u);
  EXPECT_TRUE(ip.proven_optimal);
}

TEST(FinalizeIp, DuplicatesDoNotHelp) {
  const InteractionSpace space(fixtures::web_app());
  auto tests = fixtures::web_app_suite();
  for (int i = 0; i < 10; ++i) tests.push_back(tests[i % 6]);
  auto pool = columns_from(space, tests);
  for (Column& c : init_artificial_columns(space)) pool.push_back(std::move(c));
  const IpSolution ip = finalize_ip(pool, space.exempt(), 10000);
  EXPECT_EQ(ip.tests.size(), 6u);
  EXPECT_TRUE(verify_covering_array(space, ip.tests).covers);
}

TEST(FinalizeIp, RandomPoolsMatchBruteForce) {
  std::mt19937_64 rng(55);
  const CAInstance instance = CAInstance::uniform(2, 4, 2);
  const InteractionSpace space(instance);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = std::uniform_int_distribution<int>(4, 16)(rng);
    std::vector<TestConfig> tests;
    for (int i = 0; i < n; ++i) tests.push_back(fixtures::random_test(rng, instance));
    const auto pool = columns_from(space, tests);
    std::vector<std::vector<std::size_t>> sets;
    for (const Column& c : pool) {
      std::vector<std::size_t> rows;
      for (auto p = c.pattern.find_first(); p != CoveragePattern::npos;
           p = c.pattern.find_next(p)) {
        rows.push_back(p);
      }
      sets.push_back(rows);
    }
    const auto best = oracles::min_cover_bruteforce(sets, space.size());
    if (!best) {
      EXPECT_THROW(finalize_ip(pool, space.exempt(), 100000), InfeasiblePool);
      continue;
    }
    const IpSolution ip = finalize_ip(pool, space.exempt(), 100000);
    EXPECT_EQ(ip.tests.size(), *best) << "trial " << trial;
    EXPECT_TRUE(ip.proven_optimal);
    EXPECT_TRUE(verify_covering_array(space, ip.tests).covers);
  }
}

TEST(FinalizeIp, KeepsWarmStartWhenItIsBest) {
  const InteractionSpace space(CAInstance::uniform(3, 7, 2));
  const GreedyResult greedy = greedy_construct(space, 0);
  std::vector<Column> pool;
  for (const TestConfig& t : greedy.tests) {
    pool.push_back(Column::from_test(space, t, ColumnOrigin::kWarmStart));
  }
  const IpSolution ip = finalize_ip(pool, space.exempt(), 1);
  EXPECT_LE(ip.tests.size(), greedy.tests.size());
}

TEST(LowerBoundOp, Examples) {
  EXPECT_EQ(lower_bound(InteractionSpace(fixtures::web_app())), 4u);
  EXPECT_EQ(lower_bound(InteractionSpace(CAInstance::uniform(2, 3, 3))), 9u);
  EXPECT_EQ(lower_bound(InteractionSpace(CAInstance::uniform(3, 5, 2)), 8.0), 8u);
  EXPECT_EQ(lower_bound(InteractionSpace(CAInstance::uniform(3, 5, 2)), 9.2), 10u);
}

}  // namespace
}  // namespace covergen
