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

#include "covergen/errors.hpp"
#include "covergen/pricing.hpp"
#include "fixtures.hpp"

namespace covergen {
namespace {

TEST(Pricing, ZeroDuals) {
  const InteractionSpace space(fixtures::web_app());
  const PricingResult result = price(space, std::vector<double>(40, 0.0));
  EXPECT_EQ(result.objective, 0.0);
  EXPECT_EQ(result.reduced_cost, 1.0);
  EXPECT_FALSE(result.improving);
  EXPECT_NO_THROW(space.check_test(result.test));
}

TEST(Pricing, UniformBigM) {
  const InteractionSpace space(fixtures::web_app());
  const PricingResult result = price(space, std::vector<double>(40, 41.0));
  EXPECT_DOUBLE_EQ(result.objective, 410.0);
  EXPECT_DOUBLE_EQ(result.reduced_cost, 1.0 - 410.0);
  EXPECT_TRUE(result.improving);
}

TEST(Pricing, TwoWeightedTuples) {
  const InteractionSpace space(fixtures::web_app());
  std::vector<double> duals(40, 0.0);
  duals[space.index_of({{0, 1}, {0, 0}})] = 1.0;
  duals[space.index_of({{0, 1}, {1, 1}})] = 1.0;
  const PricingResult result = price(space, duals);
  EXPECT_DOUBLE_EQ(result.objective, 1.0);
  const auto& a = result.test.assignment;
  EXPECT_EQ(a[0], a[1]);
  EXPECT_DOUBLE_EQ(price_exhaustive(space, duals).objective, 1.0);
}

TEST(Pricing, ObjectiveIsRecomputedWeight) {
  std::mt19937_64 rng(12);
  const InteractionSpace space(CAInstance::uniform(3, 6, 3));
  for (int trial = 0; trial < 20; ++trial) {
    const auto duals = fixtures::random_duals(rng, space.size());
    const PricingResult result = price(space, duals);
    EXPECT_EQ(result.objective, dual_weight(space, result.test, duals));
    EXPECT_EQ(result.reduced_cost, 1.0 - result.objective);
    EXPECT_EQ(result.improving, result.objective > 1.0 + 1e-6);
  }
}

void expect_matches_exhaustive(const CAInstance& instance, int trials,
                               std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const InteractionSpace space(instance);
  Pricer pricer(space);
  for (int trial = 0; trial < trials; ++trial) {
    auto duals = fixtures::random_duals(rng, space.size());
    for (std::size_t p = 0; p < space.size(); ++p) {
      if (space.is_exempt(p)) duals[p] = 0.0;
    }
    const PricingResult fast = pricer.price(duals);
    const PricingResult slow = price_exhaustive(space, duals);
    EXPECT_NEAR(fast.objective, slow.objective, 1e-9) << "trial " << trial;
    EXPECT_FALSE(space.is_forbidden_test(fast.test));
    EXPECT_LE(fast.nodes_explored, 2 * space.num_tests() + 1);
  }
}

TEST(Pricing, MatchesExhaustiveBinary) {
  expect_matches_exhaustive(CAInstance::uniform(2, 5, 2), 100, 1);
  expect_matches_exhaustive(CAInstance::uniform(3, 7, 2), 30, 2);
}

TEST(Pricing, MatchesExhaustiveTernary) {
  expect_matches_exhaustive(CAInstance::uniform(3, 4, 3), 60, 3);
  expect_matches_exhaustive(CAInstance::uniform(2, 6, 3), 30, 4);
}

TEST(Pricing, MatchesExhaustiveMixedAndForbidden) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 25; ++trial) {
    CAInstance instance = fixtures::random_instance(rng, 6, 4);
    if (instance.num_parameters() >= 2) {
      instance.forbidden = {{{0, 0}, {1, instance.domains[1] - 1}}};
      if (instance.domains[0] == 1 && instance.domains[1] == 1) {
        instance.forbidden.clear();
      }
    }
    expect_matches_exhaustive(instance, 8, 100 + trial);
  }
}

TEST(Pricing, NeverEmitsForbiddenPair) {
  CAInstance instance = fixtures::web_app();
  instance.forbidden = {{{0, 1}, {1, 0}}};
  const InteractionSpace space(instance);
  std::vector<double> duals(40, 0.0);
  for (std::size_t p = 0; p < 40; ++p) {
    if (!space.is_exempt(p)) duals[p] = 1.0;
  }
  // Reward the forbidden neighbourhood heavily.
  duals[space.index_of({{0, 2}, {1, 0}})] = 50.0;
  duals[space.index_of({{1, 2}, {0, 0}})] = 50.0;
  const PricingResult result = price(space, duals);
  EXPECT_FALSE(result.test.assignment[0] == 1 && result.test.assignment[1] == 0);
  EXPECT_NEAR(result.objective, price_exhaustive(space, duals).objective, 1e-9);
}

TEST(Pricing, AllTestsForbiddenThrows) {
  CAInstance instance = CAInstance::uniform(2, 2, 2);
  instance.forbidden = {{{0, 0}}, {{0, 1}}};
  const InteractionSpace space(instance);
  EXPECT_THROW(price(space, std::vector<double>(space.size(), 0.0)),
               InfeasibleInstance);
}

TEST(Pricing, LexicographicTieBreakIsSmallestMaximizer) {
  std::mt19937_64 rng(5);
  const InteractionSpace space(CAInstance::uniform(2, 5, 3));
  Pricer pricer(space, TieBreak::kLexicographic);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<double> duals(space.size());
    // Coarse weights create many ties.
    for (double& d : duals) d = std::uniform_int_distribution<int>(0, 2)(rng);
    const PricingResult result = pricer.price(duals);
    const double best = price_exhaustive(space, duals).objective;
    ASSERT_DOUBLE_EQ(result.objective, best);
    for (std::uint64_t r = 0; r < space.num_tests(); ++r) {
      const TestConfig test = space.test_at(r);
      if (test == result.test) break;
      EXPECT_LT(dual_weight(space, test, duals), best - 1e-12);
    }
  }
}

TEST(Pricing, BranchingOrderByDescendingDomain) {
  CAInstance instance;
  instance.strength = 2;
  instance.domains = {2, 4, 3, 4};
  const InteractionSpace space(instance);
  const Pricer pricer(space);
  const auto order = pricer.branching_order();
  EXPECT_EQ(std::vector<int>(order.begin(), order.end()),
            (std::vector<int>{1, 3, 2, 0}));
}

TEST(Pricing, ExhaustiveRefusesLargeSpaces) {
  const InteractionSpace space(CAInstance::uniform(2, 21, 2));
  EXPECT_THROW(price_exhaustive(space, std::vector<double>(space.size(), 0.0)),
               SizeLimitExceeded);
}

TEST(Pricing, NodeLimitMarksIncomplete) {
  std::mt19937_64 rng(6);
  const InteractionSpace space(CAInstance::uniform(3, 12, 3));
  Pricer pricer(space);
  PricingOptions options;
  options.node_limit = 5;
  const auto duals = fixtures::random_duals(rng, space.size());
  try {
    const PricingResult result = pricer.price(duals, options);
    EXPECT_FALSE(result.complete);
  } catch (const SolverFailure&) {
    SUCCEED();
  }
}

}  // namespace
}  // namespace covergen
