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

#ifndef COVERGEN_BASELINES_HPP_
#define COVERGEN_BASELINES_HPP_

#include <cstdint>
#include <optional>
#include <vector>

#include "covergen/model.hpp"

namespace covergen {

struct GreedyResult {
  std::vector<TestConfig> tests;
  // Interactions each test covers for the first time, in order.
  std::vector<std::size_t> per_test_new_coverage;
};

// One-test-at-a-time density greedy. Every test starts from the first
// uncovered interaction; the remaining parameters are visited in an order
// shuffled by `seed` and each takes the value with the largest number of
// newly covered interactions (lowest value on ties). Throws
// InfeasibleInstance if some required interaction has no valid completion.
GreedyResult greedy_construct(const InteractionSpace& space,
                              std::uint64_t seed = 0);

struct OracleResult {
  // The covering array number, when proven within the cap.
  std::optional<std::size_t> can;
  // Proven lower bound; equals *can when known.
  std::size_t lower_bound = 0;
  std::vector<TestConfig> witness;
  std::uint64_t nodes = 0;
};

// Smallest covering array by iterative deepening over strictly increasing
// test ranks. Exponential; meant for spaces of at most `max_tests` tests.
// Suite sizes above `cap` are not tried, in which case `can` stays empty.
OracleResult exact_can_oracle(const InteractionSpace& space, std::size_t cap,
                              std::uint64_t max_tests = 64);

// Largest number of required interactions within a single combination.
std::size_t combination_lower_bound(const InteractionSpace& space);

}  // namespace covergen

#endif  // COVERGEN_BASELINES_HPP_
