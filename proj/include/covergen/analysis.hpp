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

#ifndef COVERGEN_ANALYSIS_HPP_
#define COVERGEN_ANALYSIS_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "covergen/model.hpp"

namespace covergen {

// Coverage contribution of each test in suite order.
struct AnalysisReport {
  // Newly covered required interactions per test, as a percentage.
  std::vector<double> per_test_increment_pct;
  // Percentage covered after each test.
  std::vector<double> cumulative_pct;
  // 100 * (1 - tests / exhaustive tests).
  double reduction_pct = 0.0;
  std::vector<std::size_t> per_test_new;
  // Tests that add nothing over the tests before them.
  std::vector<std::size_t> redundant_tests;
  std::size_t required_interactions = 0;
  bool covers = false;
};

AnalysisReport analyze(const InteractionSpace& space,
                       std::span<const TestConfig> tests);

}  // namespace covergen

#endif  // COVERGEN_ANALYSIS_HPP_
