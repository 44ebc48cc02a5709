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

#include "covergen/analysis.hpp"

namespace covergen {

AnalysisReport analyze(const InteractionSpace& space,
                       std::span<const TestConfig> tests) {
  AnalysisReport report;
  report.required_interactions = space.num_required();
  const auto required = static_cast<double>(report.required_interactions);
  RowMask covered = space.exempt();
  std::size_t total = 0;
  for (std::size_t i = 0; i < tests.size(); ++i) {
    space.check_test(tests[i]);
    std::size_t fresh = 0;
    space.for_each_covered(tests[i].assignment, [&](std::size_t p) {
      if (!covered.test(p)) {
        covered.set(p);
        ++fresh;
      }
    });
    total += fresh;
    report.per_test_new.push_back(fresh);
    if (fresh == 0) report.redundant_tests.push_back(i);
    if (required > 0) {
      report.per_test_increment_pct.push_back(100.0 * static_cast<double>(fresh) /
                                              required);
      report.cumulative_pct.push_back(100.0 * static_cast<double>(total) /
                                      required);
    } else {
      report.per_test_increment_pct.push_back(0.0);
      report.cumulative_pct.push_back(100.0);
    }
  }
  report.covers = total == report.required_interactions;
  const auto exhaustive = static_cast<double>(space.num_tests());
  report.reduction_pct =
      100.0 * (1.0 - static_cast<double>(tests.size()) / exhaustive);
  return report;
}

}  // namespace covergen
