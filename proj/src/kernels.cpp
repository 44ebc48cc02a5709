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

#include "covergen/kernels.hpp"

#include <algorithm>
#include <vector>

#include <omp.h>

namespace covergen::kernels {
namespace {

// Small loops are not worth a parallel region.
constexpr std::size_t kParallelThreshold = 4096;

double test_value(const InteractionSpace& space, std::span<const int> test,
                  std::span<const double> weights) {
  double value = 0.0;
  space.for_each_covered(test, [&](std::size_t p) { value += weights[p]; });
  return value;
}

// Advances a mixed-radix odometer (last parameter least significant).
void next_test(const InteractionSpace& space, std::vector<int>& test) {
  for (int i = space.num_parameters(); i-- > 0;) {
    if (++test[i] < space.domain(i)) return;
    test[i] = 0;
  }
}

void scan_range(const InteractionSpace& space, std::span<const double> weights,
                std::uint64_t begin, std::uint64_t end, BestTest& best) {
  if (begin >= end) return;
  std::vector<int> test = space.test_at(begin).assignment;
  for (std::uint64_t rank = begin; rank < end; ++rank) {
    if (!space.is_forbidden_test(test)) {
      ++best.evaluated;
      const double value = test_value(space, test, weights);
      if (!best.found || value > best.value) {
        best.found = true;
        best.rank = rank;
        best.value = value;
      }
    }
    next_test(space, test);
  }
}

}  // namespace

CoveragePattern covered_union_serial(const InteractionSpace& space,
                                     std::span<const TestConfig> tests) {
  CoveragePattern covered(space.size());
  for (const TestConfig& test : tests) {
    space.for_each_covered(test.assignment,
                           [&](std::size_t p) { covered.set(p); });
  }
  return covered;
}

CoveragePattern covered_union(const InteractionSpace& space,
                              std::span<const TestConfig> tests) {
  if (tests.size() * space.num_combinations() < kParallelThreshold) {
    return covered_union_serial(space, tests);
  }
  CoveragePattern covered(space.size());
  const auto n = static_cast<std::int64_t>(tests.size());
#pragma omp parallel
  {
    CoveragePattern local(space.size());
#pragma omp for schedule(static) nowait
    for (std::int64_t i = 0; i < n; ++i) {
      space.for_each_covered(tests[i].assignment,
                             [&](std::size_t p) { local.set(p); });
    }
#pragma omp critical(covergen_union)
    covered |= local;
  }
  return covered;
}

BestTest best_test_serial(const InteractionSpace& space,
                          std::span<const double> weights) {
  BestTest best;
  scan_range(space, weights, 0, space.num_tests(), best);
  return best;
}

BestTest best_test(const InteractionSpace& space,
                   std::span<const double> weights) {
  const std::uint64_t total = space.num_tests();
  if (total < kParallelThreshold) return best_test_serial(space, weights);
  BestTest best;
#pragma omp parallel
  {
    const auto threads = static_cast<std::uint64_t>(omp_get_num_threads());
    const auto id = static_cast<std::uint64_t>(omp_get_thread_num());
    const std::uint64_t chunk = (total + threads - 1) / threads;
    const std::uint64_t begin = std::min(total, id * chunk);
    const std::uint64_t end = std::min(total, begin + chunk);
    BestTest local;
    scan_range(space, weights, begin, end, local);
#pragma omp critical(covergen_best_test)
    {
      best.evaluated += local.evaluated;
      if (local.found &&
          (!best.found || local.value > best.value ||
           (local.value == best.value && local.rank < best.rank))) {
        best.found = true;
        best.rank = local.rank;
        best.value = local.value;
      }
    }
  }
  return best;
}

void reduced_costs_serial(SparseColumns columns, std::span<const double> costs,
                          std::span<const double> duals,
                          std::span<double> out) {
  for (std::size_t j = 0; j < costs.size(); ++j) {
    double value = costs[j];
    for (std::size_t e = columns.starts[j]; e < columns.starts[j + 1]; ++e) {
      value -= duals[columns.rows[e]];
    }
    out[j] = value;
  }
}

void reduced_costs(SparseColumns columns, std::span<const double> costs,
                   std::span<const double> duals, std::span<double> out) {
  if (columns.rows.size() < kParallelThreshold) {
    reduced_costs_serial(columns, costs, duals, out);
    return;
  }
  const auto n = static_cast<std::int64_t>(costs.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t j = 0; j < n; ++j) {
    double value = costs[j];
    for (std::size_t e = columns.starts[j]; e < columns.starts[j + 1]; ++e) {
      value -= duals[columns.rows[e]];
    }
    out[j] = value;
  }
}

}  // namespace covergen::kernels
