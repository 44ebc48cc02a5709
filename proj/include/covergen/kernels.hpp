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

#ifndef COVERGEN_KERNELS_HPP_
#define COVERGEN_KERNELS_HPP_

// Data-parallel inner loops. Each kernel has a serial reference twin with an
// identical result contract; the tests compare the two bit for bit.

#include <cstddef>
#include <cstdint>
#include <span>

#include "covergen/model.hpp"

namespace covergen::kernels {

// Bitwise OR of the coverage patterns of `tests`. Tests are not validated.
CoveragePattern covered_union_serial(const InteractionSpace& space,
                                     std::span<const TestConfig> tests);
CoveragePattern covered_union(const InteractionSpace& space,
                              std::span<const TestConfig> tests);

struct BestTest {
  bool found = false;
  std::uint64_t rank = 0;  // see InteractionSpace::test_at
  double value = 0.0;
  std::uint64_t evaluated = 0;
};

// Maximizes the summed weight of covered interactions over every test that
// avoids the forbidden set. Ties go to the lowest rank. Each test's value is
// summed in canonical interaction order, so both versions agree exactly.
BestTest best_test_serial(const InteractionSpace& space,
                          std::span<const double> weights);
BestTest best_test(const InteractionSpace& space,
                   std::span<const double> weights);

// Column-compressed 0/1 matrix: column j owns rows[starts[j] .. starts[j+1]).
struct SparseColumns {
  std::span<const std::size_t> starts;
  std::span<const int> rows;
};

// out[j] = costs[j] - sum over rows r of column j of duals[r].
void reduced_costs_serial(SparseColumns columns, std::span<const double> costs,
                          std::span<const double> duals, std::span<double> out);
void reduced_costs(SparseColumns columns, std::span<const double> costs,
                   std::span<const double> duals, std::span<double> out);

}  // namespace covergen::kernels

#endif  // COVERGEN_KERNELS_HPP_
