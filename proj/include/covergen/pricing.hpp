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

#ifndef COVERGEN_PRICING_HPP_
#define COVERGEN_PRICING_HPP_

#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "covergen/model.hpp"

namespace covergen {

struct PricingResult {
  TestConfig test;
  // Sum of the duals of the interactions `test` covers.
  double objective = 0.0;
  // 1 - objective.
  double reduced_cost = 1.0;
  // objective > 1 + epsilon: the column improves the master.
  bool improving = false;
  std::uint64_t nodes_explored = 0;
  // False when a deadline or node limit stopped the search early; the test
  // is then the best one found, not a proven maximizer.
  bool complete = true;
};

enum class TieBreak {
  // Parameters by descending domain size, values by descending bound.
  kValueOrder,
  // Parameters and values in index order; returns the lexicographically
  // smallest maximizer.
  kLexicographic,
};

struct PricingOptions {
  double epsilon = 1e-6;
  std::optional<std::chrono::steady_clock::time_point> deadline;
  std::uint64_t node_limit = 0;  // 0 = unlimited
};

// Exact maximizer of the dual-weighted coverage of one test.
//
// Depth-first branch and bound over parameters in a fixed order. For every
// combination the solver keeps the prefix of its parameters assigned so far;
// the bound is the sum over combinations of the largest dual among value
// tuples consistent with that prefix. Partial assignments that complete a
// forbidden pattern are pruned. Reusable across calls with new duals.
class Pricer {
 public:
  explicit Pricer(const InteractionSpace& space,
                  TieBreak tie_break = TieBreak::kValueOrder);

  // Throws InvalidArgument on a dual vector of the wrong length and
  // InfeasibleInstance when no test avoids the forbidden set.
  PricingResult price(std::span<const double> duals,
                      const PricingOptions& options = {});

  std::span<const int> branching_order() const { return order_; }

 private:
  struct Member {
    std::size_t combination;
    std::size_t level;  // position of the parameter in depth order
  };

  void fill_tables(std::span<const double> duals);
  double entry(std::size_t c, std::size_t level, std::size_t prefix) const {
    return tables_[table_offsets_[c * (strength_ + 1) + level] + prefix];
  }
  void search(std::size_t depth, double bound);

  const InteractionSpace& space_;
  TieBreak tie_break_;
  std::size_t strength_;
  std::vector<int> order_;
  std::vector<std::vector<Member>> members_;  // by parameter
  std::vector<std::vector<std::size_t>> forbidden_at_depth_;
  // Depth-ordered full tuple -> canonical interaction index.
  std::vector<std::vector<std::size_t>> canonical_;
  std::vector<std::vector<int>> depth_params_;
  std::vector<std::size_t> table_offsets_;
  std::vector<double> tables_;

  // Search state.
  std::vector<int> assignment_;
  std::vector<std::size_t> prefix_;
  std::vector<std::vector<double>> child_bounds_;
  std::vector<std::vector<int>> value_order_;
  bool found_ = false;
  double best_ = 0.0;
  std::vector<int> incumbent_;
  std::uint64_t nodes_ = 0;
  bool aborted_ = false;
  PricingOptions options_;
};

PricingResult price(const InteractionSpace& space,
                    std::span<const double> duals, double epsilon = 1e-6);

// Enumerates every test. Refuses spaces with more than `cap` tests.
PricingResult price_exhaustive(const InteractionSpace& space,
                               std::span<const double> duals,
                               std::uint64_t cap = 1'000'000);

// Dual-weighted coverage of `test`, summed in canonical interaction order.
double dual_weight(const InteractionSpace& space, const TestConfig& test,
                   std::span<const double> duals);

}  // namespace covergen

#endif  // COVERGEN_PRICING_HPP_
