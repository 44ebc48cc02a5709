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

#ifndef COVERGEN_COLGEN_HPP_
#define COVERGEN_COLGEN_HPP_

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "covergen/errors.hpp"
#include "covergen/master.hpp"
#include "covergen/model.hpp"

namespace covergen {

enum class WarmStart { kNone, kGreedy };

struct CGConfig {
  // End-to-end budget for the loop and the integer finalization.
  double time_limit_seconds = 60.0;
  double tolerance = 1e-6;
  std::size_t columns_per_iteration = 1;
  WarmStart warm_start = WarmStart::kGreedy;
  // Cost of artificial columns; P + 1 when unset.
  std::optional<double> big_m;
  std::uint64_t ip_node_limit = 200'000;
  // Seed of the greedy warm start.
  std::uint64_t seed = 0;
  // LP iterations without objective progress before pricing switches to
  // lexicographic tie-breaking.
  std::size_t stall_iterations = 50;

  void validate() const;
};

struct ProgressEvent {
  std::size_t iteration = 0;
  double lp_objective = 0.0;
  double pricing_objective = 0.0;
  std::size_t pool_size = 0;
  std::size_t simplex_iterations = 0;
  double elapsed_seconds = 0.0;
};

using ProgressSink = std::function<void(const ProgressEvent&)>;

struct CGResult {
  std::vector<TestConfig> tests;
  // Optimal LP value when lp_optimal, otherwise the best proven LP lower
  // bound seen during the loop.
  double lp_bound = 0.0;
  std::size_t ip_objective = 0;
  bool lp_optimal = false;
  // lp_optimal and ip_objective == ceil(lp_bound).
  bool optimal = false;
  std::size_t lower_bound = 0;
  std::size_t iterations = 0;
  std::size_t columns_generated = 0;
  std::size_t warm_start_size = 0;
  std::uint64_t ip_nodes = 0;
  // The integer program over the final pool was solved to optimality.
  bool ip_proven = false;
  double wall_time_seconds = 0.0;
};

// Raised when the budget ends before the pool holds a real cover.
class BudgetExhausted : public Error {
 public:
  BudgetExhausted(const std::string& what, std::vector<Column> pool)
      : Error(what), pool_(std::move(pool)) {}
  const std::vector<Column>& pool() const { return pool_; }

 private:
  std::vector<Column> pool_;
};

// One identity column of cost `big_m` per non-exempt interaction.
std::vector<Column> init_artificial_columns(const InteractionSpace& space,
                                            double big_m);
std::vector<Column> init_artificial_columns(const InteractionSpace& space);

CGResult run_column_generation(const CAInstance& instance,
                               const CGConfig& config = {},
                               const ProgressSink& progress = {});

struct IpSolution {
  std::vector<TestConfig> tests;
  std::uint64_t nodes = 0;
  bool proven_optimal = false;
  // ceil of the root LP over the reduced pool.
  std::size_t root_bound = 0;
};

// Unicost set cover over the real columns of the pool by depth-first branch
// and bound with LP bounds. Artificial columns are ignored. Returns the best
// cover found within `node_limit` nodes and the deadline.
IpSolution finalize_ip(
    std::span<const Column> columns, const RowMask& exempt,
    std::uint64_t node_limit, double tolerance = 1e-6,
    std::optional<std::chrono::steady_clock::time_point> deadline = {});

// Largest per-combination requirement, raised to ceil(lp_bound) if given.
std::size_t lower_bound(const InteractionSpace& space,
                        std::optional<double> lp_bound = {},
                        double tolerance = 1e-6);

}  // namespace covergen

#endif  // COVERGEN_COLGEN_HPP_
