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

#include "covergen/colgen.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <string>

#include "covergen/baselines.hpp"
#include "covergen/pricing.hpp"

namespace covergen {
namespace {

using Clock = std::chrono::steady_clock;

std::size_t ceil_with_tolerance(double value, double tolerance) {
  if (value <= tolerance) return 0;
  return static_cast<std::size_t>(std::ceil(value - tolerance));
}

// Depth-first set cover search over a reduced column pool.
class CoverSearch {
 public:
  CoverSearch(std::vector<std::vector<int>> columns, std::size_t num_rows,
              double tolerance, std::uint64_t node_limit,
              std::optional<Clock::time_point> deadline)
      : columns_(std::move(columns)),
        num_rows_(num_rows),
        tolerance_(tolerance),
        node_limit_(node_limit),
        deadline_(deadline),
        covering_(num_rows),
        cover_count_(num_rows, 0),
        banned_(columns_.size(), false),
        in_use_(columns_.size(), false),
        uncovered_(num_rows) {
    for (std::size_t j = 0; j < columns_.size(); ++j) {
      for (int row : columns_[j]) {
        covering_[static_cast<std::size_t>(row)].push_back(j);
      }
    }
  }

  void set_incumbent(std::vector<std::size_t> cover) {
    incumbent_ = std::move(cover);
  }

  std::vector<std::size_t> greedy_cover(
      std::span<const double> preference = {}) const {
    std::vector<int> count(num_rows_, 0);
    std::size_t uncovered = num_rows_;
    std::vector<std::size_t> cover;
    std::vector<bool> used(columns_.size(), false);
    while (uncovered > 0) {
      std::size_t best = columns_.size();
      double best_score = -1.0;
      for (std::size_t j = 0; j < columns_.size(); ++j) {
        if (used[j]) continue;
        std::size_t gain = 0;
        for (int row : columns_[j]) {
          if (count[static_cast<std::size_t>(row)] == 0) ++gain;
        }
        if (gain == 0) continue;
        double score = static_cast<double>(gain);
        if (!preference.empty()) score *= 1.0 + preference[j];
        if (score > best_score) {
          best_score = score;
          best = j;
        }
      }
      used[best] = true;
      cover.push_back(best);
      for (int row : columns_[best]) {
        if (count[static_cast<std::size_t>(row)]++ == 0) --uncovered;
      }
    }
    return drop_redundant(std::move(cover));
  }

  // Starts from the better of a greedy cover and `seed`, which must cover
  // every row when nonempty.
  void run(std::vector<std::size_t> seed = {}) {
    if (num_rows_ > 0) {
      incumbent_ = greedy_cover();
      if (!seed.empty()) {
        seed = drop_redundant(std::move(seed));
        if (seed.size() < incumbent_.size()) incumbent_ = std::move(seed);
      }
    }
    search();
  }

  const std::vector<std::size_t>& incumbent() const { return incumbent_; }
  std::uint64_t nodes() const { return nodes_; }
  bool aborted() const { return aborted_; }
  std::size_t root_bound() const { return root_bound_; }

 private:
  std::vector<std::size_t> drop_redundant(std::vector<std::size_t> cover) const {
    std::vector<int> count(num_rows_, 0);
    for (std::size_t j : cover) {
      for (int row : columns_[j]) ++count[static_cast<std::size_t>(row)];
    }
    for (std::size_t i = cover.size(); i-- > 0;) {
      const auto& rows = columns_[cover[i]];
      const bool redundant = std::all_of(rows.begin(), rows.end(), [&](int r) {
        return count[static_cast<std::size_t>(r)] > 1;
      });
      if (!redundant) continue;
      for (int row : rows) --count[static_cast<std::size_t>(row)];
      cover.erase(cover.begin() + static_cast<std::ptrdiff_t>(i));
    }
    return cover;
  }

  void choose(std::size_t j, int delta) {
    in_use_[j] = delta > 0;
    for (int row : columns_[j]) {
      auto& count = cover_count_[static_cast<std::size_t>(row)];
      if (delta > 0 && count++ == 0) --uncovered_;
      if (delta < 0 && --count == 0) ++uncovered_;
    }
    if (delta > 0) {
      chosen_.push_back(j);
    } else {
      chosen_.pop_back();
    }
  }

  bool out_of_budget() {
    if (node_limit_ > 0 && nodes_ >= node_limit_) aborted_ = true;
    if (deadline_ && Clock::now() >= *deadline_) aborted_ = true;
    return aborted_;
  }

  // LP relaxation of the residual cover problem. Returns nullopt when some
  // uncovered row has no usable column.
  std::optional<MasterSolution> residual_lp(std::vector<std::size_t>& ids) {
    RowMask exempt(num_rows_);
    for (std::size_t r = 0; r < num_rows_; ++r) {
      if (cover_count_[r] > 0) exempt.set(r);
    }
    MasterOptions options;
    options.tolerance = tolerance_;
    options.deadline = deadline_;
    MasterSolver solver(num_rows_, exempt, options);
    ids.clear();
    for (std::size_t j = 0; j < columns_.size(); ++j) {
      if (banned_[j] || in_use_[j]) continue;
      Column column;
      column.pattern.resize(num_rows_);
      bool useful = false;
      for (int row : columns_[j]) {
        column.pattern.set(static_cast<std::size_t>(row));
        useful = useful || cover_count_[static_cast<std::size_t>(row)] == 0;
      }
      if (!useful) continue;
      solver.add_column(std::move(column));
      ids.push_back(j);
    }
    try {
      MasterSolution solution = solver.solve();
      if (!solution.optimal) {
        aborted_ = true;
        return std::nullopt;
      }
      return solution;
    } catch (const InfeasiblePool&) {
      return std::nullopt;
    } catch (const SolverFailure&) {
      // Keep the incumbent; the search is simply no longer exhaustive.
      aborted_ = true;
      return std::nullopt;
    }
  }

  void search() {
    ++nodes_;
    if (uncovered_ == 0) {
      if (chosen_.size() < incumbent_.size()) incumbent_ = chosen_;
      return;
    }
    if (chosen_.size() + 1 >= incumbent_.size() || out_of_budget()) return;

    std::vector<std::size_t> ids;
    const auto lp = residual_lp(ids);
    if (!lp) return;
    const std::size_t bound = ceil_with_tolerance(lp->objective, tolerance_);
    if (nodes_ == 1) root_bound_ = bound;
    if (chosen_.size() + bound >= incumbent_.size()) return;

    // LP-guided rounding for a fresh incumbent.
    std::vector<double> weight(columns_.size(), 0.0);
    for (std::size_t i = 0; i < ids.size(); ++i) weight[ids[i]] = lp->primal[i];
    round_lp(weight);
    if (chosen_.size() + bound >= incumbent_.size()) return;

    // Branch on the uncovered row with the fewest usable columns.
    std::size_t branch_row = num_rows_;
    std::size_t fewest = columns_.size() + 1;
    for (std::size_t r = 0; r < num_rows_; ++r) {
      if (cover_count_[r] > 0) continue;
      std::size_t usable = 0;
      for (std::size_t j : covering_[r]) usable += banned_[j] ? 0 : 1;
      if (usable < fewest) {
        fewest = usable;
        branch_row = r;
      }
    }
    std::vector<std::size_t> candidates;
    for (std::size_t j : covering_[branch_row]) {
      if (!banned_[j]) candidates.push_back(j);
    }
    std::stable_sort(candidates.begin(), candidates.end(),
                     [&](std::size_t a, std::size_t b) {
                       return weight[a] > weight[b];
                     });
    std::vector<std::size_t> newly_banned;
    for (std::size_t j : candidates) {
      choose(j, +1);
      search();
      choose(j, -1);
      if (aborted_) break;
      banned_[j] = true;
      newly_banned.push_back(j);
    }
    for (std::size_t j : newly_banned) banned_[j] = false;
  }

  void round_lp(std::span<const double> weight) {
    std::vector<std::size_t> order;
    for (std::size_t j = 0; j < columns_.size(); ++j) {
      if (weight[j] > tolerance_) order.push_back(j);
    }
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) {
                       return weight[a] > weight[b];
                     });
    std::vector<int> count(cover_count_);
    std::size_t uncovered = uncovered_;
    std::vector<std::size_t> cover(chosen_);
    for (std::size_t j : order) {
      if (uncovered == 0) break;
      bool gains = false;
      for (int row : columns_[j]) gains |= count[static_cast<std::size_t>(row)] == 0;
      if (!gains) continue;
      cover.push_back(j);
      for (int row : columns_[j]) {
        if (count[static_cast<std::size_t>(row)]++ == 0) --uncovered;
      }
    }
    if (uncovered > 0) return;
    cover = drop_redundant(std::move(cover));
    if (cover.size() < incumbent_.size()) incumbent_ = std::move(cover);
  }

  std::vector<std::vector<int>> columns_;
  std::size_t num_rows_;
  double tolerance_;
  std::uint64_t node_limit_;
  std::optional<Clock::time_point> deadline_;
  std::vector<std::vector<std::size_t>> covering_;
  std::vector<int> cover_count_;
  std::vector<bool> banned_;
  std::vector<bool> in_use_;
  std::size_t uncovered_;
  std::vector<std::size_t> chosen_;
  std::vector<std::size_t> incumbent_;
  std::uint64_t nodes_ = 0;
  bool aborted_ = false;
  std::size_t root_bound_ = 0;
};

}  // namespace

void CGConfig::validate() const {
  if (!(time_limit_seconds > 0.0)) {
    throw InvalidArgument("time limit must be positive");
  }
  if (!(tolerance > 0.0)) throw InvalidArgument("tolerance must be positive");
  if (columns_per_iteration < 1) {
    throw InvalidArgument("columns_per_iteration must be at least 1");
  }
  if (big_m && !(*big_m > 1.0)) {
    throw InvalidArgument("big_m must exceed the unit test cost");
  }
  if (ip_node_limit < 1) throw InvalidArgument("ip_node_limit must be positive");
  if (stall_iterations < 1) {
    throw InvalidArgument("stall_iterations must be positive");
  }
}

std::vector<Column> init_artificial_columns(const InteractionSpace& space,
                                            double big_m) {
  std::vector<Column> columns;
  columns.reserve(space.num_required());
  for (std::size_t p = 0; p < space.size(); ++p) {
    if (space.is_exempt(p)) continue;
    columns.push_back(Column::artificial(space.size(), p, big_m));
  }
  return columns;
}

std::vector<Column> init_artificial_columns(const InteractionSpace& space) {
  return init_artificial_columns(space, static_cast<double>(space.size()) + 1.0);
}

std::size_t lower_bound(const InteractionSpace& space,
                        std::optional<double> lp_bound, double tolerance) {
  std::size_t bound = combination_lower_bound(space);
  if (lp_bound) {
    bound = std::max(bound, ceil_with_tolerance(*lp_bound, tolerance));
  }
  return bound;
}

IpSolution finalize_ip(std::span<const Column> columns, const RowMask& exempt,
                       std::uint64_t node_limit, double tolerance,
                       std::optional<Clock::time_point> deadline) {
  std::vector<int> row_of(exempt.size(), -1);
  std::size_t num_rows = 0;
  for (std::size_t p = 0; p < exempt.size(); ++p) {
    if (!exempt.test(p)) row_of[p] = static_cast<int>(num_rows++);
  }

  // Real columns restricted to required rows, without duplicates or columns
  // dominated by another one.
  std::vector<std::size_t> source;
  std::vector<RowMask> masks;
  std::map<RowMask, std::size_t> seen;
  std::vector<std::size_t> warm;  // mask indices of warm-start columns
  for (std::size_t j = 0; j < columns.size(); ++j) {
    const Column& column = columns[j];
    if (column.origin == ColumnOrigin::kArtificial || !column.test) continue;
    if (column.pattern.size() != exempt.size()) {
      throw InvalidArgument("column pattern length does not match the rows");
    }
    RowMask mask = column.pattern - exempt;
    if (mask.none()) continue;
    const auto [it, inserted] = seen.emplace(mask, masks.size());
    if (column.origin == ColumnOrigin::kWarmStart) warm.push_back(it->second);
    if (!inserted) continue;
    source.push_back(j);
    masks.push_back(std::move(mask));
  }
  // dominator[a] is the surviving column that covers everything a covers.
  std::vector<std::size_t> dominator(masks.size());
  std::iota(dominator.begin(), dominator.end(), std::size_t{0});
  for (std::size_t a = 0; a < masks.size(); ++a) {
    for (std::size_t b = 0; b < masks.size(); ++b) {
      if (a != b && dominator[b] == b && masks[a].is_subset_of(masks[b])) {
        dominator[a] = b;
        break;
      }
    }
  }
  for (std::size_t a = 0; a < masks.size(); ++a) {
    while (dominator[dominator[a]] != dominator[a]) {
      dominator[a] = dominator[dominator[a]];
    }
  }
  std::vector<std::vector<int>> reduced;
  std::vector<std::size_t> origin;
  std::vector<std::size_t> reduced_index(masks.size(), 0);
  RowMask covered(exempt.size());
  for (std::size_t a = 0; a < masks.size(); ++a) {
    if (dominator[a] != a) continue;
    reduced_index[a] = reduced.size();
    std::vector<int> rows;
    for (auto p = masks[a].find_first(); p != RowMask::npos;
         p = masks[a].find_next(p)) {
      rows.push_back(row_of[p]);
    }
    covered |= masks[a];
    reduced.push_back(std::move(rows));
    origin.push_back(source[a]);
  }
  covered |= exempt;
  if (!covered.all()) {
    throw InfeasiblePool("real columns leave interaction " +
                         std::to_string((~covered).find_first()) +
                         " uncovered");
  }

  std::vector<std::size_t> seed;
  RowMask warm_covered(exempt.size());
  for (std::size_t a : warm) {
    warm_covered |= masks[a];
    seed.push_back(reduced_index[dominator[a]]);
  }
  std::sort(seed.begin(), seed.end());
  seed.erase(std::unique(seed.begin(), seed.end()), seed.end());
  if (!(warm_covered | exempt).all()) seed.clear();

  CoverSearch search(std::move(reduced), num_rows, tolerance, node_limit,
                     deadline);
  search.run(std::move(seed));
  IpSolution solution;
  for (std::size_t j : search.incumbent()) {
    solution.tests.push_back(*columns[origin[j]].test);
  }
  std::sort(solution.tests.begin(), solution.tests.end());
  solution.nodes = search.nodes();
  solution.proven_optimal = !search.aborted();
  solution.root_bound = search.root_bound();
  return solution;
}

CGResult run_column_generation(const CAInstance& instance,
                               const CGConfig& config,
                               const ProgressSink& progress) {
  config.validate();
  const auto start = Clock::now();
  const auto budget = std::chrono::duration_cast<Clock::duration>(
      std::chrono::duration<double>(config.time_limit_seconds));
  // The loop yields at 90% so the integer step keeps at least 10%.
  const auto loop_deadline = start + budget * 9 / 10;
  const auto deadline = start + budget;
  const auto elapsed = [&] {
    return std::chrono::duration<double>(Clock::now() - start).count();
  };

  const InteractionSpace space(instance);
  const double big_m =
      config.big_m.value_or(static_cast<double>(space.size()) + 1.0);

  MasterOptions master_options;
  master_options.tolerance = config.tolerance;
  master_options.deadline = loop_deadline;
  MasterSolver master(space.size(), space.exempt(), master_options);
  for (Column& column : init_artificial_columns(space, big_m)) {
    master.add_column(std::move(column));
  }

  CGResult result;
  std::set<CoveragePattern> seen;
  const auto add_test = [&](TestConfig test, ColumnOrigin origin) {
    Column column = Column::from_test(space, std::move(test), origin);
    if (!seen.insert(column.pattern).second) return false;
    master.add_column(std::move(column));
    return true;
  };
  if (config.warm_start == WarmStart::kGreedy) {
    GreedyResult greedy = greedy_construct(space, config.seed);
    result.warm_start_size = greedy.tests.size();
    for (TestConfig& test : greedy.tests) {
      add_test(std::move(test), ColumnOrigin::kWarmStart);
    }
  }

  Pricer pricer(space);
  std::optional<Pricer> lexicographic;
  Pricer* active = &pricer;
  double last_objective = std::numeric_limits<double>::infinity();
  std::size_t stalled = 0;
  double proven_bound = 0.0;
  double lp_objective = 0.0;

  while (true) {
    const MasterSolution solution = master.solve();
    ++result.iterations;
    lp_objective = solution.objective;
    if (!solution.optimal || Clock::now() >= loop_deadline) break;

    PricingOptions pricing_options;
    pricing_options.epsilon = config.tolerance;
    pricing_options.deadline = loop_deadline;
    const PricingResult priced = active->price(solution.duals, pricing_options);
    if (progress) {
      progress({result.iterations, solution.objective, priced.objective,
                master.columns().size(), solution.iterations, elapsed()});
    }
    if (!priced.complete) break;
    // Scaling the duals by the best column weight keeps them feasible for
    // every column, which bounds the full LP from below.
    proven_bound = std::max(
        proven_bound, solution.objective / std::max(1.0, priced.objective));
    if (!priced.improving) {
      result.lp_optimal = true;
      break;
    }
    if (!add_test(priced.test, ColumnOrigin::kGenerated)) break;
    ++result.columns_generated;

    if (config.columns_per_iteration > 1) {
      std::vector<double> masked(solution.duals);
      space.for_each_covered(priced.test.assignment,
                             [&](std::size_t p) { masked[p] = 0.0; });
      for (std::size_t extra = 1; extra < config.columns_per_iteration;
           ++extra) {
        const PricingResult more = active->price(masked, pricing_options);
        if (!more.complete ||
            dual_weight(space, more.test, solution.duals) <=
                1.0 + config.tolerance) {
          break;
        }
        space.for_each_covered(more.test.assignment,
                               [&](std::size_t p) { masked[p] = 0.0; });
        if (!add_test(more.test, ColumnOrigin::kGenerated)) break;
        ++result.columns_generated;
      }
    }

    if (solution.objective < last_objective - config.tolerance) {
      stalled = 0;
      last_objective = solution.objective;
    } else if (++stalled >= config.stall_iterations && !lexicographic) {
      lexicographic.emplace(space, TieBreak::kLexicographic);
      active = &*lexicographic;
    }
  }
  result.lp_bound = result.lp_optimal ? lp_objective : proven_bound;

  std::vector<Column> real;
  for (const Column& column : master.columns()) {
    if (column.origin != ColumnOrigin::kArtificial) real.push_back(column);
  }
  IpSolution ip;
  try {
    ip = finalize_ip(real, space.exempt(), config.ip_node_limit,
                     config.tolerance, deadline);
  } catch (const InfeasiblePool& e) {
    throw BudgetExhausted(
        std::string("budget ended before the pool covered every "
                    "interaction: ") + e.what(),
        master.columns());
  }

  result.tests = std::move(ip.tests);
  result.ip_objective = result.tests.size();
  result.ip_nodes = ip.nodes;
  result.ip_proven = ip.proven_optimal;
  result.lower_bound = lower_bound(space, result.lp_bound, config.tolerance);
  result.optimal =
      result.lp_optimal &&
      result.ip_objective == ceil_with_tolerance(result.lp_bound,
                                                 config.tolerance);
  if (!verify_covering_array(space, result.tests).covers) {
    throw SolverFailure("finalized suite does not cover every interaction");
  }
  result.wall_time_seconds = elapsed();
  return result;
}

}  // namespace covergen
