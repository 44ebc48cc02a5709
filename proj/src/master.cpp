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

#include "covergen/master.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Dense>

#include "covergen/errors.hpp"
#include "covergen/kernels.hpp"

namespace covergen {
namespace {

constexpr double kPivotTolerance = 1e-9;
constexpr double kDegenerateStep = 1e-9;
constexpr double kSingularRcond = 1e-13;

}  // namespace

const char* to_string(ColumnOrigin origin) {
  switch (origin) {
    case ColumnOrigin::kArtificial:
      return "artificial";
    case ColumnOrigin::kWarmStart:
      return "warm_start";
    case ColumnOrigin::kGenerated:
      return "generated";
  }
  return "unknown";
}

Column Column::artificial(std::size_t num_interactions, std::size_t row,
                          double cost) {
  Column column;
  column.pattern.resize(num_interactions);
  column.pattern.set(row);
  column.cost = cost;
  column.origin = ColumnOrigin::kArtificial;
  return column;
}

Column Column::from_test(const InteractionSpace& space, TestConfig test,
                         ColumnOrigin origin) {
  Column column;
  column.pattern = space.coverage_pattern(test);
  column.cost = 1.0;
  column.origin = origin;
  column.test = std::move(test);
  return column;
}

// Reference basis at the last refactorization. Position i holds the unit
// variable of row i when one is basic; the remaining (free) rows host the
// multi-row columns, whose restriction to the free rows is the kernel.
struct MasterSolver::Factor {
  std::vector<double> unit_sign;  // 0 marks a free row
  std::vector<std::size_t> free_rows;
  std::vector<int> free_slot;     // row -> kernel index, -1 for unit rows
  std::vector<std::size_t> kernel_columns;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu;
};

MasterSolver::MasterSolver(std::size_t num_interactions, RowMask exempt,
                           MasterOptions options)
    : num_interactions_(num_interactions),
      exempt_(std::move(exempt)),
      options_(options) {
  if (exempt_.size() != num_interactions_) {
    throw InvalidArgument("exempt mask has " + std::to_string(exempt_.size()) +
                          " rows, expected " +
                          std::to_string(num_interactions_));
  }
  lp_row_of_.assign(num_interactions_, -1);
  for (std::size_t p = 0; p < num_interactions_; ++p) {
    if (exempt_.test(p)) continue;
    lp_row_of_[p] = static_cast<int>(interaction_of_.size());
    interaction_of_.push_back(p);
  }
  const std::size_t m = interaction_of_.size();
  singleton_available_.assign(m, false);
  surplus_position_.assign(m, -1);
}

std::size_t MasterSolver::add_column(Column column) {
  if (column.pattern.size() != num_interactions_) {
    throw InvalidArgument("column pattern has length " +
                          std::to_string(column.pattern.size()) +
                          ", expected " + std::to_string(num_interactions_));
  }
  if (!(column.cost >= 0.0) || !std::isfinite(column.cost)) {
    throw InvalidArgument("column cost must be finite and nonnegative");
  }
  std::size_t count = 0;
  int last = -1;
  for (auto p = column.pattern.find_first(); p != CoveragePattern::npos;
       p = column.pattern.find_next(p)) {
    if (lp_row_of_[p] < 0) continue;
    last = lp_row_of_[p];
    rows_.push_back(last);
    ++count;
  }
  starts_.push_back(rows_.size());
  costs_.push_back(column.cost);
  external_.push_back(static_cast<long>(columns_.size()));
  unit_row_.push_back(count == 1 ? last : -1);
  column_position_.push_back(-1);
  if (count == 1) singleton_available_[static_cast<std::size_t>(last)] = true;
  columns_.push_back(std::move(column));
  return columns_.size() - 1;
}

std::size_t MasterSolver::bland_key(const Var& v) const {
  return v.surplus ? costs_.size() + v.index : v.index;
}

int MasterSolver::unit_row(const Var& v) const {
  return v.surplus ? static_cast<int>(v.index) : unit_row_[v.index];
}

double MasterSolver::var_cost(const Var& v) const {
  return v.surplus ? 0.0 : costs_[v.index];
}

void MasterSolver::set_basic(const Var& v, long position) {
  if (v.surplus) {
    surplus_position_[v.index] = position;
  } else {
    column_position_[v.index] = position;
  }
}

void MasterSolver::ensure_row_coverage() {
  const std::size_t m = interaction_of_.size();
  std::vector<bool> covered(m, false);
  double max_cost = 0.0;
  for (std::size_t j = 0; j < costs_.size(); ++j) {
    if (external_[j] < 0) continue;
    max_cost = std::max(max_cost, costs_[j]);
    for (std::size_t e = starts_[j]; e < starts_[j + 1]; ++e) {
      covered[static_cast<std::size_t>(rows_[e])] = true;
    }
  }
  for (std::size_t i = 0; i < m; ++i) {
    if (!covered[i]) {
      throw InfeasiblePool("interaction " + std::to_string(interaction_of_[i]) +
                           " is not covered by any column in the pool");
    }
  }
  // A dual price never exceeds the cost of a column covering its row, so a
  // hidden unit column priced above every pool column is never used at an
  // optimum and leaves the duals unchanged.
  const double hidden_cost = max_cost + 1.0;
  for (std::size_t j = 0; j < costs_.size(); ++j) {
    if (external_[j] < 0) costs_[j] = hidden_cost;
  }
  for (std::size_t i = 0; i < m; ++i) {
    if (singleton_available_[i]) continue;
    rows_.push_back(static_cast<int>(i));
    starts_.push_back(rows_.size());
    costs_.push_back(hidden_cost);
    external_.push_back(-1);
    unit_row_.push_back(static_cast<int>(i));
    column_position_.push_back(-1);
    singleton_available_[i] = true;
  }
}

void MasterSolver::install_initial_basis() {
  const std::size_t m = interaction_of_.size();
  basis_.assign(m, Var{});
  std::vector<bool> placed(m, false);
  for (std::size_t j = 0; j < costs_.size(); ++j) {
    const int row = unit_row_[j];
    if (row < 0 || placed[static_cast<std::size_t>(row)]) continue;
    placed[static_cast<std::size_t>(row)] = true;
    basis_[static_cast<std::size_t>(row)] = Var{false, j};
    column_position_[j] = row;
  }
  has_basis_ = true;
  factor_.reset();
}

void MasterSolver::refactor() {
  const std::size_t m = interaction_of_.size();
  auto factor = std::make_shared<Factor>();
  factor->unit_sign.assign(m, 0.0);
  factor->free_slot.assign(m, -1);
  std::vector<Var> units(m);
  std::vector<std::size_t> general;
  for (const Var& v : basis_) {
    const int row = unit_row(v);
    if (row < 0) {
      general.push_back(v.index);
      continue;
    }
    const auto r = static_cast<std::size_t>(row);
    if (factor->unit_sign[r] != 0.0) {
      throw SolverFailure("master basis holds two unit columns on row " +
                          std::to_string(row));
    }
    factor->unit_sign[r] = v.surplus ? -1.0 : 1.0;
    units[r] = v;
  }
  std::sort(general.begin(), general.end());
  for (std::size_t i = 0; i < m; ++i) {
    if (factor->unit_sign[i] != 0.0) continue;
    factor->free_slot[i] = static_cast<int>(factor->free_rows.size());
    factor->free_rows.push_back(i);
  }
  if (general.size() != factor->free_rows.size()) {
    throw SolverFailure("master basis lost its shape: " +
                        std::to_string(general.size()) + " kernel columns for " +
                        std::to_string(factor->free_rows.size()) +
                        " kernel rows");
  }
  const auto r = static_cast<Eigen::Index>(general.size());
  if (r > 0) {
    Eigen::MatrixXd kernel = Eigen::MatrixXd::Zero(r, r);
    for (Eigen::Index c = 0; c < r; ++c) {
      const std::size_t j = general[static_cast<std::size_t>(c)];
      for (std::size_t e = starts_[j]; e < starts_[j + 1]; ++e) {
        const int slot = factor->free_slot[static_cast<std::size_t>(rows_[e])];
        if (slot >= 0) kernel(slot, c) = 1.0;
      }
    }
    factor->lu.compute(kernel);
    if (!(factor->lu.rcond() > kSingularRcond)) {
      throw SolverFailure("master basis is numerically singular (rcond " +
                          std::to_string(factor->lu.rcond()) + ")");
    }
  }
  factor->kernel_columns = std::move(general);

  // Positions now follow the factor layout.
  for (std::size_t i = 0; i < m; ++i) {
    if (factor->unit_sign[i] != 0.0) {
      basis_[i] = units[i];
    } else {
      basis_[i] = Var{false,
                      factor->kernel_columns[static_cast<std::size_t>(
                          factor->free_slot[i])]};
    }
    set_basic(basis_[i], static_cast<long>(i));
  }
  factor_ = std::move(factor);
  etas_.clear();
}

void MasterSolver::ftran(std::vector<double>& a) const {
  const Factor& f = *factor_;
  const auto r = static_cast<Eigen::Index>(f.kernel_columns.size());
  if (r > 0) {
    Eigen::VectorXd rhs(r);
    for (Eigen::Index c = 0; c < r; ++c) {
      rhs(c) = a[f.free_rows[static_cast<std::size_t>(c)]];
    }
    const Eigen::VectorXd y = f.lu.solve(rhs);
    for (Eigen::Index c = 0; c < r; ++c) {
      const std::size_t j = f.kernel_columns[static_cast<std::size_t>(c)];
      for (std::size_t e = starts_[j]; e < starts_[j + 1]; ++e) {
        const auto row = static_cast<std::size_t>(rows_[e]);
        if (f.unit_sign[row] != 0.0) a[row] -= y(c);
      }
    }
    for (Eigen::Index c = 0; c < r; ++c) {
      a[f.free_rows[static_cast<std::size_t>(c)]] = y(c);
    }
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (f.unit_sign[i] < 0.0) a[i] = -a[i];
  }
  for (const Eta& eta : etas_) {
    const double head = a[eta.position] / eta.pivot;
    a[eta.position] = head;
    if (head == 0.0) continue;
    for (const auto& [i, v] : eta.entries) a[i] -= v * head;
  }
}

void MasterSolver::btran(std::vector<double>& w) const {
  for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
    double value = w[it->position];
    for (const auto& [i, v] : it->entries) value -= w[i] * v;
    w[it->position] = value / it->pivot;
  }
  const Factor& f = *factor_;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (f.unit_sign[i] < 0.0) w[i] = -w[i];
  }
  const auto r = static_cast<Eigen::Index>(f.kernel_columns.size());
  if (r == 0) return;
  Eigen::VectorXd rhs(r);
  for (Eigen::Index c = 0; c < r; ++c) {
    const std::size_t j = f.kernel_columns[static_cast<std::size_t>(c)];
    double value = w[f.free_rows[static_cast<std::size_t>(c)]];
    for (std::size_t e = starts_[j]; e < starts_[j + 1]; ++e) {
      const auto row = static_cast<std::size_t>(rows_[e]);
      if (f.unit_sign[row] != 0.0) value -= w[row];
    }
    rhs(c) = value;
  }
  const Eigen::VectorXd pi = f.lu.transpose().solve(rhs);
  for (Eigen::Index c = 0; c < r; ++c) {
    w[f.free_rows[static_cast<std::size_t>(c)]] = pi(c);
  }
}

MasterSolution MasterSolver::solve() {
  ensure_row_coverage();
  if (!has_basis_) install_initial_basis();

  const std::size_t m = interaction_of_.size();
  const double tol = options_.tolerance;
  const std::size_t max_iterations =
      options_.max_iterations > 0
          ? options_.max_iterations
          : std::max<std::size_t>(20000, 50 * (m + costs_.size()));

  std::vector<double> x(m), y(m), pi(m);
  std::vector<double> reduced(costs_.size());
  std::size_t degenerate_streak = 0;
  bool sticky_bland = false;
  const std::size_t sticky_after = max_iterations / 5;
  std::size_t iterations = 0;
  bool fresh = false;
  bool optimal = true;

  const auto refresh_primal = [&] {
    std::fill(x.begin(), x.end(), 1.0);
    ftran(x);
  };

  while (true) {
    if (!factor_ || etas_.size() >= options_.refactor_interval) {
      refactor();
      fresh = false;
    }
    if (!fresh) {
      refresh_primal();
      fresh = true;
    }

    for (std::size_t i = 0; i < m; ++i) pi[i] = var_cost(basis_[i]);
    btran(pi);

    kernels::reduced_costs(kernels::SparseColumns{starts_, rows_}, costs_, pi,
                           reduced);
    // A solve that runs far past its usual pivot count keeps Bland's rule
    // for good, so noisy tiny steps cannot hand control back and cycle.
    sticky_bland = sticky_bland || iterations > sticky_after;
    const bool bland =
        sticky_bland || degenerate_streak >= options_.bland_after_degenerate;
    std::optional<Var> entering;
    double best = -tol;
    for (std::size_t j = 0; j < costs_.size(); ++j) {
      if (column_position_[j] >= 0 || reduced[j] >= -tol) continue;
      if (bland) {
        entering = Var{false, j};
        break;
      }
      if (reduced[j] < best) {
        best = reduced[j];
        entering = Var{false, j};
      }
    }
    if (!bland || !entering) {
      for (std::size_t i = 0; i < m; ++i) {
        // Surplus column -e_i has reduced cost 0 - (-pi_i).
        if (surplus_position_[i] >= 0 || pi[i] >= -tol) continue;
        if (bland) {
          entering = Var{true, i};
          break;
        }
        if (pi[i] < best) {
          best = pi[i];
          entering = Var{true, i};
        }
      }
    }
    if (entering && options_.deadline && (iterations & 15) == 0 &&
        std::chrono::steady_clock::now() >= *options_.deadline) {
      optimal = false;
      entering.reset();
    }

    if (!entering) {
      // Final values straight from a clean factorization.
      if (!etas_.empty()) {
        refactor();
        refresh_primal();
        for (std::size_t i = 0; i < m; ++i) pi[i] = var_cost(basis_[i]);
        btran(pi);
      }
      MasterSolution solution;
      solution.iterations = iterations;
      solution.optimal = optimal;
      solution.primal.assign(columns_.size(), 0.0);
      double objective = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        const Var& v = basis_[i];
        if (v.surplus) continue;
        const double value = std::max(x[i], 0.0);
        objective += costs_[v.index] * value;
        if (external_[v.index] >= 0) {
          solution.primal[static_cast<std::size_t>(external_[v.index])] = value;
        } else if (optimal && value > tol) {
          throw SolverFailure("hidden unit column " + std::to_string(v.index) +
                              " remains in the optimal master solution");
        }
      }
      solution.objective = objective;
      solution.duals.assign(num_interactions_, 0.0);
      for (std::size_t i = 0; i < m; ++i) {
        solution.duals[interaction_of_[i]] = pi[i];
      }
      return solution;
    }

    if (++iterations > max_iterations) {
      throw SolverFailure("master simplex exceeded " +
                          std::to_string(max_iterations) +
                          " iterations (rows " + std::to_string(m) +
                          ", columns " + std::to_string(costs_.size()) + ")");
    }

    std::fill(y.begin(), y.end(), 0.0);
    if (entering->surplus) {
      y[entering->index] = -1.0;
    } else {
      const std::size_t j = entering->index;
      for (std::size_t e = starts_[j]; e < starts_[j + 1]; ++e) {
        y[static_cast<std::size_t>(rows_[e])] = 1.0;
      }
    }
    ftran(y);

    // Ratio test.
    std::optional<std::size_t> leaving;
    double ratio = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      if (y[i] <= kPivotTolerance) continue;
      const double candidate = std::max(x[i], 0.0) / y[i];
      if (!leaving) {
        leaving = i;
        ratio = candidate;
        continue;
      }
      const double diff = candidate - ratio;
      bool better = diff < -1e-12;
      if (!better && diff <= 1e-12) {
        const std::size_t key = bland_key(basis_[i]);
        const std::size_t incumbent = bland_key(basis_[*leaving]);
        better = bland ? key < incumbent
                       : (y[i] > y[*leaving] + 1e-12 ||
                          (y[i] >= y[*leaving] - 1e-12 && key < incumbent));
      }
      if (better) {
        leaving = i;
        ratio = std::min(ratio, candidate);
      }
    }
    if (!leaving) {
      throw SolverFailure("master LP reported unbounded; costs must be "
                          "nonnegative");
    }
    const std::size_t p = *leaving;
    const double step = std::max(x[p], 0.0) / y[p];
    const double entering_cost =
        entering->surplus ? pi[entering->index] : reduced[entering->index];
    const double progress = -step * entering_cost;
    degenerate_streak = progress <= kDegenerateStep ? degenerate_streak + 1 : 0;

    for (std::size_t i = 0; i < m; ++i) {
      if (y[i] != 0.0) x[i] -= step * y[i];
    }
    x[p] = step;

    Eta eta;
    eta.position = p;
    eta.pivot = y[p];
    for (std::size_t i = 0; i < m; ++i) {
      if (i != p && std::abs(y[i]) > 1e-14) eta.entries.emplace_back(i, y[i]);
    }
    etas_.push_back(std::move(eta));

    set_basic(basis_[p], -1);
    basis_[p] = *entering;
    set_basic(*entering, static_cast<long>(p));
  }
}

MasterSolution master_solve(std::span<const Column> columns,
                            const RowMask& exempt, double tolerance) {
  MasterOptions options;
  options.tolerance = tolerance;
  MasterSolver solver(exempt.size(), exempt, options);
  for (const Column& column : columns) solver.add_column(column);
  return solver.solve();
}

double reduced_cost(const Column& column, std::span<const double> duals) {
  if (column.pattern.size() != duals.size()) {
    throw InvalidArgument("dual vector has length " +
                          std::to_string(duals.size()) + ", pattern has " +
                          std::to_string(column.pattern.size()));
  }
  double value = column.cost;
  for (auto p = column.pattern.find_first(); p != CoveragePattern::npos;
       p = column.pattern.find_next(p)) {
    value -= duals[p];
  }
  return value;
}

}  // namespace covergen
