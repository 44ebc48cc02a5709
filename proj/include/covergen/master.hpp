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

#ifndef COVERGEN_MASTER_HPP_
#define COVERGEN_MASTER_HPP_

#include <chrono>
#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "covergen/model.hpp"

namespace covergen {

enum class ColumnOrigin { kArtificial, kWarmStart, kGenerated };

const char* to_string(ColumnOrigin origin);

// One column of the set-covering master: the interactions a test covers.
struct Column {
  CoveragePattern pattern;
  double cost = 1.0;
  ColumnOrigin origin = ColumnOrigin::kGenerated;
  std::optional<TestConfig> test;  // absent for artificial columns

  // Identity column covering only `row`.
  static Column artificial(std::size_t num_interactions, std::size_t row,
                           double cost);
  static Column from_test(const InteractionSpace& space, TestConfig test,
                          ColumnOrigin origin);
};

struct MasterOptions {
  double tolerance = 1e-6;
  // Zero selects a cap proportional to the problem size.
  std::size_t max_iterations = 0;
  // Consecutive degenerate pivots before Bland's rule takes over.
  std::size_t bland_after_degenerate = 50;
  // Basis updates kept in product form before refactorization.
  std::size_t refactor_interval = 64;
  // On expiry solve() returns the current basic solution with optimal unset.
  std::optional<std::chrono::steady_clock::time_point> deadline;
};

struct MasterSolution {
  // Indexed like the column pool.
  std::vector<double> primal;
  double objective = 0.0;
  // One price per interaction; exempt rows carry 0.
  std::vector<double> duals;
  std::size_t iterations = 0;
  // False only when the deadline interrupted the simplex; the primal is then
  // feasible but the duals carry no optimality guarantee.
  bool optimal = true;
};

// Restricted master LP
//
//   min sum_j c_j x_j   s.t.  sum_j a_pj x_j >= 1  (non-exempt p),  x >= 0
//
// solved by a primal revised simplex. At refactorization, basic variables
// that are unit vectors (singleton columns and surplus slacks) are handled
// implicitly and only the kernel of multi-row basic columns is LU-factorized;
// later pivots are kept as eta vectors. The basis survives add_column, so
// repeated solves warm-start from the previous optimum.
class MasterSolver {
 public:
  MasterSolver(std::size_t num_interactions, RowMask exempt,
               MasterOptions options = {});

  // Returns the pool index of the new column.
  std::size_t add_column(Column column);
  const std::vector<Column>& columns() const { return columns_; }

  // Throws InfeasiblePool when a non-exempt row has no column, SolverFailure
  // on iteration-cap exhaustion or a numerically singular basis.
  MasterSolution solve();

 private:
  struct Var {
    bool surplus = false;
    std::size_t index = 0;  // internal column, or LP row for a surplus
  };

  struct Eta {
    std::size_t position;
    double pivot;
    std::vector<std::pair<std::size_t, double>> entries;  // off-pivot
  };
  struct Factor;

  std::size_t bland_key(const Var& v) const;
  int unit_row(const Var& v) const;
  double var_cost(const Var& v) const;
  void ensure_row_coverage();
  void install_initial_basis();
  void refactor();
  // B y = a for a dense LP-row vector; y indexed by basis position.
  void ftran(std::vector<double>& a) const;
  // pi^T B = w^T; w indexed by basis position, pi by LP row.
  void btran(std::vector<double>& w) const;
  void set_basic(const Var& v, long position);

  std::size_t num_interactions_;
  RowMask exempt_;
  MasterOptions options_;
  std::vector<Column> columns_;

  // LP rows are the non-exempt interactions.
  std::vector<int> lp_row_of_;
  std::vector<std::size_t> interaction_of_;

  // Internal columns: every pool column plus hidden unit columns for rows no
  // singleton pool column covers.
  std::vector<std::size_t> starts_{0};
  std::vector<int> rows_;
  std::vector<double> costs_;
  std::vector<long> external_;  // pool index, or -1 for hidden columns
  std::vector<int> unit_row_;   // LP row of a singleton column, else -1
  std::vector<bool> singleton_available_;

  // Basis: one variable per position, with reverse lookups.
  bool has_basis_ = false;
  std::vector<Var> basis_;
  std::vector<long> column_position_;
  std::vector<long> surplus_position_;

  // Factorized reference basis plus the etas applied since.
  std::shared_ptr<Factor> factor_;
  std::vector<Eta> etas_;
};

MasterSolution master_solve(std::span<const Column> columns,
                            const RowMask& exempt, double tolerance = 1e-6);

// c_t minus the dual-weighted coverage of the column.
double reduced_cost(const Column& column, std::span<const double> duals);

}  // namespace covergen

#endif  // COVERGEN_MASTER_HPP_
