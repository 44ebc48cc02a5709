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

#include "covergen/pricing.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "covergen/errors.hpp"
#include "covergen/kernels.hpp"

namespace covergen {
namespace {

void check_duals(const InteractionSpace& space, std::span<const double> duals) {
  if (duals.size() != space.size()) {
    throw InvalidArgument("dual vector has length " +
                          std::to_string(duals.size()) + ", expected " +
                          std::to_string(space.size()));
  }
}

PricingResult make_result(const InteractionSpace& space, TestConfig test,
                          std::span<const double> duals, double epsilon) {
  PricingResult result;
  result.objective = dual_weight(space, test, duals);
  result.reduced_cost = 1.0 - result.objective;
  result.improving = result.objective > 1.0 + epsilon;
  result.test = std::move(test);
  return result;
}

}  // namespace

double dual_weight(const InteractionSpace& space, const TestConfig& test,
                   std::span<const double> duals) {
  double value = 0.0;
  space.for_each_covered(test.assignment,
                         [&](std::size_t p) { value += duals[p]; });
  return value;
}

Pricer::Pricer(const InteractionSpace& space, TieBreak tie_break)
    : space_(space),
      tie_break_(tie_break),
      strength_(static_cast<std::size_t>(space.strength())) {
  const int k = space.num_parameters();
  order_.resize(static_cast<std::size_t>(k));
  std::iota(order_.begin(), order_.end(), 0);
  if (tie_break_ == TieBreak::kValueOrder) {
    std::stable_sort(order_.begin(), order_.end(), [&](int a, int b) {
      return space.domain(a) > space.domain(b);
    });
  }
  std::vector<std::size_t> depth_of(static_cast<std::size_t>(k));
  for (std::size_t d = 0; d < order_.size(); ++d) {
    depth_of[static_cast<std::size_t>(order_[d])] = d;
  }

  const std::size_t num_combinations = space.num_combinations();
  members_.assign(static_cast<std::size_t>(k), {});
  canonical_.resize(num_combinations);
  depth_params_.resize(num_combinations);
  table_offsets_.resize(num_combinations * (strength_ + 1));
  std::size_t table_size = 0;
  for (std::size_t c = 0; c < num_combinations; ++c) {
    const auto params = space.combination(c);
    // Positions of the combination's parameters sorted by depth.
    std::vector<std::size_t> positions(strength_);
    std::iota(positions.begin(), positions.end(), std::size_t{0});
    std::sort(positions.begin(), positions.end(),
              [&](std::size_t a, std::size_t b) {
                return depth_of[static_cast<std::size_t>(params[a])] <
                       depth_of[static_cast<std::size_t>(params[b])];
              });
    auto& dparams = depth_params_[c];
    for (std::size_t l = 0; l < strength_; ++l) {
      dparams.push_back(params[positions[l]]);
      members_[static_cast<std::size_t>(params[positions[l]])].push_back({c, l});
    }
    std::size_t level_size = 1;
    for (std::size_t l = 0; l <= strength_; ++l) {
      table_offsets_[c * (strength_ + 1) + l] = table_size;
      table_size += level_size;
      if (l < strength_) {
        level_size *= static_cast<std::size_t>(space.domain(dparams[l]));
      }
    }
    // Map every depth-ordered tuple to its canonical index.
    auto& canonical = canonical_[c];
    canonical.resize(space.combination_size(c));
    std::vector<int> values(strength_, 0);
    Interaction interaction;
    interaction.combination.assign(params.begin(), params.end());
    interaction.values.resize(strength_);
    for (std::size_t rank = 0; rank < canonical.size(); ++rank) {
      for (std::size_t l = 0; l < strength_; ++l) {
        interaction.values[positions[l]] = values[l];
      }
      canonical[rank] = space.index_of(interaction);
      for (std::size_t l = strength_; l-- > 0;) {
        if (++values[l] < space.domain(dparams[l])) break;
        values[l] = 0;
      }
    }
  }
  tables_.resize(table_size);

  forbidden_at_depth_.assign(static_cast<std::size_t>(k), {});
  const auto& forbidden = space.instance().forbidden;
  for (std::size_t f = 0; f < forbidden.size(); ++f) {
    std::size_t deepest = 0;
    for (const Literal& l : forbidden[f]) {
      deepest = std::max(deepest, depth_of[static_cast<std::size_t>(l.parameter)]);
    }
    forbidden_at_depth_[deepest].push_back(f);
  }

  assignment_.assign(static_cast<std::size_t>(k), -1);
  prefix_.assign(num_combinations, 0);
  child_bounds_.resize(static_cast<std::size_t>(k));
  value_order_.resize(static_cast<std::size_t>(k));
  for (std::size_t d = 0; d < order_.size(); ++d) {
    const auto v = static_cast<std::size_t>(space.domain(order_[d]));
    child_bounds_[d].resize(v);
    value_order_[d].resize(v);
  }
}

void Pricer::fill_tables(std::span<const double> duals) {
  for (std::size_t c = 0; c < canonical_.size(); ++c) {
    const std::size_t base = c * (strength_ + 1);
    double* full = &tables_[table_offsets_[base + strength_]];
    for (std::size_t rank = 0; rank < canonical_[c].size(); ++rank) {
      full[rank] = duals[canonical_[c][rank]];
    }
    for (std::size_t l = strength_; l-- > 0;) {
      const auto radix =
          static_cast<std::size_t>(space_.domain(depth_params_[c][l]));
      const double* below = &tables_[table_offsets_[base + l + 1]];
      double* here = &tables_[table_offsets_[base + l]];
      const std::size_t count =
          (table_offsets_[base + l + 1] - table_offsets_[base + l]);
      for (std::size_t e = 0; e < count; ++e) {
        double best = below[e * radix];
        for (std::size_t w = 1; w < radix; ++w) {
          best = std::max(best, below[e * radix + w]);
        }
        here[e] = best;
      }
    }
  }
}

void Pricer::search(std::size_t depth, double bound) {
  ++nodes_;
  if (options_.node_limit > 0 && nodes_ >= options_.node_limit) {
    aborted_ = true;
  }
  if (options_.deadline && (nodes_ & 1023) == 0 &&
      std::chrono::steady_clock::now() >= *options_.deadline) {
    aborted_ = true;
  }
  const double slack = 1e-12 * std::max(1.0, std::abs(best_));
  if (depth == order_.size()) {
    if (!found_ || bound > best_ + slack) {
      found_ = true;
      best_ = bound;
      incumbent_ = assignment_;
    }
    return;
  }
  if (aborted_ && found_) return;

  const int param = order_[depth];
  const auto radix = static_cast<std::size_t>(space_.domain(param));
  const auto& members = members_[static_cast<std::size_t>(param)];
  auto& bounds = child_bounds_[depth];
  auto& values = value_order_[depth];
  const auto& forbidden = space_.instance().forbidden;

  std::size_t count = 0;
  for (std::size_t w = 0; w < radix; ++w) {
    assignment_[static_cast<std::size_t>(param)] = static_cast<int>(w);
    bool allowed = true;
    for (std::size_t f : forbidden_at_depth_[depth]) {
      if (std::all_of(forbidden[f].begin(), forbidden[f].end(),
                      [&](const Literal& l) {
                        return assignment_[static_cast<std::size_t>(
                                   l.parameter)] == l.value;
                      })) {
        allowed = false;
        break;
      }
    }
    if (!allowed) continue;
    double child = bound;
    for (const Member& m : members) {
      const std::size_t prefix = prefix_[m.combination];
      child += entry(m.combination, m.level + 1, prefix * radix + w) -
               entry(m.combination, m.level, prefix);
    }
    bounds[w] = child;
    values[count++] = static_cast<int>(w);
  }
  assignment_[static_cast<std::size_t>(param)] = -1;

  if (tie_break_ == TieBreak::kValueOrder) {
    std::stable_sort(values.begin(),
                     values.begin() + static_cast<std::ptrdiff_t>(count),
                     [&](int a, int b) { return bounds[a] > bounds[b]; });
  }

  for (std::size_t i = 0; i < count; ++i) {
    const int w = values[i];
    const double child = bounds[static_cast<std::size_t>(w)];
    if (found_ &&
        (aborted_ || child <= best_ + 1e-12 * std::max(1.0, std::abs(best_)))) {
      if (tie_break_ == TieBreak::kValueOrder || aborted_) break;
      continue;
    }
    assignment_[static_cast<std::size_t>(param)] = w;
    for (const Member& m : members) {
      prefix_[m.combination] =
          prefix_[m.combination] * radix + static_cast<std::size_t>(w);
    }
    search(depth + 1, child);
    for (const Member& m : members) prefix_[m.combination] /= radix;
    assignment_[static_cast<std::size_t>(param)] = -1;
  }
}

PricingResult Pricer::price(std::span<const double> duals,
                            const PricingOptions& options) {
  check_duals(space_, duals);
  fill_tables(duals);
  options_ = options;
  found_ = false;
  best_ = 0.0;
  nodes_ = 0;
  aborted_ = false;
  std::fill(prefix_.begin(), prefix_.end(), 0);
  std::fill(assignment_.begin(), assignment_.end(), -1);

  double root = 0.0;
  for (std::size_t c = 0; c < canonical_.size(); ++c) root += entry(c, 0, 0);
  search(0, root);

  if (!found_) {
    if (aborted_) {
      throw SolverFailure("pricing stopped before finding any test that "
                          "avoids the forbidden set");
    }
    throw InfeasibleInstance("no test avoids every forbidden pattern");
  }
  PricingResult result =
      make_result(space_, TestConfig{incumbent_}, duals, options.epsilon);
  result.nodes_explored = nodes_;
  result.complete = !aborted_;
  return result;
}

PricingResult price(const InteractionSpace& space,
                    std::span<const double> duals, double epsilon) {
  Pricer pricer(space);
  PricingOptions options;
  options.epsilon = epsilon;
  return pricer.price(duals, options);
}

PricingResult price_exhaustive(const InteractionSpace& space,
                               std::span<const double> duals,
                               std::uint64_t cap) {
  check_duals(space, duals);
  if (space.num_tests() > cap) {
    throw SizeLimitExceeded("exhaustive pricing over " +
                            std::to_string(space.num_tests()) +
                            " tests exceeds the cap of " + std::to_string(cap));
  }
  const kernels::BestTest best = kernels::best_test(space, duals);
  if (!best.found) {
    throw InfeasibleInstance("no test avoids every forbidden pattern");
  }
  PricingResult result = make_result(space, space.test_at(best.rank), duals, 1e-6);
  result.nodes_explored = best.evaluated;
  return result;
}

}  // namespace covergen
