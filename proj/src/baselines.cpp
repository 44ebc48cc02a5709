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

#include "covergen/baselines.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <string>

#include "covergen/errors.hpp"

namespace covergen {
namespace {

bool violates(const PartialAssignment& pattern, std::span<const int> partial) {
  return std::all_of(pattern.begin(), pattern.end(), [&](const Literal& l) {
    return partial[static_cast<std::size_t>(l.parameter)] == l.value;
  });
}

// True if the unassigned (-1) parameters can be filled without completing a
// forbidden pattern.
bool completable(const InteractionSpace& space, std::vector<int>& partial,
                 int from = 0) {
  const auto& forbidden = space.instance().forbidden;
  if (forbidden.empty()) return true;
  int param = from;
  while (param < space.num_parameters() &&
         partial[static_cast<std::size_t>(param)] >= 0) {
    ++param;
  }
  if (param == space.num_parameters()) {
    return !space.is_forbidden_test(partial);
  }
  for (int w = 0; w < space.domain(param); ++w) {
    partial[static_cast<std::size_t>(param)] = w;
    bool ok = std::none_of(forbidden.begin(), forbidden.end(),
                           [&](const PartialAssignment& pattern) {
                             return violates(pattern, partial);
                           });
    if (ok && completable(space, partial, param + 1)) {
      partial[static_cast<std::size_t>(param)] = -1;
      return true;
    }
  }
  partial[static_cast<std::size_t>(param)] = -1;
  return false;
}

}  // namespace

std::size_t combination_lower_bound(const InteractionSpace& space) {
  std::size_t best = 0;
  for (std::size_t c = 0; c < space.num_combinations(); ++c) {
    std::size_t required = 0;
    for (std::size_t p = space.offset(c); p < space.offset(c + 1); ++p) {
      if (!space.is_exempt(p)) ++required;
    }
    best = std::max(best, required);
  }
  return best;
}

GreedyResult greedy_construct(const InteractionSpace& space,
                              std::uint64_t seed) {
  const int k = space.num_parameters();
  const std::size_t t = static_cast<std::size_t>(space.strength());
  std::mt19937_64 rng(seed);

  // Combinations each parameter belongs to.
  std::vector<std::vector<std::size_t>> combinations_of(
      static_cast<std::size_t>(k));
  for (std::size_t c = 0; c < space.num_combinations(); ++c) {
    for (int param : space.combination(c)) {
      combinations_of[static_cast<std::size_t>(param)].push_back(c);
    }
  }

  RowMask uncovered = ~space.exempt();
  std::size_t remaining = uncovered.count();
  GreedyResult result;
  std::vector<int> partial(static_cast<std::size_t>(k));
  std::vector<int> params(static_cast<std::size_t>(k));

  while (remaining > 0) {
    const std::size_t target = uncovered.find_first();
    const Interaction anchor = space.interaction_at(target);
    std::fill(partial.begin(), partial.end(), -1);
    for (std::size_t j = 0; j < t; ++j) {
      partial[static_cast<std::size_t>(anchor.combination[j])] =
          anchor.values[j];
    }
    if (!completable(space, partial)) {
      throw InfeasibleInstance(
          "interaction " + std::to_string(target) +
          " cannot appear in any test that avoids the forbidden set");
    }

    params.clear();
    for (int i = 0; i < k; ++i) {
      if (partial[static_cast<std::size_t>(i)] < 0) params.push_back(i);
    }
    std::shuffle(params.begin(), params.end(), rng);

    for (int param : params) {
      int best_value = -1;
      std::size_t best_gain = 0;
      for (int w = 0; w < space.domain(param); ++w) {
        partial[static_cast<std::size_t>(param)] = w;
        if (!completable(space, partial)) continue;
        std::size_t gain = 0;
        for (std::size_t c : combinations_of[static_cast<std::size_t>(param)]) {
          const auto members = space.combination(c);
          Interaction probe;
          bool assigned = true;
          for (int q : members) {
            if (partial[static_cast<std::size_t>(q)] < 0) {
              assigned = false;
              break;
            }
          }
          if (!assigned) continue;
          probe.combination.assign(members.begin(), members.end());
          for (int q : members) {
            probe.values.push_back(partial[static_cast<std::size_t>(q)]);
          }
          if (uncovered.test(space.index_of(probe))) ++gain;
        }
        if (best_value < 0 || gain > best_gain) {
          best_value = w;
          best_gain = gain;
        }
      }
      // The completability check on the anchor guarantees some value works.
      partial[static_cast<std::size_t>(param)] = best_value;
    }

    std::size_t fresh = 0;
    space.for_each_covered(partial, [&](std::size_t p) {
      if (uncovered.test(p)) {
        uncovered.reset(p);
        ++fresh;
      }
    });
    remaining -= fresh;
    result.tests.push_back(TestConfig{partial});
    result.per_test_new_coverage.push_back(fresh);
  }
  return result;
}

namespace {

class CanSearch {
 public:
  CanSearch(const InteractionSpace& space, std::uint64_t max_tests)
      : space_(space) {
    if (space.num_tests() > max_tests) {
      throw SizeLimitExceeded("exact oracle limited to " +
                              std::to_string(max_tests) + " tests, instance has " +
                              std::to_string(space.num_tests()));
    }
    for (std::uint64_t rank = 0; rank < space.num_tests(); ++rank) {
      TestConfig test = space.test_at(rank);
      if (space.is_forbidden_test(test)) continue;
      std::vector<std::size_t> rows;
      space.for_each_covered(test.assignment, [&](std::size_t p) {
        if (!space.is_exempt(p)) rows.push_back(p);
      });
      candidates_.push_back(std::move(test));
      rows_.push_back(std::move(rows));
    }
    cover_count_.assign(space.size(), 0);
    uncovered_in_.assign(space.num_combinations(), 0);
    last_cover_.assign(space.size(), -1);
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      for (std::size_t p : rows_[i]) last_cover_[p] = static_cast<long>(i);
    }
    for (std::size_t c = 0; c < space.num_combinations(); ++c) {
      for (std::size_t p = space.offset(c); p < space.offset(c + 1); ++p) {
        if (!space.is_exempt(p)) ++uncovered_in_[c];
      }
    }
  }

  bool uncoverable() const {
    for (std::size_t p = 0; p < space_.size(); ++p) {
      if (!space_.is_exempt(p) && last_cover_[p] < 0) return true;
    }
    return false;
  }

  bool run(std::size_t size) {
    chosen_.clear();
    return search(0, size);
  }

  std::vector<TestConfig> witness() const {
    std::vector<TestConfig> tests;
    for (std::size_t i : chosen_) tests.push_back(candidates_[i]);
    return tests;
  }

  std::uint64_t nodes() const { return nodes_; }

 private:
  void apply(std::size_t i, int delta) {
    for (std::size_t p : rows_[i]) {
      const int before = cover_count_[p];
      cover_count_[p] += delta;
      if (before == 0 && delta > 0) --uncovered_in_[space_.combination_of(p)];
      if (cover_count_[p] == 0 && delta < 0) {
        ++uncovered_in_[space_.combination_of(p)];
      }
    }
  }

  bool search(std::size_t next, std::size_t budget) {
    ++nodes_;
    // Every test covers one tuple per combination.
    std::size_t worst = 0;
    for (std::size_t u : uncovered_in_) worst = std::max(worst, u);
    if (worst == 0) return true;
    if (worst > budget) return false;
    // The first uncovered row still needs a later test.
    std::size_t first = 0;
    while (space_.is_exempt(first) || cover_count_[first] > 0) ++first;
    if (last_cover_[first] < static_cast<long>(next)) return false;
    for (std::size_t i = next; i < candidates_.size(); ++i) {
      if (static_cast<long>(i) > last_cover_[first]) break;
      chosen_.push_back(i);
      apply(i, +1);
      if (search(i + 1, budget - 1)) return true;
      apply(i, -1);
      chosen_.pop_back();
    }
    return false;
  }

  const InteractionSpace& space_;
  std::vector<TestConfig> candidates_;
  std::vector<std::vector<std::size_t>> rows_;
  std::vector<int> cover_count_;
  std::vector<std::size_t> uncovered_in_;
  std::vector<long> last_cover_;
  std::vector<std::size_t> chosen_;
  std::uint64_t nodes_ = 0;
};

}  // namespace

OracleResult exact_can_oracle(const InteractionSpace& space, std::size_t cap,
                              std::uint64_t max_tests) {
  CanSearch search(space, max_tests);
  if (search.uncoverable()) {
    throw InfeasibleInstance("some required interaction appears in no test "
                             "that avoids the forbidden set");
  }
  OracleResult result;
  result.lower_bound = combination_lower_bound(space);
  for (std::size_t size = result.lower_bound; size <= cap; ++size) {
    if (search.run(size)) {
      result.can = size;
      result.lower_bound = size;
      result.witness = search.witness();
      break;
    }
    result.lower_bound = size + 1;
  }
  result.nodes = search.nodes();
  return result;
}

}  // namespace covergen
