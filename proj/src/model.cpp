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

#include "covergen/model.hpp"

#include <algorithm>
#include <limits>
#include <set>
#include <sstream>

#include "covergen/errors.hpp"
#include "covergen/kernels.hpp"

namespace covergen {
namespace {

// Interaction universes beyond this would not fit a bit vector comfortably.
constexpr std::size_t kMaxInteractions = std::size_t{1} << 30;

std::size_t checked_mul(std::size_t a, std::size_t b) {
  if (a != 0 && b > kMaxInteractions / a) {
    throw InvalidInstance("interaction universe exceeds " +
                          std::to_string(kMaxInteractions) + " interactions");
  }
  return a * b;
}

bool matches(const PartialAssignment& pattern, std::span<const int> assignment) {
  return std::all_of(pattern.begin(), pattern.end(), [&](const Literal& l) {
    return assignment[l.parameter] == l.value;
  });
}

}  // namespace

void CAInstance::validate() const {
  const int k = num_parameters();
  if (k == 0) throw InvalidInstance("instance has no parameters");
  if (strength < 1 || strength > k) {
    throw InvalidInstance("strength " + std::to_string(strength) +
                          " outside [1, " + std::to_string(k) + "]");
  }
  for (int i = 0; i < k; ++i) {
    if (domains[i] < 1) {
      throw InvalidInstance("parameter " + std::to_string(i) +
                            " has domain size " + std::to_string(domains[i]));
    }
  }
  if (!parameter_names.empty() &&
      parameter_names.size() != static_cast<std::size_t>(k)) {
    throw InvalidInstance("parameter_names must have one entry per parameter");
  }
  if (!value_names.empty()) {
    if (value_names.size() != static_cast<std::size_t>(k)) {
      throw InvalidInstance("value_names must have one entry per parameter");
    }
    for (int i = 0; i < k; ++i) {
      if (value_names[i].size() != static_cast<std::size_t>(domains[i])) {
        throw InvalidInstance("value_names for parameter " +
                              std::to_string(i) + " must have " +
                              std::to_string(domains[i]) + " entries");
      }
    }
  }
  for (std::size_t f = 0; f < forbidden.size(); ++f) {
    const auto& pattern = forbidden[f];
    if (pattern.empty()) {
      throw InvalidInstance("forbidden pattern " + std::to_string(f) +
                            " is empty");
    }
    std::set<int> seen;
    for (const Literal& l : pattern) {
      if (l.parameter < 0 || l.parameter >= k) {
        throw InvalidInstance("forbidden pattern " + std::to_string(f) +
                              " references parameter " +
                              std::to_string(l.parameter));
      }
      if (l.value < 0 || l.value >= domains[l.parameter]) {
        throw InvalidInstance("forbidden pattern " + std::to_string(f) +
                              " references value " + std::to_string(l.value) +
                              " of parameter " + std::to_string(l.parameter));
      }
      if (!seen.insert(l.parameter).second) {
        throw InvalidInstance("forbidden pattern " + std::to_string(f) +
                              " repeats parameter " +
                              std::to_string(l.parameter));
      }
    }
  }
}

std::string CAInstance::parameter_name(int parameter) const {
  if (!parameter_names.empty()) return parameter_names[parameter];
  return "p" + std::to_string(parameter);
}

std::string CAInstance::value_name(int parameter, int value) const {
  if (!value_names.empty()) return value_names[parameter][value];
  return std::to_string(value);
}

CAInstance CAInstance::uniform(int strength, int num_parameters, int alphabet) {
  CAInstance instance;
  instance.strength = strength;
  instance.domains.assign(static_cast<std::size_t>(std::max(num_parameters, 0)),
                          alphabet);
  instance.validate();
  return instance;
}

std::vector<Combination> enumerate_combinations(int num_parameters,
                                                int strength) {
  if (strength < 1 || strength > num_parameters) {
    throw InvalidInstance("cannot choose " + std::to_string(strength) +
                          " of " + std::to_string(num_parameters) +
                          " parameters");
  }
  std::vector<Combination> result;
  Combination current(static_cast<std::size_t>(strength));
  for (int j = 0; j < strength; ++j) current[j] = j;
  while (true) {
    result.push_back(current);
    int j = strength - 1;
    while (j >= 0 && current[j] == num_parameters - strength + j) --j;
    if (j < 0) break;
    ++current[j];
    for (int i = j + 1; i < strength; ++i) current[i] = current[i - 1] + 1;
  }
  return result;
}

InteractionCounts count_interactions(const CAInstance& instance) {
  instance.validate();
  InteractionCounts counts;
  for (const auto& combination :
       enumerate_combinations(instance.num_parameters(), instance.strength)) {
    std::size_t size = 1;
    for (int p : combination) {
      size = checked_mul(size, static_cast<std::size_t>(instance.domains[p]));
    }
    counts.per_combination.push_back(size);
    counts.total += size;
    if (counts.total > kMaxInteractions) {
      throw InvalidInstance("interaction universe exceeds " +
                            std::to_string(kMaxInteractions) + " interactions");
    }
  }
  return counts;
}

InteractionSpace::InteractionSpace(CAInstance instance)
    : instance_(std::move(instance)) {
  const InteractionCounts counts = count_interactions(instance_);
  const auto combinations =
      enumerate_combinations(instance_.num_parameters(), instance_.strength);
  const std::size_t t = static_cast<std::size_t>(instance_.strength);

  offsets_.reserve(combinations.size() + 1);
  offsets_.push_back(0);
  combination_params_.reserve(combinations.size() * t);
  strides_.reserve(combinations.size() * t);
  for (std::size_t c = 0; c < combinations.size(); ++c) {
    std::vector<std::size_t> strides(t);
    std::size_t stride = 1;
    for (std::size_t j = t; j-- > 0;) {
      strides[j] = stride;
      stride *= static_cast<std::size_t>(instance_.domains[combinations[c][j]]);
    }
    combination_params_.insert(combination_params_.end(),
                               combinations[c].begin(), combinations[c].end());
    strides_.insert(strides_.end(), strides.begin(), strides.end());
    offsets_.push_back(offsets_.back() + counts.per_combination[c]);
  }

  num_tests_ = 1;
  for (int v : instance_.domains) {
    const auto factor = static_cast<std::uint64_t>(v);
    if (num_tests_ > std::numeric_limits<std::uint64_t>::max() / factor) {
      num_tests_ = std::numeric_limits<std::uint64_t>::max();
      break;
    }
    num_tests_ *= factor;
  }

  exempt_.resize(size());
  if (instance_.forbidden.empty()) return;
  std::vector<int> assignment(static_cast<std::size_t>(num_parameters()), -1);
  for (std::size_t p = 0; p < size(); ++p) {
    const Interaction interaction = interaction_at(p);
    for (std::size_t j = 0; j < t; ++j) {
      assignment[interaction.combination[j]] = interaction.values[j];
    }
    for (const auto& pattern : instance_.forbidden) {
      if (matches(pattern, assignment)) {
        exempt_.set(p);
        break;
      }
    }
    for (int param : interaction.combination) assignment[param] = -1;
  }
}

std::span<const int> InteractionSpace::combination(std::size_t c) const {
  const std::size_t t = static_cast<std::size_t>(strength());
  return {combination_params_.data() + c * t, t};
}

std::size_t InteractionSpace::combination_of(std::size_t index) const {
  if (index >= size()) {
    throw InvalidArgument("interaction index " + std::to_string(index) +
                          " outside [0, " + std::to_string(size()) + ")");
  }
  const auto it = std::upper_bound(offsets_.begin(), offsets_.end(), index);
  return static_cast<std::size_t>(it - offsets_.begin()) - 1;
}

std::size_t InteractionSpace::index_of(const Interaction& interaction) const {
  const std::size_t t = static_cast<std::size_t>(strength());
  const auto& params = interaction.combination;
  if (params.size() != t || interaction.values.size() != t) {
    throw InvalidArgument("interaction must name exactly " +
                          std::to_string(t) + " parameters");
  }
  for (std::size_t j = 0; j < t; ++j) {
    if (params[j] < 0 || params[j] >= num_parameters() ||
        (j > 0 && params[j] <= params[j - 1])) {
      throw InvalidArgument("interaction parameters must be strictly "
                            "increasing parameter indices");
    }
    if (interaction.values[j] < 0 ||
        interaction.values[j] >= domain(params[j])) {
      throw InvalidArgument("interaction value out of domain for parameter " +
                            std::to_string(params[j]));
    }
  }
  // Rank of the combination among all t-subsets in lexicographic order.
  const auto binom = [](int n, int r) -> std::size_t {
    if (r < 0 || r > n) return 0;
    std::size_t result = 1;
    for (int i = 1; i <= r; ++i) {
      result = result * static_cast<std::size_t>(n - r + i) /
               static_cast<std::size_t>(i);
    }
    return result;
  };
  const int k = num_parameters();
  std::size_t rank = 0;
  int previous = -1;
  for (std::size_t j = 0; j < t; ++j) {
    for (int skipped = previous + 1; skipped < params[j]; ++skipped) {
      rank += binom(k - skipped - 1, static_cast<int>(t - j - 1));
    }
    previous = params[j];
  }
  std::size_t index = offsets_[rank];
  const std::size_t* strides = &strides_[rank * t];
  for (std::size_t j = 0; j < t; ++j) {
    index += static_cast<std::size_t>(interaction.values[j]) * strides[j];
  }
  return index;
}

Interaction InteractionSpace::interaction_at(std::size_t index) const {
  const std::size_t c = combination_of(index);
  const std::size_t t = static_cast<std::size_t>(strength());
  Interaction interaction;
  const auto params = combination(c);
  interaction.combination.assign(params.begin(), params.end());
  interaction.values.resize(t);
  std::size_t rank = index - offsets_[c];
  for (std::size_t j = 0; j < t; ++j) {
    interaction.values[j] = static_cast<int>(rank / strides_[c * t + j]);
    rank %= strides_[c * t + j];
  }
  return interaction;
}

void InteractionSpace::check_test(const TestConfig& test) const {
  if (test.assignment.size() != static_cast<std::size_t>(num_parameters())) {
    throw InvalidArgument("test has " +
                          std::to_string(test.assignment.size()) +
                          " values, expected " +
                          std::to_string(num_parameters()));
  }
  for (int i = 0; i < num_parameters(); ++i) {
    if (test.assignment[i] < 0 || test.assignment[i] >= domain(i)) {
      throw InvalidArgument("test " + to_string(test) + " assigns value " +
                            std::to_string(test.assignment[i]) +
                            " outside the domain of parameter " +
                            std::to_string(i));
    }
  }
}

std::optional<std::size_t> InteractionSpace::violated_forbidden(
    std::span<const int> assignment) const {
  for (std::size_t f = 0; f < instance_.forbidden.size(); ++f) {
    if (matches(instance_.forbidden[f], assignment)) return f;
  }
  return std::nullopt;
}

CoveragePattern InteractionSpace::coverage_pattern(
    const TestConfig& test) const {
  check_test(test);
  CoveragePattern pattern(size());
  for_each_covered(test.assignment, [&](std::size_t p) { pattern.set(p); });
  return pattern;
}

TestConfig InteractionSpace::test_at(std::uint64_t rank) const {
  TestConfig test;
  test.assignment.resize(static_cast<std::size_t>(num_parameters()));
  for (int i = num_parameters(); i-- > 0;) {
    const auto v = static_cast<std::uint64_t>(domain(i));
    test.assignment[i] = static_cast<int>(rank % v);
    rank /= v;
  }
  return test;
}

std::size_t interaction_index(const InteractionSpace& space,
                              const Interaction& interaction) {
  return space.index_of(interaction);
}

Interaction interaction_from_index(const InteractionSpace& space,
                                   std::size_t index) {
  return space.interaction_at(index);
}

CoveragePattern coverage_pattern(const InteractionSpace& space,
                                 const TestConfig& test) {
  return space.coverage_pattern(test);
}

CoverageVerdict verify_covering_array(const InteractionSpace& space,
                                      std::span<const TestConfig> tests) {
  for (std::size_t i = 0; i < tests.size(); ++i) {
    space.check_test(tests[i]);
    if (const auto f = space.violated_forbidden(tests[i])) {
      throw InvalidSolution(
          "test " + std::to_string(i) + " " + to_string(tests[i]) +
          " contains forbidden pattern " +
          to_string(space.instance().forbidden[*f]));
    }
  }
  CoveragePattern covered = kernels::covered_union(space, tests);
  covered |= space.exempt();
  CoverageVerdict verdict;
  for (std::size_t p = 0; p < space.size(); ++p) {
    if (!covered.test(p)) verdict.uncovered.push_back(p);
  }
  verdict.covers = verdict.uncovered.empty();
  return verdict;
}

std::string to_string(const TestConfig& test) {
  std::ostringstream out;
  out << '(';
  for (std::size_t i = 0; i < test.assignment.size(); ++i) {
    if (i > 0) out << ',';
    out << test.assignment[i];
  }
  out << ')';
  return out.str();
}

std::string to_string(const PartialAssignment& assignment) {
  std::ostringstream out;
  out << '{';
  for (std::size_t i = 0; i < assignment.size(); ++i) {
    if (i > 0) out << ", ";
    out << 'p' << assignment[i].parameter << '=' << assignment[i].value;
  }
  out << '}';
  return out.str();
}

}  // namespace covergen
