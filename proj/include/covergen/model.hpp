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

#ifndef COVERGEN_MODEL_HPP_
#define COVERGEN_MODEL_HPP_

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <boost/dynamic_bitset.hpp>

namespace covergen {

// Bit p is set iff interaction p is covered.
using CoveragePattern = boost::dynamic_bitset<std::uint64_t>;
// Same representation, used for row subsets such as the exempt rows.
using RowMask = boost::dynamic_bitset<std::uint64_t>;

struct Literal {
  int parameter = 0;
  int value = 0;

  friend auto operator<=>(const Literal&, const Literal&) = default;
};

// A conjunction of (parameter, value) literals over distinct parameters.
using PartialAssignment = std::vector<Literal>;

struct CAInstance {
  int strength = 2;
  std::vector<int> domains;
  // Display only. Either empty or one entry per parameter.
  std::vector<std::string> parameter_names;
  // Display only. Either empty or one list of length domains[i] per parameter.
  std::vector<std::vector<std::string>> value_names;
  // Value combinations that may never appear together in a test.
  std::vector<PartialAssignment> forbidden;

  int num_parameters() const { return static_cast<int>(domains.size()); }

  // Throws InvalidInstance describing the first violated invariant.
  void validate() const;

  std::string parameter_name(int parameter) const;
  std::string value_name(int parameter, int value) const;

  // CA(t, k, g): k parameters sharing the alphabet size g.
  static CAInstance uniform(int strength, int num_parameters, int alphabet);
};

struct TestConfig {
  std::vector<int> assignment;

  friend auto operator<=>(const TestConfig&, const TestConfig&) = default;
};

using Combination = std::vector<int>;

struct Interaction {
  Combination combination;
  std::vector<int> values;

  friend bool operator==(const Interaction&, const Interaction&) = default;
};

// All t-subsets of [0, k) in lexicographic order.
std::vector<Combination> enumerate_combinations(int num_parameters,
                                                int strength);

struct InteractionCounts {
  std::size_t total = 0;
  std::vector<std::size_t> per_combination;
};

InteractionCounts count_interactions(const CAInstance& instance);

// Canonical indexing of the interaction universe of one instance.
//
// Combinations are ordered lexicographically; within a combination the value
// tuple is ranked mixed-radix with the combination's first parameter as the
// most significant digit. Interactions that contain a forbidden partial
// assignment keep their index but are flagged in exempt().
class InteractionSpace {
 public:
  explicit InteractionSpace(CAInstance instance);

  const CAInstance& instance() const { return instance_; }
  int num_parameters() const { return instance_.num_parameters(); }
  int strength() const { return instance_.strength; }
  int domain(int parameter) const { return instance_.domains[parameter]; }

  // P, the number of interactions including exempt ones.
  std::size_t size() const { return offsets_.back(); }
  std::size_t num_combinations() const { return offsets_.size() - 1; }
  std::span<const int> combination(std::size_t c) const;
  std::size_t offset(std::size_t c) const { return offsets_[c]; }
  std::size_t combination_size(std::size_t c) const {
    return offsets_[c + 1] - offsets_[c];
  }
  // Index of the combination that owns interaction `index`.
  std::size_t combination_of(std::size_t index) const;

  std::size_t index_of(const Interaction& interaction) const;
  Interaction interaction_at(std::size_t index) const;

  const RowMask& exempt() const { return exempt_; }
  bool is_exempt(std::size_t index) const { return exempt_.test(index); }
  // Rows that a covering array must cover.
  std::size_t num_required() const { return size() - exempt_.count(); }

  // Number of complete tests, saturating at UINT64_MAX.
  std::uint64_t num_tests() const { return num_tests_; }

  // Throws InvalidArgument on wrong length or out-of-domain values.
  void check_test(const TestConfig& test) const;
  // Index into instance().forbidden of the first pattern the test contains.
  std::optional<std::size_t> violated_forbidden(
      std::span<const int> assignment) const;
  std::optional<std::size_t> violated_forbidden(const TestConfig& test) const {
    return violated_forbidden(std::span<const int>(test.assignment));
  }
  bool is_forbidden_test(std::span<const int> assignment) const {
    return violated_forbidden(assignment).has_value();
  }
  bool is_forbidden_test(const TestConfig& test) const {
    return violated_forbidden(test).has_value();
  }

  // Calls f(index) once per combination with the covered interaction.
  template <typename F>
  void for_each_covered(std::span<const int> assignment, F&& f) const {
    const std::size_t t = static_cast<std::size_t>(strength());
    for (std::size_t c = 0; c < num_combinations(); ++c) {
      std::size_t index = offsets_[c];
      const int* params = &combination_params_[c * t];
      const std::size_t* strides = &strides_[c * t];
      for (std::size_t j = 0; j < t; ++j) {
        index += static_cast<std::size_t>(assignment[params[j]]) * strides[j];
      }
      f(index);
    }
  }

  CoveragePattern coverage_pattern(const TestConfig& test) const;

  // Decodes a test from its rank in the mixed-radix enumeration of all tests
  // (parameter 0 most significant).
  TestConfig test_at(std::uint64_t rank) const;

 private:
  CAInstance instance_;
  std::vector<int> combination_params_;
  std::vector<std::size_t> strides_;
  std::vector<std::size_t> offsets_;
  RowMask exempt_;
  std::uint64_t num_tests_ = 0;
};

std::size_t interaction_index(const InteractionSpace& space,
                              const Interaction& interaction);
Interaction interaction_from_index(const InteractionSpace& space,
                                   std::size_t index);
CoveragePattern coverage_pattern(const InteractionSpace& space,
                                 const TestConfig& test);

struct CoverageVerdict {
  bool covers = false;
  // Non-exempt interactions no test covers, ascending.
  std::vector<std::size_t> uncovered;
};

// Checks the covering-array property. Forbidden interactions are exempt;
// a test that contains one raises InvalidSolution.
CoverageVerdict verify_covering_array(const InteractionSpace& space,
                                      std::span<const TestConfig> tests);

std::string to_string(const TestConfig& test);
std::string to_string(const PartialAssignment& assignment);

}  // namespace covergen

#endif  // COVERGEN_MODEL_HPP_
