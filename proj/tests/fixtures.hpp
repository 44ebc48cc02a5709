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


#ifndef COVERGEN_TESTS_FIXTURES_HPP_
#define COVERGEN_TESTS_FIXTURES_HPP_

#include <random>
#include <vector>

#include "covergen/model.hpp"

namespace covergen::fixtures {

// Five two-valued components of a web application.
inline CAInstance web_app() {
  CAInstance instance;
  instance.strength = 2;
  instance.domains = {2, 2, 2, 2, 2};
  instance.parameter_names = {"OS", "Browser", "Protocol", "CPU", "DBMS"};
  instance.value_names = {{"Windows", "MacOS"},
                          {"Explorer", "Firefox"},
                          {"IPv4", "IPv6"},
                          {"Intel", "AMD"},
                          {"Oracle DB", "MySQL"}};
  return instance;
}

// A six-row pairwise suite for web_app().
inline std::vector<TestConfig> web_app_suite() {
  return {{{0, 0, 0, 0, 0}}, {{0, 0, 0, 1, 1}}, {{0, 0, 1, 0, 1}},
          {{0, 1, 0, 0, 1}}, {{1, 0, 0, 0, 1}}, {{1, 1, 1, 1, 0}}};
}

inline CAInstance random_instance(std::mt19937_64& rng, int max_k,
                                  int max_v) {
  std::uniform_int_distribution<int> pick_k(1, max_k);
  std::uniform_int_distribution<int> pick_v(1, max_v);
  CAInstance instance;
  const int k = pick_k(rng);
  for (int i = 0; i < k; ++i) instance.domains.push_back(pick_v(rng));
  instance.strength = std::uniform_int_distribution<int>(1, k)(rng);
  return instance;
}

inline TestConfig random_test(std::mt19937_64& rng,
                              const CAInstance& instance) {
  TestConfig test;
  for (int v : instance.domains) {
    test.assignment.push_back(std::uniform_int_distribution<int>(0, v - 1)(rng));
  }
  return test;
}

inline std::vector<double> random_duals(std::mt19937_64& rng, std::size_t n,
                                        double zero_fraction = 0.3) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> duals(n);
  for (double& d : duals) d = unit(rng) < zero_fraction ? 0.0 : unit(rng);
  return duals;
}

}  // namespace covergen::fixtures

#endif  // COVERGEN_TESTS_FIXTURES_HPP_
