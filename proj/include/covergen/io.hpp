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

#ifndef COVERGEN_IO_HPP_
#define COVERGEN_IO_HPP_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "covergen/analysis.hpp"
#include "covergen/colgen.hpp"
#include "covergen/model.hpp"

namespace covergen {

// Instance document:
//
//   {
//     "strength": 2,
//     "parameters": [{"name": "OS", "values": ["Windows", "MacOS"]}, 3],
//     "forbidden": [[["OS", "MacOS"], ["Browser", "Explorer"]]]
//   }
//
// A parameter is either a {name, values} object or a bare domain size.
// "domains": [v1, ..., vk] may replace "parameters". Forbidden literals name
// parameters and values by string or by index. Unknown fields are rejected.
// Every parsed instance carries parameter and value names.
CAInstance parse_instance(std::string_view text);
CAInstance load_instance(const std::filesystem::path& path);

// Reads a suite written by write_suite_json or write_suite_csv. Tests may
// be given by value names or indices.
std::vector<TestConfig> parse_suite(const CAInstance& instance,
                                    std::string_view text);
std::vector<TestConfig> load_suite(const CAInstance& instance,
                                   const std::filesystem::path& path);

struct SuiteStats {
  std::string method;
  std::optional<CGResult> column_generation;
};

std::string write_suite_json(const CAInstance& instance,
                             std::span<const TestConfig> tests,
                             const AnalysisReport& report,
                             const SuiteStats& stats);
// Header row of parameter names, then one row of value names per test.
std::string write_suite_csv(const CAInstance& instance,
                            std::span<const TestConfig> tests);

std::string read_file(const std::filesystem::path& path);

}  // namespace covergen

#endif  // COVERGEN_IO_HPP_
