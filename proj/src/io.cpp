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

#include "covergen/io.hpp"

#include <fstream>
#include <sstream>

#include "covergen/errors.hpp"
#include "json.hpp"

namespace covergen {
namespace {

using nlohmann::json;

void reject_unknown(const json& object, std::initializer_list<const char*> known,
                    const std::string& where) {
  for (const auto& [key, value] : object.items()) {
    bool ok = false;
    for (const char* name : known) ok = ok || key == name;
    if (!ok) throw ParseError(where + ": unknown field \"" + key + "\"");
  }
}

int to_int(const json& value, const std::string& where) {
  if (!value.is_number_integer()) {
    throw ParseError(where + ": expected an integer");
  }
  return value.get<int>();
}

int resolve_parameter(const CAInstance& instance, const json& ref,
                      const std::string& where) {
  if (ref.is_string()) {
    const auto name = ref.get<std::string>();
    for (int i = 0; i < instance.num_parameters(); ++i) {
      if (instance.parameter_name(i) == name) return i;
    }
    throw ParseError(where + ": unknown parameter \"" + name + "\"");
  }
  const int index = to_int(ref, where);
  if (index < 0 || index >= instance.num_parameters()) {
    throw ParseError(where + ": parameter index " + std::to_string(index) +
                     " out of range");
  }
  return index;
}

int resolve_value(const CAInstance& instance, int parameter, const json& ref,
                  const std::string& where) {
  const int size = instance.domains[static_cast<std::size_t>(parameter)];
  if (ref.is_string()) {
    const auto name = ref.get<std::string>();
    for (int v = 0; v < size; ++v) {
      if (instance.value_name(parameter, v) == name) return v;
    }
    throw ParseError(where + ": parameter \"" +
                     instance.parameter_name(parameter) + "\" has no value \"" +
                     name + "\"");
  }
  const int index = to_int(ref, where);
  if (index < 0 || index >= size) {
    throw ParseError(where + ": value index " + std::to_string(index) +
                     " out of range");
  }
  return index;
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
}

void add_parameter(CAInstance& instance, std::string name,
                   std::vector<std::string> values) {
  instance.domains.push_back(static_cast<int>(values.size()));
  instance.parameter_names.push_back(std::move(name));
  instance.value_names.push_back(std::move(values));
}

std::vector<std::string> numbered_values(int size) {
  std::vector<std::string> values;
  for (int v = 0; v < size; ++v) values.push_back(std::to_string(v));
  return values;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cell += '"';
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        cell += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      cells.push_back(std::move(cell));
      cell.clear();
    } else if (ch != '\r') {
      cell += ch;
    }
  }
  cells.push_back(std::move(cell));
  return cells;
}

std::string csv_cell(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string quoted = "\"";
  for (char ch : text) {
    if (ch == '"') quoted += '"';
    quoted += ch;
  }
  return quoted + '"';
}

TestConfig parse_test_row(const CAInstance& instance, const json& row,
                          const std::string& where) {
  const json* values = &row;
  if (row.is_object()) {
    reject_unknown(row, {"values", "indices"}, where);
    if (row.contains("indices")) {
      values = &row.at("indices");
    } else if (row.contains("values")) {
      values = &row.at("values");
    } else {
      throw ParseError(where + ": test needs \"values\" or \"indices\"");
    }
  }
  if (!values->is_array() ||
      values->size() != static_cast<std::size_t>(instance.num_parameters())) {
    throw ParseError(where + ": expected " +
                     std::to_string(instance.num_parameters()) + " values");
  }
  TestConfig test;
  for (int i = 0; i < instance.num_parameters(); ++i) {
    test.assignment.push_back(resolve_value(
        instance, i, (*values)[static_cast<std::size_t>(i)],
        where + "[" + std::to_string(i) + "]"));
  }
  return test;
}

}  // namespace

CAInstance parse_instance(std::string_view text) {
  const json doc = parse_json(text);
  if (!doc.is_object()) throw ParseError("instance: expected a JSON object");
  reject_unknown(doc, {"strength", "parameters", "domains", "forbidden"},
                 "instance");
  CAInstance instance;
  if (!doc.contains("strength")) throw ParseError("instance: missing \"strength\"");
  instance.strength = to_int(doc.at("strength"), "strength");

  if (doc.contains("parameters") == doc.contains("domains")) {
    throw ParseError("instance: give exactly one of \"parameters\" or \"domains\"");
  }
  if (doc.contains("domains")) {
    const json& domains = doc.at("domains");
    if (!domains.is_array()) throw ParseError("domains: expected an array");
    for (std::size_t i = 0; i < domains.size(); ++i) {
      const std::string where = "domains[" + std::to_string(i) + "]";
      const int size = to_int(domains[i], where);
      if (size < 1) throw ParseError(where + ": domain size must be positive");
      add_parameter(instance, "p" + std::to_string(i), numbered_values(size));
    }
  } else {
    const json& params = doc.at("parameters");
    if (!params.is_array()) throw ParseError("parameters: expected an array");
    for (std::size_t i = 0; i < params.size(); ++i) {
      const std::string where = "parameters[" + std::to_string(i) + "]";
      const json& param = params[i];
      if (param.is_number_integer()) {
        const int size = param.get<int>();
        if (size < 1) throw ParseError(where + ": domain size must be positive");
        add_parameter(instance, "p" + std::to_string(i), numbered_values(size));
        continue;
      }
      if (!param.is_object()) {
        throw ParseError(where + ": expected an object or an integer");
      }
      reject_unknown(param, {"name", "values"}, where);
      if (!param.contains("name") || !param.at("name").is_string()) {
        throw ParseError(where + ": missing string \"name\"");
      }
      if (!param.contains("values") || !param.at("values").is_array() ||
          param.at("values").empty()) {
        throw ParseError(where + ": \"values\" must be a nonempty array");
      }
      std::vector<std::string> values;
      for (std::size_t v = 0; v < param.at("values").size(); ++v) {
        const json& value = param.at("values")[v];
        if (value.is_string()) {
          values.push_back(value.get<std::string>());
        } else if (value.is_number() || value.is_boolean()) {
          values.push_back(value.dump());
        } else {
          throw ParseError(where + ".values[" + std::to_string(v) +
                           "]: expected a string or number");
        }
      }
      add_parameter(instance, param.at("name").get<std::string>(),
                    std::move(values));
    }
  }
  for (std::size_t a = 0; a < instance.parameter_names.size(); ++a) {
    for (std::size_t b = a + 1; b < instance.parameter_names.size(); ++b) {
      if (instance.parameter_names[a] == instance.parameter_names[b]) {
        throw ParseError("parameters[" + std::to_string(b) +
                         "]: duplicate name \"" + instance.parameter_names[b] +
                         "\"");
      }
    }
  }

  if (doc.contains("forbidden")) {
    const json& forbidden = doc.at("forbidden");
    if (!forbidden.is_array()) throw ParseError("forbidden: expected an array");
    for (std::size_t f = 0; f < forbidden.size(); ++f) {
      const std::string where = "forbidden[" + std::to_string(f) + "]";
      if (!forbidden[f].is_array() || forbidden[f].empty()) {
        throw ParseError(where + ": expected a nonempty array of pairs");
      }
      PartialAssignment pattern;
      for (std::size_t l = 0; l < forbidden[f].size(); ++l) {
        const std::string at = where + "[" + std::to_string(l) + "]";
        const json& literal = forbidden[f][l];
        if (!literal.is_array() || literal.size() != 2) {
          throw ParseError(at + ": expected a [parameter, value] pair");
        }
        const int param = resolve_parameter(instance, literal[0], at);
        const int value = resolve_value(instance, param, literal[1], at);
        for (const Literal& existing : pattern) {
          if (existing.parameter == param) {
            throw ParseError(at + ": parameter repeated within the pattern");
          }
        }
        pattern.push_back({param, value});
      }
      instance.forbidden.push_back(std::move(pattern));
    }
  }

  try {
    instance.validate();
  } catch (const InvalidInstance& e) {
    throw ParseError(std::string("instance: ") + e.what());
  }
  return instance;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

CAInstance load_instance(const std::filesystem::path& path) {
  try {
    return parse_instance(read_file(path));
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

std::vector<TestConfig> parse_suite(const CAInstance& instance,
                                    std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  std::vector<TestConfig> tests;
  if (first != std::string_view::npos && (text[first] == '{' || text[first] == '[')) {
    const json doc = parse_json(text);
    const json* rows = &doc;
    if (doc.is_object()) {
      if (!doc.contains("tests")) throw ParseError("suite: missing \"tests\"");
      rows = &doc.at("tests");
    }
    if (!rows->is_array()) throw ParseError("suite: \"tests\" must be an array");
    for (std::size_t i = 0; i < rows->size(); ++i) {
      tests.push_back(parse_test_row(instance, (*rows)[i],
                                     "tests[" + std::to_string(i) + "]"));
    }
    return tests;
  }

  std::istringstream in{std::string(text)};
  std::string line;
  std::vector<int> column_param;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto cells = split_csv_line(line);
    const std::string where = "line " + std::to_string(line_number);
    if (column_param.empty()) {
      if (cells.size() != static_cast<std::size_t>(instance.num_parameters())) {
        throw ParseError(where + ": header must list " +
                         std::to_string(instance.num_parameters()) +
                         " parameters");
      }
      std::vector<bool> used(cells.size(), false);
      for (const auto& cell : cells) {
        const int param = resolve_parameter(instance, json(cell), where);
        if (used[static_cast<std::size_t>(param)]) {
          throw ParseError(where + ": parameter \"" + cell + "\" repeated");
        }
        used[static_cast<std::size_t>(param)] = true;
        column_param.push_back(param);
      }
      continue;
    }
    if (cells.size() != column_param.size()) {
      throw ParseError(where + ": expected " +
                       std::to_string(column_param.size()) + " cells");
    }
    TestConfig test;
    test.assignment.assign(column_param.size(), 0);
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const int param = column_param[c];
      test.assignment[static_cast<std::size_t>(param)] =
          resolve_value(instance, param, json(cells[c]), where);
    }
    tests.push_back(std::move(test));
  }
  if (column_param.empty()) throw ParseError("suite: empty CSV document");
  return tests;
}

std::vector<TestConfig> load_suite(const CAInstance& instance,
                                   const std::filesystem::path& path) {
  try {
    return parse_suite(instance, read_file(path));
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

std::string write_suite_json(const CAInstance& instance,
                             std::span<const TestConfig> tests,
                             const AnalysisReport& report,
                             const SuiteStats& stats) {
  json doc;
  doc["strength"] = instance.strength;
  json params = json::array();
  for (int i = 0; i < instance.num_parameters(); ++i) {
    params.push_back(instance.parameter_name(i));
  }
  doc["parameters"] = params;
  json rows = json::array();
  for (const TestConfig& test : tests) {
    json values = json::array();
    for (int i = 0; i < instance.num_parameters(); ++i) {
      values.push_back(
          instance.value_name(i, test.assignment[static_cast<std::size_t>(i)]));
    }
    rows.push_back({{"values", values}, {"indices", test.assignment}});
  }
  doc["tests"] = rows;
  doc["analysis"] = {
      {"per_test_increment_pct", report.per_test_increment_pct},
      {"cumulative_pct", report.cumulative_pct},
      {"reduction_pct", report.reduction_pct},
      {"redundant_tests", report.redundant_tests},
      {"required_interactions", report.required_interactions},
      {"covers", report.covers},
  };
  json solver = {{"method", stats.method}, {"size", tests.size()}};
  if (stats.column_generation) {
    const CGResult& cg = *stats.column_generation;
    solver["lp_bound"] = cg.lp_bound;
    solver["lp_optimal"] = cg.lp_optimal;
    solver["optimal"] = cg.optimal;
    solver["lower_bound"] = cg.lower_bound;
    solver["iterations"] = cg.iterations;
    solver["columns_generated"] = cg.columns_generated;
    solver["warm_start_size"] = cg.warm_start_size;
    solver["ip_nodes"] = cg.ip_nodes;
    solver["ip_proven"] = cg.ip_proven;
  }
  doc["solver"] = solver;
  return doc.dump(2) + "\n";
}

std::string write_suite_csv(const CAInstance& instance,
                            std::span<const TestConfig> tests) {
  std::string out;
  for (int i = 0; i < instance.num_parameters(); ++i) {
    if (i > 0) out += ',';
    out += csv_cell(instance.parameter_name(i));
  }
  out += '\n';
  for (const TestConfig& test : tests) {
    for (int i = 0; i < instance.num_parameters(); ++i) {
      if (i > 0) out += ',';
      out += csv_cell(
          instance.value_name(i, test.assignment[static_cast<std::size_t>(i)]));
    }
    out += '\n';
  }
  return out;
}

}  // namespace covergen
