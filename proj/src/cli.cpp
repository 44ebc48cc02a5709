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

#include "covergen/cli.hpp"

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "covergen/analysis.hpp"
#include "covergen/baselines.hpp"
#include "covergen/colgen.hpp"
#include "covergen/errors.hpp"
#include "covergen/io.hpp"

namespace covergen {
namespace {

struct OutputOptions {
  std::string format = "json";
  std::string output;
};

void add_output_flags(CLI::App* command, OutputOptions& options) {
  command->add_option("--format", options.format, "Suite format")
      ->check(CLI::IsMember({"json", "csv"}));
  command->add_option("--output,-o", options.output,
                      "Write the suite here instead of standard output");
}

void emit(const std::string& text, const OutputOptions& options,
          std::ostream& out) {
  if (options.output.empty()) {
    out << text;
    return;
  }
  std::ofstream file(options.output, std::ios::binary);
  if (!file) throw ParseError("cannot write " + options.output);
  file << text;
}

std::string render_suite(const CAInstance& instance,
                         std::span<const TestConfig> tests,
                         const SuiteStats& stats,
                         const OutputOptions& options) {
  if (options.format == "csv") return write_suite_csv(instance, tests);
  const InteractionSpace space(instance);
  return write_suite_json(instance, tests, analyze(space, tests), stats);
}

std::string format_pct(double value) {
  std::ostringstream text;
  text << std::fixed << std::setprecision(2) << value;
  return text.str();
}

void print_report(const CAInstance& instance, const AnalysisReport& report,
                  std::ostream& out) {
  out << "test  new  increment%  cumulative%\n";
  for (std::size_t i = 0; i < report.per_test_new.size(); ++i) {
    out << std::setw(4) << i << ' ' << std::setw(4) << report.per_test_new[i]
        << ' ' << std::setw(11) << format_pct(report.per_test_increment_pct[i])
        << ' ' << std::setw(12) << format_pct(report.cumulative_pct[i]);
    if (report.per_test_new[i] == 0) out << "  redundant";
    out << '\n';
  }
  out << "required interactions: " << report.required_interactions << '\n';
  out << "reduction vs exhaustive: " << format_pct(report.reduction_pct)
      << "%\n";
  out << "covering array (strength " << instance.strength
      << "): " << (report.covers ? "yes" : "no") << '\n';
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Covering array generation by column generation"};
  app.require_subcommand(1);

  std::string instance_path;
  std::string suite_path;
  std::optional<int> strength;
  const auto add_instance = [&](CLI::App* command) {
    command->add_option("instance", instance_path, "Instance document")
        ->required();
    command->add_option("--strength", strength, "Override the strength");
  };

  CGConfig config;
  bool no_warm_start = false;
  bool quiet = false;
  OutputOptions solve_output;
  auto* solve = app.add_subcommand("solve", "Run column generation");
  add_instance(solve);
  solve->add_option("--time-limit", config.time_limit_seconds,
                    "Seconds for the whole pipeline")
      ->check(CLI::PositiveNumber);
  solve->add_option("--seed", config.seed, "Seed of the greedy warm start");
  solve->add_flag("--no-warm-start", no_warm_start,
                  "Start from artificial columns only");
  solve->add_option("--columns-per-iter", config.columns_per_iteration,
                    "Columns priced per iteration")
      ->check(CLI::PositiveNumber);
  solve->add_option("--ip-node-limit", config.ip_node_limit,
                    "Node cap of the integer finalization")
      ->check(CLI::PositiveNumber);
  solve->add_flag("--quiet,-q", quiet, "No per-iteration progress log");
  add_output_flags(solve, solve_output);

  auto* verify = app.add_subcommand("verify", "Check a suite for coverage");
  add_instance(verify);
  verify->add_option("suite", suite_path, "Suite file (JSON or CSV)")
      ->required();

  auto* analyze_cmd = app.add_subcommand("analyze", "Coverage contributions");
  add_instance(analyze_cmd);
  analyze_cmd->add_option("suite", suite_path, "Suite file (JSON or CSV)")
      ->required();

  std::size_t cap = 16;
  auto* oracle = app.add_subcommand("oracle", "Exact CAN for tiny instances");
  add_instance(oracle);
  oracle->add_option("--cap", cap, "Largest suite size to try");

  std::uint64_t greedy_seed = 0;
  OutputOptions greedy_output;
  auto* greedy = app.add_subcommand("greedy", "Greedy baseline only");
  add_instance(greedy);
  greedy->add_option("--seed", greedy_seed, "Parameter order seed");
  add_output_flags(greedy, greedy_output);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    CAInstance instance = load_instance(instance_path);
    if (strength) {
      instance.strength = *strength;
      instance.validate();
    }

    if (*solve) {
      if (no_warm_start) config.warm_start = WarmStart::kNone;
      ProgressSink sink;
      if (!quiet) {
        sink = [&err](const ProgressEvent& event) {
          err << "iter " << event.iteration << " lp " << std::setprecision(10)
              << event.lp_objective << " pricing " << event.pricing_objective
              << " pool " << event.pool_size << " simplex "
              << event.simplex_iterations << " t " << std::setprecision(3)
              << event.elapsed_seconds << "s\n";
        };
      }
      const CGResult result = run_column_generation(instance, config, sink);
      err << "tests " << result.ip_objective << " lp_bound "
          << std::setprecision(10) << result.lp_bound << " lower_bound "
          << result.lower_bound << (result.lp_optimal ? " lp_optimal" : "")
          << (result.optimal ? " optimal" : "") << " iterations "
          << result.iterations << " time " << std::setprecision(3)
          << result.wall_time_seconds << "s\n";
      SuiteStats stats{"column_generation", result};
      emit(render_suite(instance, result.tests, stats, solve_output),
           solve_output, out);
      return kExitOk;
    }

    if (*greedy) {
      const InteractionSpace space(instance);
      const GreedyResult result = greedy_construct(space, greedy_seed);
      emit(render_suite(instance, result.tests, SuiteStats{"greedy", {}},
                        greedy_output),
           greedy_output, out);
      return kExitOk;
    }

    if (*oracle) {
      const InteractionSpace space(instance);
      const OracleResult result = exact_can_oracle(space, cap);
      if (!result.can) {
        out << "CAN unknown, at least " << result.lower_bound << '\n';
        return kExitInvalid;
      }
      out << "CAN " << *result.can << '\n';
      out << write_suite_csv(instance, result.witness);
      return kExitOk;
    }

    const InteractionSpace space(instance);
    const std::vector<TestConfig> tests = load_suite(instance, suite_path);
    if (*verify) {
      const CoverageVerdict verdict = verify_covering_array(space, tests);
      if (verdict.covers) {
        out << "OK: " << tests.size() << " tests cover all "
            << space.num_required() << " required interactions\n";
        return kExitOk;
      }
      out << "FAIL: " << verdict.uncovered.size() << " of "
          << space.num_required() << " interactions uncovered\n";
      for (std::size_t p : verdict.uncovered) {
        const Interaction interaction = space.interaction_at(p);
        out << "  " << p << ':';
        for (std::size_t j = 0; j < interaction.combination.size(); ++j) {
          const int param = interaction.combination[j];
          out << ' ' << instance.parameter_name(param) << '='
              << instance.value_name(param, interaction.values[j]);
        }
        out << '\n';
      }
      return kExitInvalid;
    }

    const AnalysisReport report = analyze(space, tests);
    print_report(instance, report, out);
    return report.covers ? kExitOk : kExitInvalid;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  }
}

}  // namespace covergen
