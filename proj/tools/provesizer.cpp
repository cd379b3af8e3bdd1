// Copyright 2026 The Provesizer Authors
//
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

// Command-line front end: derive, optimize, simulate, compare, scenarios.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "provesizer/cli.hpp"

namespace {

using provesizer::Error;
using provesizer::ErrorCode;
namespace cli = provesizer::cli;

struct Flags {
  std::string config;
  std::optional<std::string> scenario;
  std::optional<std::string> machine;
  std::optional<double> days;
  std::optional<std::string> format;
  std::optional<std::string> solver_cmd;
  std::optional<double> timeout_s;
  std::optional<double> granularity_s;
  std::optional<std::string> fleet;
  std::optional<std::string> fleet_source;
  std::optional<std::string> trace;
  std::optional<std::string> output;
  bool fixed_fleet = false;
  bool strict_paper_lag = false;
  bool literal_baseline = false;
};

// "n_super,n_batch,n_bundle,batch_epoch_s,bundle_epoch_s"
provesizer::DerivedConfig parse_fleet(const std::string& text) {
  provesizer::DerivedConfig c;
  char tail = 0;
  const int n = std::sscanf(text.c_str(), "%ld,%ld,%ld,%lf,%lf%c", &c.n_super, &c.n_batch,
                            &c.n_bundle, &c.batch_epoch_s, &c.bundle_epoch_s, &tail);
  if (n != 5) {
    throw Error(ErrorCode::kInvalidConfig,
                "--fleet expects n_super,n_batch,n_bundle,batch_epoch_s,bundle_epoch_s");
  }
  return c;
}

cli::RunConfig build_config(const Flags& f) {
  cli::RunConfig c = f.config.empty() ? cli::RunConfig{} : cli::load_run_config(f.config);
  if (f.scenario) c.scenario = *f.scenario;
  if (f.machine) c.machine = *f.machine;
  if (f.days) c.days = *f.days;
  if (f.format) c.format = cli::parse_format(*f.format);
  // Solver command precedence: flag, then environment, then config.
  if (f.solver_cmd) {
    cli::apply_solver_command(c.solver.endpoint, *f.solver_cmd);
  } else if (const char* env = std::getenv("PROVESIZER_SOLVER"); env && *env) {
    cli::apply_solver_command(c.solver.endpoint, env);
  }
  if (f.timeout_s) c.solver.timeout_s = *f.timeout_s;
  if (f.granularity_s) c.search.epoch_granularity_s = *f.granularity_s;
  if (f.fleet) c.fleet = parse_fleet(*f.fleet);
  if (f.fleet_source) c.fleet_source = cli::parse_fleet_source(*f.fleet_source);
  if (f.trace) c.trace_path = *f.trace;
  if (f.output) c.output_path = *f.output;
  if (f.fixed_fleet) c.fixed_fleet = true;
  if (f.strict_paper_lag) c.strict_paper_lag = true;
  if (f.literal_baseline) c.literal_baseline = true;
  return c;
}

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config, "JSON run configuration")->check(CLI::ExistingFile);
  sub->add_option("--scenario", f.scenario, "Catalog scenario name");
  sub->add_option("--machine", f.machine, "Catalog machine name");
  sub->add_option("--format", f.format, "json, csv or md")
      ->check(CLI::IsMember({"json", "csv", "md"}));
  sub->add_option("--output", f.output, "Write the report here instead of stdout");
}

void add_solver(CLI::App* sub, Flags& f) {
  sub->add_option("--solver-cmd", f.solver_cmd,
                  "SMT solver command line (default: z3 -in)");
  sub->add_option("--timeout-s", f.timeout_s, "Wall-clock solver budget")
      ->check(CLI::PositiveNumber);
  sub->add_option("--granularity-s", f.granularity_s, "Epoch lattice step")
      ->check(CLI::PositiveNumber);
  sub->add_flag("--literal-baseline", f.literal_baseline,
                "Size the baseline at one batch prover per 45 super provers");
}

void add_sim(CLI::App* sub, Flags& f) {
  sub->add_option("--days", f.days, "Simulated span for lag validation")
      ->check(CLI::PositiveNumber);
  sub->add_flag("--strict-paper-lag", f.strict_paper_lag,
                "Lag predicate without the proving-rounds factor");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cost-optimal sizing of a three-tier proving pipeline"};
  app.require_subcommand(1);
  Flags f;

  auto* derive = app.add_subcommand("derive", "Closed-form fleet and epochs");
  add_common(derive, f);

  auto* optimize = app.add_subcommand("optimize", "SMT search for the cheapest fleet");
  add_common(optimize, f);
  add_solver(optimize, f);
  add_sim(optimize, f);
  optimize->add_flag("--fixed-fleet", f.fixed_fleet,
                     "Keep the baseline fleet and re-time the epochs only");

  auto* simulate = app.add_subcommand("simulate", "Replay a configuration");
  add_common(simulate, f);
  add_sim(simulate, f);
  add_solver(simulate, f);
  simulate->add_option("--fleet", f.fleet,
                       "n_super,n_batch,n_bundle,batch_epoch_s,bundle_epoch_s");
  simulate->add_option("--fleet-source", f.fleet_source, "derived, baseline or optimized")
      ->check(CLI::IsMember({"derived", "baseline", "optimized"}));
  simulate->add_option("--trace", f.trace, "Write a TSV event trace");

  auto* compare = app.add_subcommand("compare", "Baseline against optimized per scenario");
  add_common(compare, f);
  add_solver(compare, f);
  add_sim(compare, f);

  auto* scenarios = app.add_subcommand("scenarios", "List catalog machines and scenarios");
  add_common(scenarios, f);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : static_cast<int>(cli::ExitCode::kUsage);
  }

  try {
    const cli::RunConfig config = build_config(f);
    cli::CommandResult result;
    if (*derive) {
      result = cli::cmd_derive(config);
    } else if (*optimize) {
      result = cli::cmd_optimize(config);
    } else if (*simulate) {
      result = cli::cmd_simulate(config);
    } else if (*compare) {
      result = cli::cmd_compare(config);
    } else {
      result = cli::cmd_scenarios(config);
    }
    if (!result.diagnostic.empty()) std::cerr << result.diagnostic << '\n';

    const std::string text = cli::render(result.report, config.format);
    if (config.output_path) {
      std::ofstream out(*config.output_path);
      if (!out) {
        std::cerr << "error: cannot write '" << *config.output_path << "'\n";
        return static_cast<int>(cli::ExitCode::kUsage);
      }
      out << text;
    } else {
      std::cout << text;
    }
    return static_cast<int>(result.exit);
  } catch (const Error& e) {
    std::cerr << "error (" << provesizer::to_string(e.code()) << "): " << e.what() << '\n';
    return static_cast<int>(cli::exit_code_for(e.code()));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return static_cast<int>(cli::ExitCode::kUsage);
  }
}
