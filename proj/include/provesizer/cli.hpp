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

#ifndef PROVESIZER_CLI_HPP_
#define PROVESIZER_CLI_HPP_

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "provesizer/error.hpp"
#include "provesizer/json_io.hpp"
#include "provesizer/optimizer.hpp"
#include "provesizer/scenarios.hpp"
#include "provesizer/simulator.hpp"

namespace provesizer::cli {

enum class ExitCode : int {
  kOk = 0,
  kLag = 1,
  kInfeasible = 2,
  kTimeout = 3,
  kUsage = 4,
};

enum class Format { kJson, kCsv, kMarkdown };
Format parse_format(std::string_view name);

// Where the simulated fleet comes from when no explicit fleet is given.
enum class FleetSource { kDerived, kBaseline, kOptimized };
FleetSource parse_fleet_source(std::string_view name);

struct SolverSettings {
  SolverEndpoint endpoint;
  double timeout_s = 6000.0;
};

struct SearchSettings {
  std::optional<std::int64_t> max_super;
  std::optional<std::int64_t> max_batch;
  std::optional<std::int64_t> max_bundle;
  double epoch_granularity_s = 1.0;
  std::optional<double> epoch_floor_s;
  std::optional<double> epoch_ceiling_s;
};

/// Everything a command needs. Precedence, lowest first: built-in defaults,
/// machine timings, scenario economics, the `pipeline` section, flags.
struct RunConfig {
  Json pipeline = Json::object();  // PipelineParams overrides, validated on use
  std::string machine;             // empty: catalog default
  std::optional<MachineSpec> inline_machine;
  std::optional<std::string> scenario;
  SolverSettings solver;
  Format format = Format::kJson;
  std::optional<std::string> output_path;
  std::optional<std::string> trace_path;  // simulate: TSV event trace
  SearchSettings search;
  std::optional<DerivedConfig> fleet;
  Catalog catalog = builtin_catalog();
  double days = 30.0;
  bool fixed_fleet = false;
  bool strict_paper_lag = false;
  bool literal_baseline = false;
  FleetSource fleet_source = FleetSource::kDerived;
};

/// Parses a RunConfig document on top of the built-in catalog. Unknown keys
/// are errors. Relative catalog paths resolve against `base_dir`.
RunConfig parse_run_config(const Json& doc, const std::string& base_dir = ".");
RunConfig load_run_config(const std::string& path);

/// Splits "cmd arg1 arg2" into the endpoint command and its full argument list.
void apply_solver_command(SolverEndpoint& endpoint, const std::string& command_line);

PipelineParams resolve_params(const RunConfig& config);

// --- reports ---------------------------------------------------------------

struct DeriveReport {
  std::string scenario;
  std::string machine;
  double tps = 0.0;
  DerivedConfig config;
  CostBreakdown cost;

  bool operator==(const DeriveReport&) const = default;
};

struct ValidationSummary {
  std::string lag = "none";
  double max_finality_s = 0.0;
  std::int64_t bundle_epochs = 0;
  double days = 0.0;

  bool operator==(const ValidationSummary&) const = default;
};

// One Table-6-shaped row.
struct OptimizeRow {
  std::string scenario;
  std::string machine;
  double tps = 0.0;
  std::string mode;
  std::string status;
  std::string solver;
  std::optional<DerivedConfig> config;
  std::optional<CostBreakdown> cost;
  std::optional<DerivedConfig> baseline_config;
  std::optional<CostBreakdown> baseline_cost;
  std::optional<ReductionReport> reduction;
  std::optional<ValidationSummary> validation;

  bool operator==(const OptimizeRow&) const = default;
};

struct OptimizeReport {
  std::string command;  // "optimize" or "compare"
  std::vector<OptimizeRow> rows;

  bool operator==(const OptimizeReport&) const = default;
};

struct SimulateReport {
  std::string scenario;
  std::string machine;
  double days = 0.0;
  bool strict_paper_lag = false;
  DerivedConfig config;
  std::string lag = "none";
  std::optional<double> lag_time_s;
  std::optional<double> lag_pool_size;
  std::int64_t bundle_epochs = 0;
  std::int64_t batch_epochs = 0;
  double max_finality_s = 0.0;
  SimTotals totals;
  CostBreakdown cost;

  bool operator==(const SimulateReport&) const = default;
};

struct ScenariosReport {
  std::vector<MachineSpec> machines;
  std::vector<Scenario> scenarios;

  bool operator==(const ScenariosReport&) const = default;
};

using Report = std::variant<DeriveReport, OptimizeReport, SimulateReport, ScenariosReport>;

Json to_json(const Report& report);
Report report_from_json(const Json& j);

/// Report text in `format`; ends with a newline.
std::string render(const Report& report, Format format);

struct CommandResult {
  Report report;
  ExitCode exit = ExitCode::kOk;
  std::string diagnostic;  // for stderr
};

CommandResult cmd_derive(const RunConfig& config);
CommandResult cmd_optimize(const RunConfig& config);
CommandResult cmd_simulate(const RunConfig& config);
CommandResult cmd_compare(const RunConfig& config);
CommandResult cmd_scenarios(const RunConfig& config);

/// Maps library errors to exit codes.
ExitCode exit_code_for(ErrorCode code);

// Report rounding: USD to cents, epochs and counts per month to 2 decimals.
double round_cents(double usd);
CostBreakdown round_cost(const CostBreakdown& cost);
DerivedConfig round_epochs(const DerivedConfig& config);

}  // namespace provesizer::cli

#endif  // PROVESIZER_CLI_HPP_
