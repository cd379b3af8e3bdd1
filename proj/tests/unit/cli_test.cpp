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

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"

#include "fixtures.hpp"
#include "provesizer/cli.hpp"
#include "provesizer/error.hpp"

using namespace provesizer;
using namespace provesizer::cli;

namespace {

RunConfig from_text(const char* text) { return parse_run_config(Json::parse(text)); }

ExitCode run_or_exit(CommandResult (*cmd)(const RunConfig&), const RunConfig& c) {
  try {
    return cmd(c).exit;
  } catch (const Error& e) {
    return exit_code_for(e.code());
  }
}

}  // namespace

TEST_CASE("run config parsing") {
  const RunConfig c = from_text(R"({
    "scenario": "tge",
    "machine": "cpu-m7i.24xlarge",
    "pipeline": {"target_finality_s": 20000},
    "solver": {"command": "cvc5", "args": ["--lang=smt2"], "timeout_s": 30},
    "output": {"format": "md"},
    "search": {"max_super": 40, "epoch_granularity_s": 10},
    "run": {"days": 7, "fixed_fleet": true, "fleet_source": "baseline"}
  })");
  CHECK(c.scenario == "tge");
  CHECK(c.machine == "cpu-m7i.24xlarge");
  CHECK(c.solver.endpoint.command == "cvc5");
  CHECK(c.solver.endpoint.args == std::vector<std::string>{"--lang=smt2"});
  CHECK(c.solver.timeout_s == 30);
  CHECK(c.format == Format::kMarkdown);
  CHECK(c.search.max_super == 40);
  CHECK(c.search.epoch_granularity_s == 10);
  CHECK(c.days == 7);
  CHECK(c.fixed_fleet);
  CHECK(c.fleet_source == FleetSource::kBaseline);

  // Scenario economics on machine timings, then pipeline overrides.
  const PipelineParams p = resolve_params(c);
  CHECK(p.tps == 2.12);
  CHECK(p.t_super_s == 2352);
  CHECK(p.target_finality_s == 20000);
}

TEST_CASE("run config rejects unknown keys") {
  CHECK_THROWS_AS(from_text(R"({"scenaro": "tge"})"), Error);
  CHECK_THROWS_AS(from_text(R"({"solver": {"cmd": "z3"}})"), Error);
  CHECK_THROWS_AS(from_text(R"({"pipeline": {"tsp": 1}})"), Error);
  CHECK_THROWS_AS(from_text(R"({"output": {"format": "xml"}})"), Error);
}

TEST_CASE("inline machine joins the catalog") {
  const RunConfig c = from_text(R"({
    "machine": {"name": "lab", "label": "Lab box", "monthly_cost_usd": 500,
                "t_super_s": 1000, "t_batch_s": 1200, "t_bundle_s": 400,
                "memory_gb": 256},
    "pipeline": {"tps": 0.5}
  })");
  CHECK(c.machine == "lab");
  const PipelineParams p = resolve_params(c);
  CHECK(p.t_super_s == 1000);
  CHECK(p.machine_cost_usd_month.batch_usd == 500);
  CHECK(p.tps == 0.5);
}

TEST_CASE("solver command splitting") {
  SolverEndpoint e;
  apply_solver_command(e, "z3 -in -smt2");
  CHECK(e.command == "z3");
  CHECK(e.args == std::vector<std::string>{"-in", "-smt2"});
  apply_solver_command(e, "/opt/solver");
  CHECK(e.args.empty());
  CHECK_THROWS_AS(apply_solver_command(e, "  "), Error);
}

TEST_CASE("derive command") {
  RunConfig c;
  c.scenario = "steady";
  const CommandResult r = cmd_derive(c);
  CHECK(r.exit == ExitCode::kOk);
  const auto& d = std::get<DeriveReport>(r.report);
  CHECK(d.config.n_super == 2);
  CHECK(d.config.n_batch == 1);
  CHECK(d.config.n_bundle == 1);

  c.pipeline = Json::parse(R"({"tps": 0})");
  const auto& zero = std::get<DeriveReport>(cmd_derive(c).report);
  CHECK(zero.config.n_super == 0);
  CHECK(zero.cost.machine_usd_month == 0);

  c.pipeline = Json::parse(R"({"target_finality_s": 3000})");
  CHECK(run_or_exit(cmd_derive, c) == ExitCode::kInfeasible);
}

TEST_CASE("memory check uses the machine size") {
  RunConfig c = from_text(R"({
    "machine": {"name": "small", "label": "Small", "monthly_cost_usd": 100,
                "t_super_s": 1000, "t_batch_s": 1000, "t_bundle_s": 400,
                "memory_gb": 64}
  })");
  CHECK(run_or_exit(cmd_derive, c) == ExitCode::kInfeasible);
}

TEST_CASE("unknown names and unreachable solvers exit 4") {
  RunConfig c;
  c.scenario = "no-such";
  CHECK(run_or_exit(cmd_compare, c) == ExitCode::kUsage);
  c.scenario.reset();
  c.machine = "no-such";
  CHECK(run_or_exit(cmd_derive, c) == ExitCode::kUsage);

  RunConfig s;
  s.scenario = "steady";
  s.fixed_fleet = true;
  s.solver.endpoint.command = "/nonexistent/solver";
  CHECK(run_or_exit(cmd_optimize, s) == ExitCode::kUsage);
}

TEST_CASE("simulate command exit codes") {
  RunConfig c;
  c.scenario = "surge";
  c.days = 1;
  c.fleet = DerivedConfig{1245, 15, 2, 1718.2, 1718.2};
  const CommandResult lag = cmd_simulate(c);
  CHECK(lag.exit == ExitCode::kLag);
  const auto& r = std::get<SimulateReport>(lag.report);
  CHECK(r.lag == "batch_prover_lag");
  REQUIRE(r.lag_time_s.has_value());
  CHECK(*r.lag_time_s == 1718.2);

  c.fleet.reset();
  c.fleet_source = FleetSource::kBaseline;
  CHECK(cmd_simulate(c).exit == ExitCode::kOk);

  c.days = 0;
  const CommandResult empty = cmd_simulate(c);
  CHECK(empty.exit == ExitCode::kOk);
  CHECK(std::get<SimulateReport>(empty.report).bundle_epochs == 0);
}

TEST_CASE("simulate writes a trace file") {
  const auto path = std::filesystem::temp_directory_path() / "provesizer_trace_test.tsv";
  RunConfig c;
  c.scenario = "steady";
  c.days = 1;
  c.trace_path = path.string();
  CHECK(cmd_simulate(c).exit == ExitCode::kOk);
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  CHECK(header.rfind("time_s", 0) == 0);
  std::filesystem::remove(path);
}

TEST_CASE("scenarios listing and rendering") {
  RunConfig c;
  const CommandResult r = cmd_scenarios(c);
  const auto& s = std::get<ScenariosReport>(r.report);
  CHECK(s.machines.size() == 2);
  CHECK(s.scenarios.size() == 4);

  const std::string csv = render(r.report, Format::kCsv);
  CHECK(csv.rfind("kind,name,label", 0) == 0);
  CHECK(csv.find("scenario,blob-spike") != std::string::npos);

  const std::string md = render(r.report, Format::kMarkdown);
  CHECK(md.rfind("| kind |", 0) == 0);
  CHECK(md.find("| --- |") != std::string::npos);

  CHECK(report_from_json(Json::parse(render(r.report, Format::kJson))) == r.report);
}

TEST_CASE("report JSON round trip") {
  RunConfig c;
  c.scenario = "surge";
  const Report derive = cmd_derive(c).report;
  CHECK(report_from_json(to_json(derive)) == derive);

  c.days = 2;
  c.fleet = DerivedConfig{1245, 15, 2, 1718.2, 1718.2};
  const Report sim = cmd_simulate(c).report;
  CHECK(report_from_json(to_json(sim)) == sim);

  OptimizeRow row;
  row.scenario = "steady";
  row.machine = "gpu-8xl4";
  row.tps = 0.1;
  row.mode = "fixed_fleet";
  row.status = "timeout";
  row.solver = "Z3 4.13";
  row.baseline_config = DerivedConfig{2, 1, 1, 1718.2, 1718.2};
  row.config = DerivedConfig{2, 1, 1, 6000, 7000};
  row.validation = ValidationSummary{"none", 14000.5, 371, 30};
  const Report opt = OptimizeReport{"compare", {row}};
  CHECK(report_from_json(to_json(opt)) == opt);
  CHECK(render(opt, Format::kCsv).find("steady,0.1,2/1/1,fixed_fleet,timeout") !=
        std::string::npos);
}

TEST_CASE("report rounding") {
  CHECK(round_cents(1.005) == doctest::Approx(1.0).epsilon(0.011));
  CHECK(round_cents(22060.254) == 22060.25);
  const DerivedConfig c = round_epochs(DerivedConfig{1, 1, 1, 5771.2049, 7035.1951});
  CHECK(c.batch_epoch_s == 5771.2);
  CHECK(c.bundle_epoch_s == 7035.2);
  CostBreakdown k;
  k.da_usd_month = 0.004;
  k.verification_usd_month = 0.004;
  k.machine_usd_month = 1;
  const CostBreakdown r = round_cost(k);
  CHECK(r.total_usd_month == r.da_usd_month + r.verification_usd_month + r.machine_usd_month);
}

TEST_CASE("optimize command on the Steady fleet") {
  RunConfig c;
  c.scenario = "steady";
  c.fixed_fleet = true;
  c.solver.endpoint = testing::test_solver();
  c.solver.timeout_s = 120;
  const CommandResult r = cmd_optimize(c);
  CHECK(r.exit == ExitCode::kOk);
  const auto& rows = std::get<OptimizeReport>(r.report).rows;
  REQUIRE(rows.size() == 1);
  const OptimizeRow& row = rows[0];
  CHECK(row.status == "optimal");
  REQUIRE(row.config.has_value());
  CHECK(row.config->n_super == 2);
  CHECK(row.config->n_batch == 1);
  CHECK(row.config->n_bundle == 1);
  REQUIRE(row.reduction.has_value());
  CHECK(row.reduction->reduction_pct == doctest::Approx(70).epsilon(0.05));
  REQUIRE(row.validation.has_value());
  CHECK(row.validation->lag == "none");
  CHECK(row.validation->max_finality_s <= 14400);
}
