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

#include "provesizer/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "provesizer/cost_model.hpp"

namespace provesizer::cli {

namespace {

[[noreturn]] void bad_config(const std::string& what) {
  throw Error(ErrorCode::kInvalidConfig, what);
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad_config("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    bad_config("'" + path + "' is not valid JSON: " + e.what());
  }
}

double round_to(double x, double scale) { return std::round(x * scale) / scale; }

std::optional<std::int64_t> opt_integer(const Json& j, const char* key,
                                        std::string_view where) {
  if (!j.contains(key)) return std::nullopt;
  return get_integer(j, key, where);
}

std::optional<double> opt_number(const Json& j, const char* key, std::string_view where) {
  if (!j.contains(key)) return std::nullopt;
  return get_number(j, key, where);
}

bool get_bool(const Json& j, const char* key, std::string_view where) {
  const Json& v = j[key];
  if (!v.is_boolean()) {
    bad_config(std::string(where) + ": '" + key + "' must be a boolean");
  }
  return v.get<bool>();
}

std::vector<std::string> get_string_list(const Json& j, const char* key,
                                         std::string_view where) {
  const Json& v = j[key];
  if (!v.is_array()) bad_config(std::string(where) + ": '" + key + "' must be an array");
  std::vector<std::string> out;
  for (const auto& item : v) {
    if (!item.is_string()) {
      bad_config(std::string(where) + ": '" + key + "' must hold strings");
    }
    out.push_back(item.get<std::string>());
  }
  return out;
}

struct Context {
  PipelineParams params;
  MachineSpec machine;
  std::string scenario;
};

const MachineSpec& resolve_machine(const RunConfig& c) {
  const std::string& name = c.machine.empty() ? c.catalog.default_machine : c.machine;
  return find_machine(c.catalog, name);
}

Context resolve(const RunConfig& c) {
  Context ctx;
  ctx.machine = resolve_machine(c);
  ctx.scenario = c.scenario.value_or("custom");
  ctx.params = resolve_params(c);
  const double mem = ctx.machine.memory_gb;
  const Feasibility f = check_feasibility(ctx.params, MemoryCapacity{mem, mem, mem});
  if (f == Feasibility::kFinalityInfeasible) {
    throw Error(ErrorCode::kFinalityInfeasible,
                "t_super + t_batch + t_bundle exceeds the finality target");
  }
  if (f == Feasibility::kMemoryInfeasible) {
    throw Error(ErrorCode::kMemoryInfeasible,
                "machine '" + ctx.machine.name + "' lacks memory for a proving step");
  }
  return ctx;
}

SearchBounds build_bounds(const RunConfig& c, const PipelineParams& p, bool fixed) {
  const SearchSettings& s = c.search;
  SearchBounds b;
  if (!fixed) b = default_bounds(p, s.epoch_granularity_s);
  b.epoch_granularity_s = s.epoch_granularity_s;
  if (s.max_super) b.super_count.hi = *s.max_super;
  if (s.max_batch) b.batch_count.hi = *s.max_batch;
  if (s.max_bundle) b.bundle_count.hi = *s.max_bundle;
  b.epoch_floor_s = s.epoch_floor_s;
  b.epoch_ceiling_s = s.epoch_ceiling_s;
  return b;
}

ExitCode worst(ExitCode a, ExitCode b) {
  return static_cast<int>(a) >= static_cast<int>(b) ? a : b;
}

ExitCode exit_for_status(SolveStatus s) {
  switch (s) {
    case SolveStatus::kOptimal:
    case SolveStatus::kFeasible: return ExitCode::kOk;
    case SolveStatus::kInfeasible: return ExitCode::kInfeasible;
    case SolveStatus::kTimeout: return ExitCode::kTimeout;
    case SolveStatus::kSolverError: return ExitCode::kUsage;
  }
  return ExitCode::kUsage;
}

struct RowResult {
  OptimizeRow row;
  ExitCode exit = ExitCode::kOk;
  std::string diagnostic;
};

RowResult optimize_row(const RunConfig& c, const Context& ctx, bool fixed) {
  RowResult out;
  OptimizeRow& row = out.row;
  row.scenario = ctx.scenario;
  row.machine = ctx.machine.name;
  row.tps = ctx.params.tps;
  row.mode = fixed ? "fixed_fleet" : "free_fleet";

  std::optional<DerivedConfig> baseline;
  try {
    baseline = baseline_policy(ctx.params, {c.literal_baseline});
    row.baseline_config = round_epochs(*baseline);
    row.baseline_cost = round_cost(monthly_cost(ctx.params, *baseline));
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kFinalityInfeasible) throw;
  }

  OptimizeMode mode = FreeFleet{};
  if (fixed) {
    DerivedConfig pinned;
    if (c.fleet) {
      pinned = *c.fleet;
    } else if (baseline) {
      pinned = *baseline;
    } else {
      pinned = derive_config(ctx.params);
    }
    mode = FixedFleet{pinned};
  }
  const OptimizeResult r =
      optimize(ctx.params, mode, c.solver.endpoint, c.solver.timeout_s,
               build_bounds(c, ctx.params, fixed));
  row.status = std::string(to_string(r.outcome.status));
  row.solver = r.outcome.solver_identity;
  out.exit = exit_for_status(r.outcome.status);
  if (!r.outcome.message.empty()) {
    out.diagnostic = ctx.scenario + ": " + r.outcome.message;
  }
  if (!r.config) return out;

  row.config = round_epochs(*r.config);
  row.cost = round_cost(*r.cost);
  if (row.baseline_cost && row.baseline_cost->total_usd_month > 0.0 &&
      row.cost->total_usd_month > 0.0) {
    row.reduction = compare(*row.baseline_cost, *row.cost);
  }
  SimOptions so;
  so.strict_paper_lag = c.strict_paper_lag;
  const SimulationResult sim = simulate(
      ctx.params, *r.config, bundle_epochs_for_days(c.days, r.config->bundle_epoch_s), so);
  ValidationSummary v;
  v.lag = std::string(lag_name(sim.lag));
  v.max_finality_s = round_to(sim.max_observed_finality_s, 100.0);
  v.bundle_epochs = sim.bundle_epochs_completed;
  v.days = c.days;
  row.validation = v;
  if (!lag_free(sim.lag)) out.exit = worst(out.exit, ExitCode::kLag);
  return out;
}

// --- rendering ----------------------------------------------------------------

std::string fixed2(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f", x);
  return buf;
}

std::string fixed1(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.1f", x);
  return buf;
}

std::string shortest(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", x);
  return buf;
}

std::string fleet_text(const DerivedConfig& c) {
  return std::to_string(c.n_super) + "/" + std::to_string(c.n_batch) + "/" +
         std::to_string(c.n_bundle);
}

std::string da_text(const DaModel& m) {
  return std::visit(
      [](const auto& v) -> std::string {
        using M = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<M, BlobDa>) {
          return "blob " + std::to_string(v.gas_da_per_batch) + " gas";
        } else if constexpr (std::is_same_v<M, CalldataDa>) {
          return "calldata " + std::to_string(v.batch_len_bytes) + " B x " +
                 std::to_string(v.gas_da_per_byte) + " gas";
        } else {
          return "flat $" + fixed2(v.usd);
        }
      },
      m);
}

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::string render_csv(const Table& t) {
  std::ostringstream out;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      out << (i ? "," : "") << csv_field(cells[i]);
    }
    out << '\n';
  };
  line(t.header);
  for (const auto& r : t.rows) line(r);
  return out.str();
}

std::string render_md(const Table& t) {
  std::ostringstream out;
  auto line = [&](const std::vector<std::string>& cells) {
    out << '|';
    for (const auto& c : cells) out << ' ' << c << " |";
    out << '\n';
  };
  line(t.header);
  out << '|';
  for (std::size_t i = 0; i < t.header.size(); ++i) out << " --- |";
  out << '\n';
  for (const auto& r : t.rows) line(r);
  return out.str();
}

Table table_of(const DeriveReport& r) {
  return {{"scenario", "machine", "tps", "n_super", "n_batch", "n_bundle",
           "batch_epoch_s", "bundle_epoch_s", "da_usd_month",
           "verification_usd_month", "machine_usd_month", "total_usd_month"},
          {{r.scenario, r.machine, shortest(r.tps), std::to_string(r.config.n_super),
            std::to_string(r.config.n_batch), std::to_string(r.config.n_bundle),
            fixed2(r.config.batch_epoch_s), fixed2(r.config.bundle_epoch_s),
            fixed2(r.cost.da_usd_month), fixed2(r.cost.verification_usd_month),
            fixed2(r.cost.machine_usd_month), fixed2(r.cost.total_usd_month)}}};
}

Table table_of(const OptimizeReport& r) {
  Table t{{"scenario", "tps", "fleet", "mode", "status", "batch_epoch_s",
           "da_usd_month", "bundle_epoch_s", "verification_usd_month",
           "machine_usd_month", "baseline_total_usd_month", "optimized_total_usd_month",
           "reduction_pct", "lag", "max_finality_s"},
          {}};
  for (const auto& row : r.rows) {
    const DerivedConfig fleet =
        row.config ? *row.config : row.baseline_config.value_or(DerivedConfig{});
    auto opt = [](const auto& o, auto f) { return o ? f(*o) : std::string(); };
    t.rows.push_back(
        {row.scenario, shortest(row.tps), fleet_text(fleet), row.mode, row.status,
         opt(row.config, [](const auto& c) { return fixed2(c.batch_epoch_s); }),
         opt(row.cost, [](const auto& c) { return fixed2(c.da_usd_month); }),
         opt(row.config, [](const auto& c) { return fixed2(c.bundle_epoch_s); }),
         opt(row.cost, [](const auto& c) { return fixed2(c.verification_usd_month); }),
         opt(row.cost, [](const auto& c) { return fixed2(c.machine_usd_month); }),
         opt(row.baseline_cost, [](const auto& c) { return fixed2(c.total_usd_month); }),
         opt(row.cost, [](const auto& c) { return fixed2(c.total_usd_month); }),
         opt(row.reduction, [](const auto& x) { return fixed1(x.reduction_pct); }),
         opt(row.validation, [](const auto& v) { return v.lag; }),
         opt(row.validation, [](const auto& v) { return fixed2(v.max_finality_s); })});
  }
  return t;
}

Table table_of(const SimulateReport& r) {
  return {{"scenario", "machine", "days", "fleet", "batch_epoch_s", "bundle_epoch_s",
           "lag", "lag_time_s", "bundle_epochs", "batch_epochs", "max_finality_s",
           "super_proofs", "batch_proofs", "bundles", "total_usd"},
          {{r.scenario, r.machine, shortest(r.days), fleet_text(r.config),
            fixed2(r.config.batch_epoch_s), fixed2(r.config.bundle_epoch_s), r.lag,
            r.lag_time_s ? fixed2(*r.lag_time_s) : std::string(),
            std::to_string(r.bundle_epochs), std::to_string(r.batch_epochs),
            fixed2(r.max_finality_s), fixed2(r.totals.super_proofs_accumulated),
            std::to_string(r.totals.batch_proofs_produced),
            std::to_string(r.totals.bundles_produced), fixed2(r.cost.total_usd_month)}}};
}

Table table_of(const ScenariosReport& r) {
  Table t{{"kind", "name", "label", "tps", "da_model", "monthly_cost_usd", "t_super_s",
           "t_batch_s", "t_bundle_s", "memory_gb"},
          {}};
  for (const auto& m : r.machines) {
    t.rows.push_back({"machine", m.name, m.label, "", "", shortest(m.monthly_cost_usd),
                      shortest(m.t_super_s), shortest(m.t_batch_s),
                      shortest(m.t_bundle_s), shortest(m.memory_gb)});
  }
  for (const auto& s : r.scenarios) {
    t.rows.push_back({"scenario", s.name, s.label, shortest(s.tps), da_text(s.da_model),
                      "", "", "", "", ""});
  }
  return t;
}

// --- report JSON ----------------------------------------------------------------

template <typename T, typename F>
void put_opt(Json& j, const char* key, const std::optional<T>& v, F f) {
  if (v) j[key] = f(*v);
}

Json to_json(const ReductionReport& r) {
  return {{"before_usd", r.before_usd},
          {"after_usd", r.after_usd},
          {"reduction_pct", r.reduction_pct}};
}

ReductionReport reduction_from_json(const Json& j, std::string_view where) {
  require_keys(j, {"before_usd", "after_usd", "reduction_pct"}, where);
  return {get_number(j, "before_usd", where), get_number(j, "after_usd", where),
          get_number(j, "reduction_pct", where)};
}

Json to_json(const ValidationSummary& v) {
  return {{"lag", v.lag},
          {"max_finality_s", v.max_finality_s},
          {"bundle_epochs", v.bundle_epochs},
          {"days", v.days}};
}

ValidationSummary validation_from_json(const Json& j, std::string_view where) {
  require_keys(j, {"lag", "max_finality_s", "bundle_epochs", "days"}, where);
  return {get_string(j, "lag", where), get_number(j, "max_finality_s", where),
          get_integer(j, "bundle_epochs", where), get_number(j, "days", where)};
}

Json to_json(const SimTotals& t) {
  return {{"super_proofs_accumulated", t.super_proofs_accumulated},
          {"super_proofs_consumed", t.super_proofs_consumed},
          {"batch_proofs_produced", t.batch_proofs_produced},
          {"batch_proofs_consumed", t.batch_proofs_consumed},
          {"bundles_produced", t.bundles_produced}};
}

SimTotals totals_from_json(const Json& j, std::string_view where) {
  require_keys(j,
               {"super_proofs_accumulated", "super_proofs_consumed",
                "batch_proofs_produced", "batch_proofs_consumed", "bundles_produced"},
               where);
  return {get_number(j, "super_proofs_accumulated", where),
          get_number(j, "super_proofs_consumed", where),
          get_integer(j, "batch_proofs_produced", where),
          get_integer(j, "batch_proofs_consumed", where),
          get_integer(j, "bundles_produced", where)};
}

Json row_to_json(const OptimizeRow& r) {
  Json j = {{"scenario", r.scenario}, {"machine", r.machine}, {"tps", r.tps},
            {"mode", r.mode},         {"status", r.status},   {"solver", r.solver}};
  auto cfg = [](const DerivedConfig& c) { return provesizer::to_json(c); };
  auto cost = [](const CostBreakdown& c) { return provesizer::to_json(c); };
  put_opt(j, "config", r.config, cfg);
  put_opt(j, "cost", r.cost, cost);
  put_opt(j, "baseline_config", r.baseline_config, cfg);
  put_opt(j, "baseline_cost", r.baseline_cost, cost);
  put_opt(j, "reduction", r.reduction, [](const auto& x) { return to_json(x); });
  put_opt(j, "validation", r.validation, [](const auto& x) { return to_json(x); });
  return j;
}

OptimizeRow row_from_json(const Json& j, const std::string& where) {
  require_keys(j,
               {"scenario", "machine", "tps", "mode", "status", "solver", "config",
                "cost", "baseline_config", "baseline_cost", "reduction", "validation"},
               where);
  OptimizeRow r;
  r.scenario = get_string(j, "scenario", where);
  r.machine = get_string(j, "machine", where);
  r.tps = get_number(j, "tps", where);
  r.mode = get_string(j, "mode", where);
  r.status = get_string(j, "status", where);
  r.solver = get_string(j, "solver", where);
  if (j.contains("config")) r.config = config_from_json(j["config"], where + ".config");
  if (j.contains("cost")) r.cost = cost_from_json(j["cost"], where + ".cost");
  if (j.contains("baseline_config")) {
    r.baseline_config = config_from_json(j["baseline_config"], where + ".baseline_config");
  }
  if (j.contains("baseline_cost")) {
    r.baseline_cost = cost_from_json(j["baseline_cost"], where + ".baseline_cost");
  }
  if (j.contains("reduction")) {
    r.reduction = reduction_from_json(j["reduction"], where + ".reduction");
  }
  if (j.contains("validation")) {
    r.validation = validation_from_json(j["validation"], where + ".validation");
  }
  return r;
}

}  // namespace

Format parse_format(std::string_view name) {
  if (name == "json") return Format::kJson;
  if (name == "csv") return Format::kCsv;
  if (name == "md") return Format::kMarkdown;
  bad_config("unknown format '" + std::string(name) + "'");
}

FleetSource parse_fleet_source(std::string_view name) {
  if (name == "derived") return FleetSource::kDerived;
  if (name == "baseline") return FleetSource::kBaseline;
  if (name == "optimized") return FleetSource::kOptimized;
  bad_config("unknown fleet source '" + std::string(name) + "'");
}

void apply_solver_command(SolverEndpoint& endpoint, const std::string& command_line) {
  std::istringstream in(command_line);
  std::vector<std::string> words;
  for (std::string w; in >> w;) words.push_back(w);
  if (words.empty()) bad_config("empty solver command");
  endpoint.command = words.front();
  endpoint.args.assign(words.begin() + 1, words.end());
}

RunConfig parse_run_config(const Json& doc, const std::string& base_dir) {
  require_keys(doc,
               {"pipeline", "machine", "scenario", "solver", "output", "search",
                "fleet", "catalog", "run"},
               "config");
  RunConfig c;
  namespace fs = std::filesystem;
  auto resolve_path = [&](const std::string& p) {
    return fs::path(p).is_absolute() ? p : (fs::path(base_dir) / p).string();
  };

  if (doc.contains("catalog")) {
    const Json& cat = doc["catalog"];
    require_keys(cat, {"machines", "scenarios"}, "catalog");
    Json machines = nullptr;
    Json scenarios = nullptr;
    if (cat.contains("machines")) {
      machines = read_json_file(resolve_path(get_string(cat, "machines", "catalog")));
    }
    if (cat.contains("scenarios")) {
      scenarios = read_json_file(resolve_path(get_string(cat, "scenarios", "catalog")));
    }
    c.catalog = merge_catalog(c.catalog, parse_catalog(machines, scenarios));
  }

  if (doc.contains("pipeline")) {
    c.pipeline = doc["pipeline"];
    params_from_json(c.pipeline, PipelineParams{}, "pipeline");  // key check
  }

  if (doc.contains("machine")) {
    const Json& m = doc["machine"];
    if (m.is_string()) {
      c.machine = m.get<std::string>();
    } else {
      c.inline_machine = machine_from_json(m, "machine");
      c.catalog = merge_catalog(c.catalog, Catalog{{*c.inline_machine}, {}, {}, {}});
      c.machine = c.inline_machine->name;
    }
  }
  if (doc.contains("scenario")) c.scenario = get_string(doc, "scenario", "config");

  if (doc.contains("solver")) {
    const Json& s = doc["solver"];
    require_keys(s, {"command", "args", "timeout_s", "options", "native_minimize"},
                 "solver");
    if (s.contains("command")) c.solver.endpoint.command = get_string(s, "command", "solver");
    if (s.contains("args")) c.solver.endpoint.args = get_string_list(s, "args", "solver");
    if (s.contains("timeout_s")) c.solver.timeout_s = get_number(s, "timeout_s", "solver");
    if (s.contains("options")) {
      c.solver.endpoint.options = get_string_list(s, "options", "solver");
    }
    if (s.contains("native_minimize")) {
      c.solver.endpoint.native_minimize = get_bool(s, "native_minimize", "solver");
    }
  }

  if (doc.contains("output")) {
    const Json& o = doc["output"];
    require_keys(o, {"format", "path"}, "output");
    if (o.contains("format")) c.format = parse_format(get_string(o, "format", "output"));
    if (o.contains("path")) c.output_path = get_string(o, "path", "output");
  }

  if (doc.contains("search")) {
    const Json& s = doc["search"];
    require_keys(s,
                 {"max_super", "max_batch", "max_bundle", "epoch_granularity_s",
                  "epoch_floor_s", "epoch_ceiling_s"},
                 "search");
    c.search.max_super = opt_integer(s, "max_super", "search");
    c.search.max_batch = opt_integer(s, "max_batch", "search");
    c.search.max_bundle = opt_integer(s, "max_bundle", "search");
    c.search.epoch_granularity_s =
        opt_number(s, "epoch_granularity_s", "search").value_or(1.0);
    c.search.epoch_floor_s = opt_number(s, "epoch_floor_s", "search");
    c.search.epoch_ceiling_s = opt_number(s, "epoch_ceiling_s", "search");
  }

  if (doc.contains("fleet")) c.fleet = config_from_json(doc["fleet"], "fleet");

  if (doc.contains("run")) {
    const Json& r = doc["run"];
    require_keys(r,
                 {"days", "fixed_fleet", "strict_paper_lag", "literal_baseline",
                  "fleet_source", "trace_path"},
                 "run");
    if (r.contains("days")) c.days = get_number(r, "days", "run");
    if (r.contains("fixed_fleet")) c.fixed_fleet = get_bool(r, "fixed_fleet", "run");
    if (r.contains("strict_paper_lag")) {
      c.strict_paper_lag = get_bool(r, "strict_paper_lag", "run");
    }
    if (r.contains("literal_baseline")) {
      c.literal_baseline = get_bool(r, "literal_baseline", "run");
    }
    if (r.contains("fleet_source")) {
      c.fleet_source = parse_fleet_source(get_string(r, "fleet_source", "run"));
    }
    if (r.contains("trace_path")) c.trace_path = get_string(r, "trace_path", "run");
  }
  return c;
}

RunConfig load_run_config(const std::string& path) {
  const auto dir = std::filesystem::path(path).parent_path();
  return parse_run_config(read_json_file(path), dir.empty() ? "." : dir.string());
}

PipelineParams resolve_params(const RunConfig& c) {
  const MachineSpec& machine = resolve_machine(c);
  PipelineParams p;
  if (c.scenario) {
    p = to_params(find_scenario(c.catalog, *c.scenario), machine);
  } else {
    p.t_super_s = machine.t_super_s;
    p.t_batch_s = machine.t_batch_s;
    p.t_bundle_s = machine.t_bundle_s;
    p.machine_cost_usd_month = {machine.monthly_cost_usd, machine.monthly_cost_usd,
                                machine.monthly_cost_usd};
  }
  p = params_from_json(c.pipeline, p, "pipeline");
  validate(p);
  return p;
}

double round_cents(double usd) { return round_to(usd, 100.0); }

CostBreakdown round_cost(const CostBreakdown& c) {
  CostBreakdown r;
  r.da_usd_month = round_cents(c.da_usd_month);
  r.verification_usd_month = round_cents(c.verification_usd_month);
  r.machine_usd_month = round_cents(c.machine_usd_month);
  // Total of the rounded parts, so the row adds up to the cent.
  r.total_usd_month =
      round_cents(r.da_usd_month + r.verification_usd_month + r.machine_usd_month);
  r.da_usd_per_batch = round_to(c.da_usd_per_batch, 1e4);
  r.verification_usd_per_bundle = round_to(c.verification_usd_per_bundle, 1e4);
  r.batches_per_month = round_to(c.batches_per_month, 100.0);
  r.bundles_per_month = round_to(c.bundles_per_month, 100.0);
  return r;
}

DerivedConfig round_epochs(const DerivedConfig& c) {
  DerivedConfig r = c;
  r.batch_epoch_s = round_to(c.batch_epoch_s, 100.0);
  r.bundle_epoch_s = round_to(c.bundle_epoch_s, 100.0);
  return r;
}

ExitCode exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kFinalityInfeasible:
    case ErrorCode::kMemoryInfeasible: return ExitCode::kInfeasible;
    default: return ExitCode::kUsage;
  }
}

CommandResult cmd_derive(const RunConfig& c) {
  const Context ctx = resolve(c);
  DeriveReport r;
  r.scenario = ctx.scenario;
  r.machine = ctx.machine.name;
  r.tps = ctx.params.tps;
  const DerivedConfig config = derive_config(ctx.params);
  r.config = round_epochs(config);
  r.cost = round_cost(monthly_cost(ctx.params, config));
  return {r, ExitCode::kOk, {}};
}

CommandResult cmd_optimize(const RunConfig& c) {
  const Context ctx = resolve(c);
  RowResult row = optimize_row(c, ctx, c.fixed_fleet);
  return {OptimizeReport{"optimize", {row.row}}, row.exit, row.diagnostic};
}

CommandResult cmd_compare(const RunConfig& c) {
  std::vector<std::string> names;
  if (c.scenario) {
    names.push_back(find_scenario(c.catalog, *c.scenario).name);
  } else {
    for (const auto& s : c.catalog.scenarios) names.push_back(s.name);
    std::sort(names.begin(), names.end());
  }
  CommandResult out{OptimizeReport{"compare", {}}, ExitCode::kOk, {}};
  auto& report = std::get<OptimizeReport>(out.report);
  for (const auto& name : names) {
    RunConfig one = c;
    one.scenario = name;
    // Tables juxtapose each baseline fleet with its re-timed self.
    RowResult row = optimize_row(one, resolve(one), true);
    report.rows.push_back(row.row);
    out.exit = worst(out.exit, row.exit);
    if (!row.diagnostic.empty()) {
      out.diagnostic += (out.diagnostic.empty() ? "" : "\n") + row.diagnostic;
    }
  }
  return out;
}

CommandResult cmd_simulate(const RunConfig& c) {
  const Context ctx = resolve(c);
  DerivedConfig config;
  std::string diagnostic;
  if (c.fleet) {
    config = *c.fleet;
  } else if (c.fleet_source == FleetSource::kBaseline) {
    config = baseline_policy(ctx.params, {c.literal_baseline});
  } else if (c.fleet_source == FleetSource::kOptimized) {
    RunConfig fixed = c;
    const RowResult row = optimize_row(fixed, ctx, true);
    if (!row.row.config) {
      const ExitCode code = row.exit == ExitCode::kOk ? ExitCode::kUsage : row.exit;
      return {SimulateReport{}, code, row.diagnostic};
    }
    config = *row.row.config;
    diagnostic = row.diagnostic;
  } else {
    config = derive_config(ctx.params);
  }

  SimOptions options;
  options.strict_paper_lag = c.strict_paper_lag;
  std::ofstream trace;
  if (c.trace_path) {
    trace.open(*c.trace_path);
    if (!trace) bad_config("cannot write trace '" + *c.trace_path + "'");
    options.trace = &trace;
  }
  const SimulationResult sim = simulate(
      ctx.params, config, bundle_epochs_for_days(c.days, config.bundle_epoch_s), options);

  SimulateReport r;
  r.scenario = ctx.scenario;
  r.machine = ctx.machine.name;
  r.days = c.days;
  r.strict_paper_lag = c.strict_paper_lag;
  r.config = round_epochs(config);
  r.lag = std::string(lag_name(sim.lag));
  if (const auto* b = std::get_if<BatchProverLag>(&sim.lag)) {
    r.lag_time_s = round_to(b->time_s, 100.0);
    r.lag_pool_size = round_to(b->pool_size, 100.0);
  } else if (const auto* u = std::get_if<BundleProverLag>(&sim.lag)) {
    r.lag_time_s = round_to(u->time_s, 100.0);
    r.lag_pool_size = round_to(u->pool_size, 100.0);
  }
  r.bundle_epochs = sim.bundle_epochs_completed;
  r.batch_epochs = sim.batch_epochs_completed;
  r.max_finality_s = round_to(sim.max_observed_finality_s, 100.0);
  r.totals = sim.totals;
  r.totals.super_proofs_accumulated = round_to(sim.totals.super_proofs_accumulated, 100.0);
  r.totals.super_proofs_consumed = round_to(sim.totals.super_proofs_consumed, 100.0);
  r.cost = round_cost(sim.cost);
  return {r, lag_free(sim.lag) ? ExitCode::kOk : ExitCode::kLag, diagnostic};
}

CommandResult cmd_scenarios(const RunConfig& c) {
  ScenariosReport r;
  r.machines = c.catalog.machines;
  r.scenarios = c.catalog.scenarios;
  if (c.scenario) r.scenarios = {find_scenario(c.catalog, *c.scenario)};
  return {r, ExitCode::kOk, {}};
}

Json to_json(const Report& report) {
  return std::visit(
      [](const auto& r) -> Json {
        using R = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<R, DeriveReport>) {
          return {{"command", "derive"},
                  {"scenario", r.scenario},
                  {"machine", r.machine},
                  {"tps", r.tps},
                  {"config", provesizer::to_json(r.config)},
                  {"cost", provesizer::to_json(r.cost)}};
        } else if constexpr (std::is_same_v<R, OptimizeReport>) {
          Json rows = Json::array();
          for (const auto& row : r.rows) rows.push_back(row_to_json(row));
          return {{"command", r.command}, {"rows", rows}};
        } else if constexpr (std::is_same_v<R, SimulateReport>) {
          Json j = {{"command", "simulate"},
                    {"scenario", r.scenario},
                    {"machine", r.machine},
                    {"days", r.days},
                    {"strict_paper_lag", r.strict_paper_lag},
                    {"config", provesizer::to_json(r.config)},
                    {"lag", r.lag}};
          put_opt(j, "lag_time_s", r.lag_time_s, [](double x) { return x; });
          put_opt(j, "lag_pool_size", r.lag_pool_size, [](double x) { return x; });
          j["bundle_epochs"] = r.bundle_epochs;
          j["batch_epochs"] = r.batch_epochs;
          j["max_finality_s"] = r.max_finality_s;
          j["totals"] = to_json(r.totals);
          j["cost"] = provesizer::to_json(r.cost);
          return j;
        } else {
          Json machines = Json::array();
          for (const auto& m : r.machines) machines.push_back(provesizer::to_json(m));
          Json scenarios = Json::array();
          for (const auto& s : r.scenarios) scenarios.push_back(provesizer::to_json(s));
          return {{"command", "scenarios"}, {"machines", machines}, {"scenarios", scenarios}};
        }
      },
      report);
}

Report report_from_json(const Json& j) {
  const std::string command = get_string(j, "command", "report");
  if (command == "derive") {
    require_keys(j, {"command", "scenario", "machine", "tps", "config", "cost"}, "report");
    DeriveReport r;
    r.scenario = get_string(j, "scenario", "report");
    r.machine = get_string(j, "machine", "report");
    r.tps = get_number(j, "tps", "report");
    r.config = config_from_json(j["config"], "report.config");
    r.cost = cost_from_json(j["cost"], "report.cost");
    return r;
  }
  if (command == "optimize" || command == "compare") {
    require_keys(j, {"command", "rows"}, "report");
    OptimizeReport r;
    r.command = command;
    const Json& rows = j["rows"];
    if (!rows.is_array()) bad_config("report.rows must be an array");
    for (std::size_t i = 0; i < rows.size(); ++i) {
      r.rows.push_back(row_from_json(rows[i], "report.rows[" + std::to_string(i) + "]"));
    }
    return r;
  }
  if (command == "simulate") {
    require_keys(j,
                 {"command", "scenario", "machine", "days", "strict_paper_lag", "config",
                  "lag", "lag_time_s", "lag_pool_size", "bundle_epochs", "batch_epochs",
                  "max_finality_s", "totals", "cost"},
                 "report");
    SimulateReport r;
    r.scenario = get_string(j, "scenario", "report");
    r.machine = get_string(j, "machine", "report");
    r.days = get_number(j, "days", "report");
    r.strict_paper_lag = get_bool(j, "strict_paper_lag", "report");
    r.config = config_from_json(j["config"], "report.config");
    r.lag = get_string(j, "lag", "report");
    r.lag_time_s = opt_number(j, "lag_time_s", "report");
    r.lag_pool_size = opt_number(j, "lag_pool_size", "report");
    r.bundle_epochs = get_integer(j, "bundle_epochs", "report");
    r.batch_epochs = get_integer(j, "batch_epochs", "report");
    r.max_finality_s = get_number(j, "max_finality_s", "report");
    r.totals = totals_from_json(j["totals"], "report.totals");
    r.cost = cost_from_json(j["cost"], "report.cost");
    return r;
  }
  if (command == "scenarios") {
    require_keys(j, {"command", "machines", "scenarios"}, "report");
    ScenariosReport r;
    for (const auto& m : j["machines"]) r.machines.push_back(machine_from_json(m, "report.machines"));
    for (const auto& s : j["scenarios"]) {
      r.scenarios.push_back(scenario_from_json(s, "report.scenarios"));
    }
    return r;
  }
  bad_config("unknown report command '" + command + "'");
}

std::string render(const Report& report, Format format) {
  if (format == Format::kJson) return to_json(report).dump(2) + "\n";
  const Table t = std::visit([](const auto& r) { return table_of(r); }, report);
  return format == Format::kCsv ? render_csv(t) : render_md(t);
}

}  // namespace provesizer::cli
