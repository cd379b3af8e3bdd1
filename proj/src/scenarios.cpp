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

#include "provesizer/scenarios.hpp"

#include <algorithm>
#include <cmath>

#include "provesizer/cost_model.hpp"
#include "provesizer/error.hpp"

namespace provesizer {

namespace detail {
extern const char kMachinesJson[];
extern const char kScenariosJson[];
}  // namespace detail

namespace {

// The published policy: "one per 45 chunk provers".
constexpr std::int64_t kLiteralSupersPerBatch = 45;

template <typename T>
void merge_by_name(std::vector<T>& base, const std::vector<T>& extra) {
  for (const auto& e : extra) {
    auto it = std::find_if(base.begin(), base.end(),
                           [&](const T& b) { return b.name == e.name; });
    if (it != base.end()) {
      *it = e;
    } else {
      base.push_back(e);
    }
  }
}

Json expected_to_json(const ExpectedRow& r) {
  Json j = {{"fleet",
             {{"n_super", r.fleet.n_super},
              {"n_batch", r.fleet.n_batch},
              {"n_bundle", r.fleet.n_bundle}}}};
  if (r.fleet.batch_epoch_s > 0.0) j["batch_epoch_s"] = r.fleet.batch_epoch_s;
  if (r.fleet.bundle_epoch_s > 0.0) j["bundle_epoch_s"] = r.fleet.bundle_epoch_s;
  j["da_usd_month"] = r.cost.da_usd_month;
  j["verification_usd_month"] = r.cost.verification_usd_month;
  j["machine_usd_month"] = r.cost.machine_usd_month;
  j["total_usd_month"] = r.cost.total_usd_month;
  if (r.reduction_pct) j["reduction_pct"] = *r.reduction_pct;
  return j;
}

ExpectedRow expected_from_json(const Json& j, const std::string& where) {
  require_keys(j,
               {"fleet", "batch_epoch_s", "bundle_epoch_s", "da_usd_month",
                "verification_usd_month", "machine_usd_month", "total_usd_month",
                "reduction_pct"},
               where);
  ExpectedRow r;
  const Json& f = j.contains("fleet") ? j["fleet"] : Json::object();
  require_keys(f, {"n_super", "n_batch", "n_bundle"}, where + ".fleet");
  r.fleet.n_super = get_integer(f, "n_super", where + ".fleet");
  r.fleet.n_batch = get_integer(f, "n_batch", where + ".fleet");
  r.fleet.n_bundle = get_integer(f, "n_bundle", where + ".fleet");
  if (j.contains("batch_epoch_s")) {
    r.fleet.batch_epoch_s = get_number(j, "batch_epoch_s", where);
  }
  if (j.contains("bundle_epoch_s")) {
    r.fleet.bundle_epoch_s = get_number(j, "bundle_epoch_s", where);
  }
  r.cost.da_usd_month = get_number(j, "da_usd_month", where);
  r.cost.verification_usd_month = get_number(j, "verification_usd_month", where);
  r.cost.machine_usd_month = get_number(j, "machine_usd_month", where);
  r.cost.total_usd_month = get_number(j, "total_usd_month", where);
  if (j.contains("reduction_pct")) {
    r.reduction_pct = get_number(j, "reduction_pct", where);
  }
  return r;
}

CalibrationRow calibration_from_json(const Json& j, const std::string& where) {
  require_keys(j, {"source", "monthly_usd", "epoch_s", "units_per_epoch"}, where);
  CalibrationRow r;
  r.source = get_string(j, "source", where);
  r.monthly_usd = get_number(j, "monthly_usd", where);
  r.epoch_s = get_number(j, "epoch_s", where);
  if (j.contains("units_per_epoch")) {
    r.units_per_epoch = get_number(j, "units_per_epoch", where);
  }
  return r;
}

}  // namespace

Json to_json(const MachineSpec& m) {
  return {{"name", m.name},
          {"label", m.label},
          {"monthly_cost_usd", m.monthly_cost_usd},
          {"t_super_s", m.t_super_s},
          {"t_batch_s", m.t_batch_s},
          {"t_bundle_s", m.t_bundle_s},
          {"memory_gb", m.memory_gb}};
}

MachineSpec machine_from_json(const Json& j, std::string_view where) {
  require_keys(j,
               {"name", "label", "monthly_cost_usd", "t_super_s", "t_batch_s",
                "t_bundle_s", "memory_gb"},
               where);
  MachineSpec m;
  m.name = get_string(j, "name", where);
  m.label = j.contains("label") ? get_string(j, "label", where) : m.name;
  m.monthly_cost_usd = get_number(j, "monthly_cost_usd", where);
  m.t_super_s = get_number(j, "t_super_s", where);
  m.t_batch_s = get_number(j, "t_batch_s", where);
  m.t_bundle_s = get_number(j, "t_bundle_s", where);
  m.memory_gb = get_number(j, "memory_gb", where);
  if (!(m.monthly_cost_usd > 0.0 && m.t_super_s > 0.0 && m.t_batch_s > 0.0 &&
        m.t_bundle_s > 0.0 && m.memory_gb > 0.0)) {
    throw Error(ErrorCode::kInvalidConfig,
                std::string(where) + ": machine fields must be positive");
  }
  return m;
}

Json to_json(const Scenario& s) {
  Json j = {{"name", s.name},
            {"label", s.label},
            {"tps", s.tps},
            {"da_model", to_json(s.da_model)}};
  if (s.quoted_blob_fee_usd) j["quoted_blob_fee_usd"] = *s.quoted_blob_fee_usd;
  j["gas_price_gwei"] = s.gas_price_gwei;
  j["eth_price_usd"] = s.eth_price_usd;
  j["gas_verification_per_bundle"] = s.gas_verification_per_bundle;
  if (s.expected_baseline) j["expected_baseline"] = expected_to_json(*s.expected_baseline);
  if (s.expected_optimized) {
    j["expected_optimized"] = expected_to_json(*s.expected_optimized);
  }
  return j;
}

Scenario scenario_from_json(const Json& j, std::string_view where_view) {
  const std::string where(where_view);
  require_keys(j,
               {"name", "label", "tps", "da_model", "quoted_blob_fee_usd",
                "gas_price_gwei", "eth_price_usd", "gas_verification_per_bundle",
                "expected_baseline", "expected_optimized"},
               where);
  Scenario s;
  s.name = get_string(j, "name", where);
  s.label = j.contains("label") ? get_string(j, "label", where) : s.name;
  s.tps = get_number(j, "tps", where);
  if (!j.contains("da_model")) {
    throw Error(ErrorCode::kInvalidConfig, where + ": missing key 'da_model'");
  }
  s.da_model = da_model_from_json(j["da_model"], where + ".da_model");
  if (j.contains("quoted_blob_fee_usd")) {
    s.quoted_blob_fee_usd = get_number(j, "quoted_blob_fee_usd", where);
  }
  s.gas_price_gwei = get_number(j, "gas_price_gwei", where);
  s.eth_price_usd = get_number(j, "eth_price_usd", where);
  s.gas_verification_per_bundle = get_integer(j, "gas_verification_per_bundle", where);
  if (j.contains("expected_baseline")) {
    s.expected_baseline =
        expected_from_json(j["expected_baseline"], where + ".expected_baseline");
  }
  if (j.contains("expected_optimized")) {
    s.expected_optimized =
        expected_from_json(j["expected_optimized"], where + ".expected_optimized");
  }
  return s;
}

Catalog parse_catalog(const Json& machines_doc, const Json& scenarios_doc) {
  Catalog c;
  if (!machines_doc.is_null()) {
    require_keys(machines_doc, {"machines"}, "machines");
    if (machines_doc.contains("machines")) {
      const Json& list = machines_doc["machines"];
      if (!list.is_array()) {
        throw Error(ErrorCode::kInvalidConfig, "machines: expected an array");
      }
      for (std::size_t i = 0; i < list.size(); ++i) {
        merge_by_name(c.machines, {machine_from_json(
                                      list[i], "machines[" + std::to_string(i) + "]")});
      }
    }
  }
  if (!scenarios_doc.is_null()) {
    require_keys(scenarios_doc, {"default_machine", "scenarios", "calibration"},
                 "scenarios");
    if (scenarios_doc.contains("default_machine")) {
      c.default_machine = get_string(scenarios_doc, "default_machine", "scenarios");
    }
    if (scenarios_doc.contains("scenarios")) {
      const Json& list = scenarios_doc["scenarios"];
      if (!list.is_array()) {
        throw Error(ErrorCode::kInvalidConfig, "scenarios: expected an array");
      }
      for (std::size_t i = 0; i < list.size(); ++i) {
        merge_by_name(c.scenarios, {scenario_from_json(
                                       list[i], "scenarios[" + std::to_string(i) + "]")});
      }
    }
    if (scenarios_doc.contains("calibration")) {
      const Json& groups = scenarios_doc["calibration"];
      if (!groups.is_object()) {
        throw Error(ErrorCode::kInvalidConfig, "calibration: expected an object");
      }
      for (const auto& [group, rows] : groups.items()) {
        const std::string where = "calibration." + group;
        if (!rows.is_array()) {
          throw Error(ErrorCode::kInvalidConfig, where + ": expected an array");
        }
        auto& out = c.calibration[group];
        for (std::size_t i = 0; i < rows.size(); ++i) {
          out.push_back(calibration_from_json(rows[i], where + "[" + std::to_string(i) + "]"));
        }
      }
    }
  }
  return c;
}

const Catalog& builtin_catalog() {
  static const Catalog catalog = parse_catalog(Json::parse(detail::kMachinesJson),
                                               Json::parse(detail::kScenariosJson));
  return catalog;
}

Catalog merge_catalog(const Catalog& base, const Catalog& overrides) {
  Catalog out = base;
  merge_by_name(out.machines, overrides.machines);
  merge_by_name(out.scenarios, overrides.scenarios);
  if (!overrides.default_machine.empty()) out.default_machine = overrides.default_machine;
  for (const auto& [group, rows] : overrides.calibration) out.calibration[group] = rows;
  return out;
}

std::vector<MachineSpec> machine_catalog(const std::vector<MachineSpec>& user) {
  std::vector<MachineSpec> out = builtin_catalog().machines;
  merge_by_name(out, user);
  return out;
}

const MachineSpec& find_machine(const Catalog& catalog, std::string_view name) {
  for (const auto& m : catalog.machines) {
    if (m.name == name) return m;
  }
  throw Error(ErrorCode::kUnknownMachine, "unknown machine '" + std::string(name) + "'");
}

const Scenario& find_scenario(const Catalog& catalog, std::string_view name) {
  for (const auto& s : catalog.scenarios) {
    if (s.name == name) return s;
  }
  throw Error(ErrorCode::kUnknownScenario,
              "unknown scenario '" + std::string(name) + "'");
}

PipelineParams to_params(const Scenario& s, const MachineSpec& m,
                         const PipelineParams& base) {
  PipelineParams p = base;
  p.tps = s.tps;
  p.da_model = s.da_model;
  p.gas_price_gwei = s.gas_price_gwei;
  p.eth_price_usd = s.eth_price_usd;
  p.gas_verification_per_bundle = s.gas_verification_per_bundle;
  p.t_super_s = m.t_super_s;
  p.t_batch_s = m.t_batch_s;
  p.t_bundle_s = m.t_bundle_s;
  p.machine_cost_usd_month = {m.monthly_cost_usd, m.monthly_cost_usd, m.monthly_cost_usd};
  return p;
}

DerivedConfig baseline_policy(const PipelineParams& p, const BaselineOptions& options) {
  validate(p);
  if (p.t_super_s + 2.0 * p.t_batch_s > p.target_finality_s + kEpochToleranceS) {
    throw Error(ErrorCode::kFinalityInfeasible,
                "baseline epochs at t_batch exceed the finality target");
  }
  DerivedConfig c;
  c.batch_epoch_s = p.t_batch_s;
  c.bundle_epoch_s = p.t_batch_s;
  c.n_super = derive_num_super_provers(p.tps, p.t_super_s, p.tx_max_per_super);
  if (options.literal_policy) {
    c.n_batch = (c.n_super + kLiteralSupersPerBatch - 1) / kLiteralSupersPerBatch;
    c.n_bundle = 1;
    return c;
  }
  c.n_batch = batch_proofs_per_batch_epoch(p, p.t_batch_s);
  c.n_bundle = std::max<std::int64_t>(
      1, (c.n_batch + p.max_batch_proofs_per_bundle - 1) / p.max_batch_proofs_per_bundle);
  return c;
}

UnitCostFit back_derive_unit_cost(const std::vector<CalibrationRow>& rows,
                                  double month_seconds) {
  // minimise sum ((x u_i - y_i) / y_i)^2  =>  x = sum(u/y) / sum((u/y)^2)
  double num = 0.0;
  double den = 0.0;
  std::vector<double> ratio;
  for (const auto& r : rows) {
    if (!(r.monthly_usd > 0.0 && r.epoch_s > 0.0 && r.units_per_epoch > 0.0)) {
      throw Error(ErrorCode::kInvalidParameter,
                  "calibration row '" + r.source + "' needs positive values");
    }
    const double units = r.units_per_epoch * month_seconds / r.epoch_s;
    ratio.push_back(units / r.monthly_usd);
    num += ratio.back();
    den += ratio.back() * ratio.back();
  }
  if (rows.empty() || den == 0.0) {
    throw Error(ErrorCode::kInsufficientRows, "no calibration rows to fit");
  }
  UnitCostFit fit;
  fit.usd_per_unit = num / den;
  for (double q : ratio) {
    fit.relative_residuals.push_back(fit.usd_per_unit * q - 1.0);
    fit.max_abs_residual =
        std::max(fit.max_abs_residual, std::abs(fit.relative_residuals.back()));
  }
  return fit;
}

UnitCosts back_derive_unit_costs(const std::vector<CalibrationRow>& da_rows,
                                 const std::vector<CalibrationRow>& verification_rows,
                                 double month_seconds) {
  return {back_derive_unit_cost(da_rows, month_seconds),
          back_derive_unit_cost(verification_rows, month_seconds)};
}

ReductionReport compare(const CostBreakdown& baseline, const CostBreakdown& optimized) {
  if (!(baseline.total_usd_month > 0.0) || !(optimized.total_usd_month > 0.0)) {
    throw Error(ErrorCode::kInvalidParameter, "compare needs positive totals");
  }
  ReductionReport r;
  r.before_usd = baseline.total_usd_month;
  r.after_usd = optimized.total_usd_month;
  r.reduction_pct = std::round((1.0 - r.after_usd / r.before_usd) * 1000.0) / 10.0;
  return r;
}

}  // namespace provesizer
