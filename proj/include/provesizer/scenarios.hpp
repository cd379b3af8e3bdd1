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

#ifndef PROVESIZER_SCENARIOS_HPP_
#define PROVESIZER_SCENARIOS_HPP_

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "provesizer/json_io.hpp"
#include "provesizer/params.hpp"

namespace provesizer {

struct MachineSpec {
  std::string name;
  std::string label;
  double monthly_cost_usd = 0.0;
  double t_super_s = 0.0;
  double t_batch_s = 0.0;
  double t_bundle_s = 0.0;
  double memory_gb = 0.0;

  bool operator==(const MachineSpec&) const = default;
};

// A row of a published results table. Epochs are 0 when the table has none.
struct ExpectedRow {
  DerivedConfig fleet;
  CostBreakdown cost;  // only the four monthly totals are filled
  std::optional<double> reduction_pct;

  bool operator==(const ExpectedRow&) const = default;
};

struct Scenario {
  std::string name;
  std::string label;
  double tps = 0.0;
  DaModel da_model;
  double gas_price_gwei = 0.0;
  double eth_price_usd = 0.0;
  std::int64_t gas_verification_per_bundle = 0;
  std::optional<double> quoted_blob_fee_usd;  // metadata only
  std::optional<ExpectedRow> expected_baseline;
  std::optional<ExpectedRow> expected_optimized;

  bool operator==(const Scenario&) const = default;
};

/// One monthly L1 cell: `units_per_epoch` submissions every `epoch_s`.
struct CalibrationRow {
  std::string source;
  double monthly_usd = 0.0;
  double epoch_s = 0.0;
  double units_per_epoch = 1.0;

  bool operator==(const CalibrationRow&) const = default;
};

struct Catalog {
  std::vector<MachineSpec> machines;
  std::vector<Scenario> scenarios;
  std::string default_machine;
  std::map<std::string, std::vector<CalibrationRow>> calibration;
};

/// The catalog shipped in data/, compiled into the library.
const Catalog& builtin_catalog();

/// Parses machines and/or scenarios documents; unknown keys are errors.
Catalog parse_catalog(const Json& machines_doc, const Json& scenarios_doc);

/// Entries in `overrides` replace same-named entries of `base`; new names
/// are appended in their file order.
Catalog merge_catalog(const Catalog& base, const Catalog& overrides);

/// The shipped machines followed by `user` entries, merged by name.
std::vector<MachineSpec> machine_catalog(const std::vector<MachineSpec>& user = {});

const MachineSpec& find_machine(const Catalog& catalog, std::string_view name);
const Scenario& find_scenario(const Catalog& catalog, std::string_view name);

/// Scenario economics on `machine` timings; every tier priced at the
/// machine's monthly fee. Other fields come from `base`.
PipelineParams to_params(const Scenario& scenario, const MachineSpec& machine,
                         const PipelineParams& base = {});

struct BaselineOptions {
  // "one batch prover per 45 super provers, exactly one bundle prover".
  bool literal_policy = false;
};

/// Naive linear sizing with both epochs at t_batch. Throws
/// Error(kFinalityInfeasible) when t_super + 2 t_batch exceeds the target,
/// since counts cannot shorten the epochs.
DerivedConfig baseline_policy(const PipelineParams& params,
                              const BaselineOptions& options = {});

struct UnitCostFit {
  double usd_per_unit = 0.0;
  std::vector<double> relative_residuals;  // (fit - cell) / cell, row order
  double max_abs_residual = 0.0;
};

/// Least squares on relative error of monthly = x * units * month / epoch.
/// Throws Error(kInsufficientRows) without at least one usable row.
UnitCostFit back_derive_unit_cost(const std::vector<CalibrationRow>& rows,
                                  double month_seconds = 2'592'000.0);

struct UnitCosts {
  UnitCostFit da;
  UnitCostFit verification;
};

/// Fits the DA and verification groups separately.
UnitCosts back_derive_unit_costs(const std::vector<CalibrationRow>& da_rows,
                                 const std::vector<CalibrationRow>& verification_rows,
                                 double month_seconds = 2'592'000.0);

struct ReductionReport {
  double before_usd = 0.0;
  double after_usd = 0.0;
  double reduction_pct = 0.0;  // one decimal

  bool operator==(const ReductionReport&) const = default;
};

/// Throws Error(kInvalidParameter) unless both totals are positive.
ReductionReport compare(const CostBreakdown& baseline, const CostBreakdown& optimized);

Json to_json(const MachineSpec& machine);
MachineSpec machine_from_json(const Json& j, std::string_view where);
Json to_json(const Scenario& scenario);
Scenario scenario_from_json(const Json& j, std::string_view where);

}  // namespace provesizer

#endif  // PROVESIZER_SCENARIOS_HPP_
