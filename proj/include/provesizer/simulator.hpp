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

#ifndef PROVESIZER_SIMULATOR_HPP_
#define PROVESIZER_SIMULATOR_HPP_

#include <cstdint>
#include <iosfwd>
#include <string_view>
#include <variant>
#include <vector>

#include "provesizer/params.hpp"
#include "provesizer/scenarios.hpp"

namespace provesizer {

struct SimState {
  double simulation_time_s = 0.0;
  std::int64_t e_batch = 0;
  std::int64_t e_bundle = 0;
  double proof_pool = 0.0;  // super proofs, fractional between ticks
  double batch_pool = 0.0;  // batch proofs
  std::int64_t bundles_finalized = 0;
  double last_accumulation_time_s = 0.0;

  bool operator==(const SimState&) const = default;
};

struct NoLag {
  bool operator==(const NoLag&) const = default;
};
struct BatchProverLag {
  double time_s = 0.0;
  double pool_size = 0.0;
  bool operator==(const BatchProverLag&) const = default;
};
struct BundleProverLag {
  double time_s = 0.0;
  double pool_size = 0.0;
  bool operator==(const BundleProverLag&) const = default;
};
struct ThroughputViolation {
  bool operator==(const ThroughputViolation&) const = default;
};
using Lag = std::variant<NoLag, BatchProverLag, BundleProverLag, ThroughputViolation>;

std::string_view lag_name(const Lag& lag);
inline bool lag_free(const Lag& lag) { return std::holds_alternative<NoLag>(lag); }

struct SimTotals {
  double super_proofs_accumulated = 0.0;
  double super_proofs_consumed = 0.0;
  std::int64_t batch_proofs_produced = 0;
  std::int64_t batch_proofs_consumed = 0;
  std::int64_t bundles_produced = 0;

  bool operator==(const SimTotals&) const = default;
};

struct SimulationResult {
  Lag lag;
  std::int64_t bundle_epochs_completed = 0;
  std::int64_t batch_epochs_completed = 0;
  double max_observed_finality_s = 0.0;
  SimTotals totals;
  SimState final_state;
  CostBreakdown cost;  // pro-rated to final_state.simulation_time_s

  bool operator==(const SimulationResult&) const = default;
};

struct SimOptions {
  // Use the literal lag predicate n * max_proofs, without the rounds factor.
  bool strict_paper_lag = false;
  // One tab-separated line per event when non-null.
  std::ostream* trace = nullptr;
};

/// Ok iff tps * t_super <= n_super * tx_max.
Lag throughput_guard(const PipelineParams& params, const DerivedConfig& config);

/// Event loop over batch and bundle ticks until `max_bundle_epochs` bundle
/// ticks have run or a lag is detected. Throws Error(kInvalidConfig) for
/// non-positive epochs.
SimulationResult simulate(const PipelineParams& params,
                          const DerivedConfig& config,
                          std::int64_t max_bundle_epochs,
                          const SimOptions& options = {});

/// Bundle ticks covering `days` days: ceil(days * 86400 / bundle_epoch).
std::int64_t bundle_epochs_for_days(double days, double bundle_epoch_s);

/// Simulates `days` of `scenario` on `machine` timings with `config`; the
/// result carries the cost pro-rated to the simulated span.
SimulationResult replay_scenario(const Scenario& scenario, const MachineSpec& machine,
                                 const DerivedConfig& config, double days,
                                 const SimOptions& options = {},
                                 const PipelineParams& base = {});

/// Name lookup variant; throws Error(kUnknownScenario / kUnknownMachine).
SimulationResult replay_scenario(const Catalog& catalog, std::string_view scenario,
                                 std::string_view machine, const DerivedConfig& config,
                                 double days, const SimOptions& options = {});

struct SimulationJob {
  PipelineParams params;
  DerivedConfig config;
  std::int64_t max_bundle_epochs = 0;
  bool strict_paper_lag = false;
};

/// Independent runs spread over OpenMP threads; output order matches input.
std::vector<SimulationResult> simulate_all(const std::vector<SimulationJob>& jobs);
std::vector<SimulationResult> simulate_all_serial(
    const std::vector<SimulationJob>& jobs);

}  // namespace provesizer

#endif  // PROVESIZER_SIMULATOR_HPP_
