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

#ifndef PROVESIZER_COST_MODEL_HPP_
#define PROVESIZER_COST_MODEL_HPP_

#include <cstdint>
#include <optional>

#include "provesizer/params.hpp"

namespace provesizer {

// Peak resident memory per proving step, GB.
inline constexpr double kSuperMemoryGb = 140.65;
inline constexpr double kBatchMemoryGb = 138.37;
inline constexpr double kBundleMemoryGb = 48.30;

// Slack used when comparing or rounding derived epoch values (seconds).
inline constexpr double kEpochToleranceS = 1e-6;

// Ceil/floor that ignore floating noise of ~1e-9 relative around integers.
std::int64_t ceil_count(double x);
std::int64_t floor_count(double x);

std::int64_t derive_num_super_provers(double tps, double t_super_s,
                                      std::int64_t tx_max_per_super);

/// Batch epoch: the time to gather enough super proofs for a batch, capped
/// so that super proving, batching and bundling fit the finality target.
/// Throws kFinalityInfeasible when the cap leaves less than one batch proof.
double derive_batch_epoch(const PipelineParams& params, std::int64_t n_super);

/// Super proofs demanded over one epoch (real; ceiling it for a count).
double super_proof_demand_per_epoch(double tps, double epoch_s,
                                    std::int64_t tx_max_per_super);

std::int64_t derive_num_batch_provers(double demand_proofs,
                                      std::int64_t max_super_proofs_per_batch,
                                      double batch_epoch_s, double t_batch_s);

double derive_bundle_epoch(const PipelineParams& params, double batch_epoch_s,
                           std::int64_t n_batch);

double batches_per_bundle_epoch(double bundle_epoch_s, double batch_epoch_s);

std::int64_t derive_num_bundle_provers(double batch_proof_demand,
                                       std::int64_t max_batch_proofs_per_bundle,
                                       double bundle_epoch_s,
                                       double t_bundle_s);

/// Batch proofs produced in one batch epoch: ⌈⌈demand⌉ / max_spb⌉.
std::int64_t batch_proofs_per_batch_epoch(const PipelineParams& params,
                                          double batch_epoch_s);

/// Worst-case batch proofs landing inside one bundle epoch: every batch tick
/// that can fall in the interval contributes a full batch-epoch output.
std::int64_t batch_proof_demand_per_bundle_epoch(const PipelineParams& params,
                                                 double batch_epoch_s,
                                                 double bundle_epoch_s);

DerivedConfig derive_config(const PipelineParams& params);

double da_cost_per_batch(const DaModel& da_model, double gas_price_gwei,
                         double eth_price_usd);

double verification_cost_per_bundle(std::int64_t gas_verification_per_bundle,
                                    double gas_price_gwei,
                                    double eth_price_usd);

/// Monthly L1 and machine cost of running `config`. Each batch prover
/// submits one DA payload per batch epoch and each bundle prover one
/// verification per bundle epoch.
CostBreakdown monthly_cost(const PipelineParams& params,
                           const DerivedConfig& config);

CostBreakdown scale_cost(const CostBreakdown& cost, double factor);

struct MemoryCapacity {
  double super_gb = 0.0;
  double batch_gb = 0.0;
  double bundle_gb = 0.0;
};

enum class Feasibility { kOk, kFinalityInfeasible, kMemoryInfeasible };

Feasibility check_feasibility(
    const PipelineParams& params,
    const std::optional<MemoryCapacity>& memory = std::nullopt);

// Throughput, capacity and finality checks used by tests, the optimizer and
// the oracle.
bool satisfies_finality(const PipelineParams& params,
                        const DerivedConfig& config);
bool satisfies_batch_capacity(const PipelineParams& params,
                              const DerivedConfig& config);
bool satisfies_bundle_capacity(const PipelineParams& params,
                               const DerivedConfig& config);
bool satisfies_super_throughput(const PipelineParams& params,
                                std::int64_t n_super);

}  // namespace provesizer

#endif  // PROVESIZER_COST_MODEL_HPP_
