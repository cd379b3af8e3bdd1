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

#include "provesizer/cost_model.hpp"

#include <algorithm>
#include <cmath>

#include "provesizer/error.hpp"

namespace provesizer {

namespace {

constexpr double kCountRelTolerance = 1e-9;

bool near_integer(double x, double r) {
  return std::abs(x - r) <= kCountRelTolerance * std::max(1.0, std::abs(x));
}

// Snap derived epochs to a micro-second grid so that capped values such as
// 14400 - 12289.19 - 1592.81 land on 518 instead of 517.9999999999.
double snap_epoch(double x) { return std::round(x * 1e6) / 1e6; }

std::int64_t ceil_div(std::int64_t num, std::int64_t den) {
  return (num + den - 1) / den;
}

void require(bool ok, const char* what) {
  if (!ok) throw Error(ErrorCode::kInvalidParameter, what);
}

}  // namespace

std::int64_t ceil_count(double x) {
  const double r = std::round(x);
  if (near_integer(x, r)) return static_cast<std::int64_t>(r);
  return static_cast<std::int64_t>(std::ceil(x));
}

std::int64_t floor_count(double x) {
  const double r = std::round(x);
  if (near_integer(x, r)) return static_cast<std::int64_t>(r);
  return static_cast<std::int64_t>(std::floor(x));
}

void validate(const PipelineParams& p) {
  require(p.tps >= 0.0 && std::isfinite(p.tps), "tps must be non-negative");
  require(p.gas_per_tx > 0, "gas_per_tx must be positive");
  require(p.total_block_gas > 0, "total_block_gas must be positive");
  require(p.target_finality_s > 0.0, "target_finality_s must be positive");
  require(p.tx_max_per_super >= 1, "tx_max_per_super must be >= 1");
  require(p.max_super_proofs_per_batch >= 1,
          "max_super_proofs_per_batch must be >= 1");
  require(p.max_batch_proofs_per_bundle >= 1,
          "max_batch_proofs_per_bundle must be >= 1");
  require(p.t_super_s > 0.0 && p.t_batch_s > 0.0 && p.t_bundle_s > 0.0,
          "proof times must be positive");
  require(p.gas_verification_per_bundle >= 0,
          "gas_verification_per_bundle must be non-negative");
  require(p.gas_price_gwei >= 0.0, "gas_price_gwei must be non-negative");
  require(p.eth_price_usd >= 0.0, "eth_price_usd must be non-negative");
  require(p.machine_cost_usd_month.super_usd >= 0.0 &&
              p.machine_cost_usd_month.batch_usd >= 0.0 &&
              p.machine_cost_usd_month.bundle_usd >= 0.0,
          "machine costs must be non-negative");
  require(p.month_seconds > 0.0, "month_seconds must be positive");
  std::visit(
      [](const auto& m) {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, BlobDa>) {
          require(m.gas_da_per_batch >= 0, "gas_da_per_batch must be >= 0");
        } else if constexpr (std::is_same_v<M, CalldataDa>) {
          require(m.gas_da_per_byte >= 0 && m.batch_len_bytes >= 0,
                  "calldata gas and length must be >= 0");
        } else {
          require(m.usd >= 0.0, "flat DA fee must be >= 0");
        }
      },
      p.da_model);
}

std::int64_t derive_num_super_provers(double tps, double t_super_s,
                                      std::int64_t tx_max_per_super) {
  require(tx_max_per_super >= 1, "tx_max_per_super must be >= 1");
  require(tps >= 0.0 && t_super_s >= 0.0, "tps and t_super must be >= 0");
  if (tps == 0.0) return 0;
  return ceil_count(tps * t_super_s / static_cast<double>(tx_max_per_super));
}

double derive_batch_epoch(const PipelineParams& p, std::int64_t n_super) {
  require(n_super >= 1, "n_super must be >= 1");
  const double cap = p.target_finality_s - p.t_super_s - p.t_bundle_s;
  if (cap < p.t_batch_s - kEpochToleranceS) {
    throw Error(ErrorCode::kFinalityInfeasible,
                "no batch proof fits within the finality target");
  }
  const double distribute = static_cast<double>(ceil_count(
      static_cast<double>(p.max_super_proofs_per_batch) * p.t_super_s /
      static_cast<double>(n_super)));
  const double unconstrained =
      std::max({p.t_super_s, p.t_batch_s, distribute});
  return snap_epoch(std::min(unconstrained, cap));
}

double super_proof_demand_per_epoch(double tps, double epoch_s,
                                    std::int64_t tx_max_per_super) {
  require(tx_max_per_super >= 1, "tx_max_per_super must be >= 1");
  return tps * epoch_s / static_cast<double>(tx_max_per_super);
}

std::int64_t derive_num_batch_provers(double demand_proofs,
                                      std::int64_t max_super_proofs_per_batch,
                                      double batch_epoch_s, double t_batch_s) {
  require(max_super_proofs_per_batch >= 1, "max_spb must be >= 1");
  const std::int64_t demand = ceil_count(demand_proofs);
  if (demand <= 0) return 0;
  const std::int64_t rounds = floor_count(batch_epoch_s / t_batch_s);
  require(rounds > 0, "batch epoch shorter than one batch proof");
  return ceil_div(demand, max_super_proofs_per_batch * rounds);
}

double derive_bundle_epoch(const PipelineParams& p, double batch_epoch_s,
                           std::int64_t n_batch) {
  require(n_batch >= 1, "n_batch must be >= 1");
  const double cap = p.target_finality_s - batch_epoch_s - p.t_super_s;
  if (cap < p.t_bundle_s - kEpochToleranceS) {
    throw Error(ErrorCode::kFinalityInfeasible,
                "no bundle proof fits within the finality target");
  }
  const double distribute = static_cast<double>(ceil_count(
      static_cast<double>(p.max_batch_proofs_per_bundle) * batch_epoch_s /
      static_cast<double>(n_batch)));
  const double unconstrained =
      std::max({batch_epoch_s, distribute, p.t_bundle_s});
  return snap_epoch(std::min(unconstrained, cap));
}

double batches_per_bundle_epoch(double bundle_epoch_s, double batch_epoch_s) {
  require(batch_epoch_s > 0.0, "batch epoch must be positive");
  return bundle_epoch_s / batch_epoch_s;
}

std::int64_t derive_num_bundle_provers(double batch_proof_demand,
                                       std::int64_t max_batch_proofs_per_bundle,
                                       double bundle_epoch_s,
                                       double t_bundle_s) {
  require(max_batch_proofs_per_bundle >= 1, "max_bpb must be >= 1");
  const std::int64_t demand = ceil_count(batch_proof_demand);
  if (demand <= 0) return 0;
  const std::int64_t rounds = floor_count(bundle_epoch_s / t_bundle_s);
  require(rounds > 0, "bundle epoch shorter than one bundle proof");
  return ceil_div(demand, max_batch_proofs_per_bundle * rounds);
}

std::int64_t batch_proofs_per_batch_epoch(const PipelineParams& p,
                                          double batch_epoch_s) {
  const std::int64_t supers = ceil_count(
      super_proof_demand_per_epoch(p.tps, batch_epoch_s, p.tx_max_per_super));
  if (supers <= 0) return 0;
  return ceil_div(supers, p.max_super_proofs_per_batch);
}

std::int64_t batch_proof_demand_per_bundle_epoch(const PipelineParams& p,
                                                 double batch_epoch_s,
                                                 double bundle_epoch_s) {
  const std::int64_t per_batch_epoch =
      batch_proofs_per_batch_epoch(p, batch_epoch_s);
  if (per_batch_epoch == 0) return 0;
  const std::int64_t ticks =
      ceil_count(batches_per_bundle_epoch(bundle_epoch_s, batch_epoch_s));
  return std::max<std::int64_t>(ticks, 1) * per_batch_epoch;
}

DerivedConfig derive_config(const PipelineParams& p) {
  validate(p);
  if (check_feasibility(p) != Feasibility::kOk) {
    throw Error(ErrorCode::kFinalityInfeasible,
                "t_super + t_batch + t_bundle exceeds the finality target");
  }
  DerivedConfig c;
  c.n_super = derive_num_super_provers(p.tps, p.t_super_s, p.tx_max_per_super);
  if (c.n_super == 0) {
    c.batch_epoch_s = snap_epoch(
        std::min(std::max(p.t_super_s, p.t_batch_s),
                 p.target_finality_s - p.t_super_s - p.t_bundle_s));
    c.bundle_epoch_s = snap_epoch(
        std::min(std::max(c.batch_epoch_s, p.t_bundle_s),
                 p.target_finality_s - c.batch_epoch_s - p.t_super_s));
    return c;
  }
  c.batch_epoch_s = derive_batch_epoch(p, c.n_super);
  c.n_batch = derive_num_batch_provers(
      super_proof_demand_per_epoch(p.tps, c.batch_epoch_s, p.tx_max_per_super),
      p.max_super_proofs_per_batch, c.batch_epoch_s, p.t_batch_s);
  c.bundle_epoch_s = derive_bundle_epoch(p, c.batch_epoch_s, c.n_batch);
  c.n_bundle = derive_num_bundle_provers(
      static_cast<double>(batch_proof_demand_per_bundle_epoch(
          p, c.batch_epoch_s, c.bundle_epoch_s)),
      p.max_batch_proofs_per_bundle, c.bundle_epoch_s, p.t_bundle_s);
  return c;
}

double da_cost_per_batch(const DaModel& da_model, double gas_price_gwei,
                         double eth_price_usd) {
  const double usd_per_gas = gas_price_gwei * 1e-9 * eth_price_usd;
  return std::visit(
      [&](const auto& m) -> double {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, BlobDa>) {
          return static_cast<double>(m.gas_da_per_batch) * usd_per_gas;
        } else if constexpr (std::is_same_v<M, CalldataDa>) {
          return static_cast<double>(m.batch_len_bytes) *
                 static_cast<double>(m.gas_da_per_byte) * usd_per_gas;
        } else {
          return m.usd;
        }
      },
      da_model);
}

double verification_cost_per_bundle(std::int64_t gas_verification_per_bundle,
                                    double gas_price_gwei,
                                    double eth_price_usd) {
  return static_cast<double>(gas_verification_per_bundle) * gas_price_gwei *
         1e-9 * eth_price_usd;
}

CostBreakdown monthly_cost(const PipelineParams& p, const DerivedConfig& c) {
  CostBreakdown out;
  out.da_usd_per_batch =
      da_cost_per_batch(p.da_model, p.gas_price_gwei, p.eth_price_usd);
  out.verification_usd_per_bundle = verification_cost_per_bundle(
      p.gas_verification_per_bundle, p.gas_price_gwei, p.eth_price_usd);
  if (c.n_batch > 0) {
    require(c.batch_epoch_s > 0.0, "batch epoch must be positive");
    out.batches_per_month =
        static_cast<double>(c.n_batch) * p.month_seconds / c.batch_epoch_s;
  }
  if (c.n_bundle > 0) {
    require(c.bundle_epoch_s > 0.0, "bundle epoch must be positive");
    out.bundles_per_month =
        static_cast<double>(c.n_bundle) * p.month_seconds / c.bundle_epoch_s;
  }
  out.da_usd_month = out.batches_per_month * out.da_usd_per_batch;
  out.verification_usd_month =
      out.bundles_per_month * out.verification_usd_per_bundle;
  out.machine_usd_month =
      static_cast<double>(c.n_super) * p.machine_cost_usd_month.super_usd +
      static_cast<double>(c.n_batch) * p.machine_cost_usd_month.batch_usd +
      static_cast<double>(c.n_bundle) * p.machine_cost_usd_month.bundle_usd;
  out.total_usd_month =
      out.da_usd_month + out.verification_usd_month + out.machine_usd_month;
  return out;
}

CostBreakdown scale_cost(const CostBreakdown& cost, double factor) {
  CostBreakdown out = cost;
  out.da_usd_month *= factor;
  out.verification_usd_month *= factor;
  out.machine_usd_month *= factor;
  out.total_usd_month =
      out.da_usd_month + out.verification_usd_month + out.machine_usd_month;
  out.batches_per_month *= factor;
  out.bundles_per_month *= factor;
  return out;
}

Feasibility check_feasibility(const PipelineParams& p,
                              const std::optional<MemoryCapacity>& memory) {
  if (p.t_super_s + p.t_batch_s + p.t_bundle_s >
      p.target_finality_s + kEpochToleranceS) {
    return Feasibility::kFinalityInfeasible;
  }
  if (memory && (memory->super_gb < kSuperMemoryGb ||
                 memory->batch_gb < kBatchMemoryGb ||
                 memory->bundle_gb < kBundleMemoryGb)) {
    return Feasibility::kMemoryInfeasible;
  }
  return Feasibility::kOk;
}

bool satisfies_finality(const PipelineParams& p, const DerivedConfig& c) {
  return p.t_super_s + c.batch_epoch_s + c.bundle_epoch_s <=
         p.target_finality_s + kEpochToleranceS;
}

bool satisfies_batch_capacity(const PipelineParams& p, const DerivedConfig& c) {
  const std::int64_t demand = ceil_count(
      super_proof_demand_per_epoch(p.tps, c.batch_epoch_s, p.tx_max_per_super));
  if (demand <= 0) return true;
  const std::int64_t rounds = floor_count(c.batch_epoch_s / p.t_batch_s);
  return c.n_batch * rounds * p.max_super_proofs_per_batch >= demand;
}

bool satisfies_bundle_capacity(const PipelineParams& p,
                               const DerivedConfig& c) {
  const std::int64_t demand =
      batch_proof_demand_per_bundle_epoch(p, c.batch_epoch_s, c.bundle_epoch_s);
  if (demand <= 0) return true;
  const std::int64_t rounds = floor_count(c.bundle_epoch_s / p.t_bundle_s);
  return c.n_bundle * rounds * p.max_batch_proofs_per_bundle >= demand;
}

bool satisfies_super_throughput(const PipelineParams& p,
                                std::int64_t n_super) {
  const double need = p.tps * p.t_super_s;
  const double have =
      static_cast<double>(n_super) * static_cast<double>(p.tx_max_per_super);
  return need <= have * (1.0 + 1e-12);
}

}  // namespace provesizer
