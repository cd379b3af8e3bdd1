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

#ifndef PROVESIZER_PARAMS_HPP_
#define PROVESIZER_PARAMS_HPP_

#include <cstdint>
#include <variant>

namespace provesizer {

// DA is published once per batch proof.
struct BlobDa {
  std::int64_t gas_da_per_batch = 0;

  bool operator==(const BlobDa&) const = default;
};

struct CalldataDa {
  std::int64_t gas_da_per_byte = 16;
  std::int64_t batch_len_bytes = 0;

  bool operator==(const CalldataDa&) const = default;
};

// Fee already quoted in USD (e.g. a blob-fee spike snapshot).
struct FlatUsdPerBatch {
  double usd = 0.0;

  bool operator==(const FlatUsdPerBatch&) const = default;
};

using DaModel = std::variant<BlobDa, CalldataDa, FlatUsdPerBatch>;

struct TierCosts {
  double super_usd = 0.0;
  double batch_usd = 0.0;
  double bundle_usd = 0.0;

  bool operator==(const TierCosts&) const = default;
};

/// Fixed inputs of the sizing model. Times are seconds, gas in gas units.
struct PipelineParams {
  double tps = 0.0;
  std::int64_t gas_per_tx = 100'000;          // carried into reports only
  std::int64_t total_block_gas = 10'000'000;  // carried into reports only
  double target_finality_s = 14'400.0;
  std::int64_t tx_max_per_super = 128;
  std::int64_t max_super_proofs_per_batch = 45;
  std::int64_t max_batch_proofs_per_bundle = 15;
  double t_super_s = 1592.81;
  double t_batch_s = 1718.2;
  double t_bundle_s = 518.0;
  std::int64_t gas_verification_per_bundle = 0;
  DaModel da_model = BlobDa{};
  double gas_price_gwei = 0.0;
  double eth_price_usd = 0.0;
  TierCosts machine_cost_usd_month{1000.0, 1000.0, 1000.0};
  double month_seconds = 2'592'000.0;

  bool operator==(const PipelineParams&) const = default;
};

/// Decision variables: prover counts per tier and the two epoch lengths.
struct DerivedConfig {
  std::int64_t n_super = 0;
  std::int64_t n_batch = 0;
  std::int64_t n_bundle = 0;
  double batch_epoch_s = 0.0;
  double bundle_epoch_s = 0.0;

  bool operator==(const DerivedConfig&) const = default;
};

struct CostBreakdown {
  double da_usd_month = 0.0;
  double verification_usd_month = 0.0;
  double machine_usd_month = 0.0;
  double total_usd_month = 0.0;
  double da_usd_per_batch = 0.0;
  double verification_usd_per_bundle = 0.0;
  double batches_per_month = 0.0;
  double bundles_per_month = 0.0;

  bool operator==(const CostBreakdown&) const = default;
};

/// Throws Error(kInvalidParameter) if a sign or positivity constraint fails.
void validate(const PipelineParams& params);

}  // namespace provesizer

#endif  // PROVESIZER_PARAMS_HPP_
