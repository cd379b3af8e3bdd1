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

#ifndef PROVESIZER_SRC_FIXED_POINT_HPP_
#define PROVESIZER_SRC_FIXED_POINT_HPP_

#include <cstdint>
#include <optional>

#include "provesizer/optimizer.hpp"
#include "provesizer/params.hpp"

namespace provesizer::detail {

inline constexpr std::int64_t kTimeScale = 100;
inline constexpr std::int64_t kMoneyScale = 10000;
inline constexpr std::int64_t kTpsDenominator = 1'000'000;

std::int64_t to_cs_up(double s);
std::int64_t to_cs_down(double s);
std::int64_t money_units(double usd);
std::int64_t checked_mul(std::int64_t a, std::int64_t b);
std::int64_t checked_add(std::int64_t a, std::int64_t b);

// Integer image of the model that the SMT encoding states and the oracle
// evaluates. Proof times round up and the finality target rounds down, so
// every integer-feasible point is feasible at full precision too.
struct FixedPointModel {
  std::int64_t ts = 0, tb = 0, tu = 0, tf = 0;
  std::int64_t tps_num = 0, tps_den = 1;
  std::int64_t demand_den = 1;  // super_demand = ceil(tps_num * E / demand_den)
  std::int64_t spb = 1, bpb = 1;
  std::int64_t da_k = 0, verif_k = 0;  // unit cost (1e-4 USD) * month (cs)
  std::int64_t m_super = 0, m_batch = 0, m_bundle = 0;
  std::int64_t throughput_lhs = 0, throughput_coeff = 0;
  EpochLattice lattice;

  static FixedPointModel build(const PipelineParams& params,
                               const SearchBounds& bounds);

  bool super_throughput_ok(std::int64_t n_super) const {
    return throughput_lhs <= throughput_coeff * n_super;
  }

  // Objective in money units, or nullopt if the point is infeasible.
  std::optional<std::int64_t> evaluate(std::int64_t n_super,
                                       std::int64_t n_batch,
                                       std::int64_t n_bundle,
                                       std::int64_t batch_cs,
                                       std::int64_t bundle_cs) const;
};

}  // namespace provesizer::detail

#endif  // PROVESIZER_SRC_FIXED_POINT_HPP_
