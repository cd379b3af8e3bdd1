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

#include "fixed_point.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "provesizer/cost_model.hpp"
#include "provesizer/error.hpp"

namespace provesizer::detail {

namespace {

[[noreturn]] void overflow(const char* what) {
  throw Error(ErrorCode::kEncodingOverflow, what);
}

std::int64_t ceil_div(std::int64_t a, std::int64_t b) {
  return a <= 0 ? 0 : (a + b - 1) / b;
}

}  // namespace

std::int64_t to_cs_up(double s) {
  const double x = std::ceil(s * kTimeScale - 1e-6);
  if (!(std::abs(x) < 9e18)) overflow("time value out of range");
  return static_cast<std::int64_t>(x);
}

std::int64_t to_cs_down(double s) {
  const double x = std::floor(s * kTimeScale + 1e-6);
  if (!(std::abs(x) < 9e18)) overflow("time value out of range");
  return static_cast<std::int64_t>(x);
}

std::int64_t money_units(double usd) {
  const double x = usd * static_cast<double>(kMoneyScale);
  if (!(std::abs(x) < 9e18)) overflow("monetary value out of range");
  return std::llround(x);
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t out = 0;
  if (__builtin_mul_overflow(a, b, &out)) {
    overflow("fixed-point constant exceeds 64-bit range");
  }
  return out;
}

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t out = 0;
  if (__builtin_add_overflow(a, b, &out)) {
    overflow("fixed-point constant exceeds 64-bit range");
  }
  return out;
}

FixedPointModel FixedPointModel::build(const PipelineParams& p,
                                       const SearchBounds& b) {
  FixedPointModel m;
  m.lattice = resolve_lattice(p, b);
  m.ts = to_cs_up(p.t_super_s);
  m.tb = to_cs_up(p.t_batch_s);
  m.tu = to_cs_up(p.t_bundle_s);
  m.tf = to_cs_down(p.target_finality_s);

  const double tps_scaled = p.tps * static_cast<double>(kTpsDenominator);
  if (!(tps_scaled < 9e18)) overflow("tps out of range");
  m.tps_num = std::llround(tps_scaled);
  m.tps_den = kTpsDenominator;
  if (const std::int64_t g = std::gcd(m.tps_num, m.tps_den); g > 1) {
    m.tps_num /= g;
    m.tps_den /= g;
  }
  m.demand_den =
      checked_mul(checked_mul(m.tps_den, kTimeScale), p.tx_max_per_super);
  m.spb = p.max_super_proofs_per_batch;
  m.bpb = p.max_batch_proofs_per_bundle;

  const std::int64_t month_cs = std::llround(p.month_seconds * kTimeScale);
  m.da_k = checked_mul(
      money_units(da_cost_per_batch(p.da_model, p.gas_price_gwei,
                                    p.eth_price_usd)),
      month_cs);
  m.verif_k = checked_mul(
      money_units(verification_cost_per_bundle(
          p.gas_verification_per_bundle, p.gas_price_gwei, p.eth_price_usd)),
      month_cs);
  m.m_super = money_units(p.machine_cost_usd_month.super_usd);
  m.m_batch = money_units(p.machine_cost_usd_month.batch_usd);
  m.m_bundle = money_units(p.machine_cost_usd_month.bundle_usd);
  m.throughput_lhs = checked_mul(m.tps_num, m.ts);
  m.throughput_coeff =
      checked_mul(checked_mul(p.tx_max_per_super, m.tps_den), kTimeScale);

  // Products formed with the largest epoch and count must stay in range.
  const std::int64_t max_epoch =
      m.lattice.points > 0 ? m.lattice.at(m.lattice.points - 1) : m.lattice.floor_cs;
  const std::int64_t max_count = std::max(
      {b.super_count.hi, b.batch_count.hi, b.bundle_count.hi, std::int64_t{1}});
  checked_mul(m.tps_num, max_epoch);
  checked_mul(m.demand_den, max_epoch);
  checked_mul(m.da_k, max_count);
  checked_mul(m.verif_k, max_count);
  checked_mul(m.throughput_coeff, max_count);
  checked_add(checked_add(checked_mul(m.m_super, max_count),
                          checked_mul(m.m_batch, max_count)),
              checked_mul(m.m_bundle, max_count));
  return m;
}

std::optional<std::int64_t> FixedPointModel::evaluate(
    std::int64_t ns, std::int64_t nb, std::int64_t nu, std::int64_t eb,
    std::int64_t eu) const {
  if (ts + eb + eu > tf) return std::nullopt;
  if (eu < eb || eb < ts || eb < tb || eu < tu) return std::nullopt;
  if (!super_throughput_ok(ns)) return std::nullopt;
  const std::int64_t batch_rounds = eb / tb;
  const std::int64_t bundle_rounds = eu / tu;
  const std::int64_t super_demand = ceil_div(tps_num * eb, demand_den);
  if (spb * nb * batch_rounds < super_demand) return std::nullopt;
  const std::int64_t per_epoch = ceil_div(super_demand, spb);
  const std::int64_t ticks = std::max<std::int64_t>(ceil_div(eu, eb), 1);
  if (bpb * nu * bundle_rounds < ticks * per_epoch) return std::nullopt;
  const std::int64_t da = ceil_div(da_k * nb, eb);
  const std::int64_t verif = ceil_div(verif_k * nu, eu);
  return m_super * ns + m_batch * nb + m_bundle * nu + da + verif;
}

}  // namespace provesizer::detail
