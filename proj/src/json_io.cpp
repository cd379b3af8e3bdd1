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

#include "provesizer/json_io.hpp"

#include "provesizer/error.hpp"

namespace provesizer {

namespace {

[[noreturn]] void bad(std::string_view where, const std::string& what) {
  throw Error(ErrorCode::kInvalidConfig, std::string(where) + ": " + what);
}

const Json& field(const Json& obj, const char* key, std::string_view where) {
  const auto it = obj.find(key);
  if (it == obj.end()) bad(where, std::string("missing key '") + key + "'");
  return *it;
}

template <typename T, typename Read>
void read_if(const Json& obj, const char* key, T& out, Read read) {
  if (obj.contains(key)) out = read(obj, key);
}

}  // namespace

void require_keys(const Json& obj, std::initializer_list<std::string_view> allowed,
                  std::string_view where) {
  if (!obj.is_object()) bad(where, "expected an object");
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (auto a : allowed) known = known || a == key;
    if (!known) bad(where, "unknown key '" + key + "'");
  }
}

double get_number(const Json& obj, const char* key, std::string_view where) {
  const Json& v = field(obj, key, where);
  if (!v.is_number()) bad(where, std::string("'") + key + "' must be a number");
  return v.get<double>();
}

std::int64_t get_integer(const Json& obj, const char* key,
                         std::string_view where) {
  const Json& v = field(obj, key, where);
  if (!v.is_number_integer()) {
    bad(where, std::string("'") + key + "' must be an integer");
  }
  return v.get<std::int64_t>();
}

std::string get_string(const Json& obj, const char* key, std::string_view where) {
  const Json& v = field(obj, key, where);
  if (!v.is_string()) bad(where, std::string("'") + key + "' must be a string");
  return v.get<std::string>();
}

Json to_json(const DaModel& model) {
  return std::visit(
      [](const auto& m) -> Json {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, BlobDa>) {
          return {{"blob", {{"gas_da_per_batch", m.gas_da_per_batch}}}};
        } else if constexpr (std::is_same_v<M, CalldataDa>) {
          return {{"calldata",
                   {{"gas_da_per_byte", m.gas_da_per_byte},
                    {"batch_len_bytes", m.batch_len_bytes}}}};
        } else {
          return {{"flat_usd_per_batch", {{"usd", m.usd}}}};
        }
      },
      model);
}

DaModel da_model_from_json(const Json& j, std::string_view where) {
  require_keys(j, {"blob", "calldata", "flat_usd_per_batch"}, where);
  if (j.size() != 1) bad(where, "exactly one da_model variant is required");
  const std::string w = std::string(where);
  if (j.contains("blob")) {
    const Json& b = j["blob"];
    require_keys(b, {"gas_da_per_batch"}, w + ".blob");
    return BlobDa{get_integer(b, "gas_da_per_batch", w + ".blob")};
  }
  if (j.contains("calldata")) {
    const Json& c = j["calldata"];
    require_keys(c, {"gas_da_per_byte", "batch_len_bytes"}, w + ".calldata");
    CalldataDa m;
    read_if(c, "gas_da_per_byte", m.gas_da_per_byte,
            [&](const Json& o, const char* k) { return get_integer(o, k, w); });
    m.batch_len_bytes = get_integer(c, "batch_len_bytes", w + ".calldata");
    return m;
  }
  const Json& f = j["flat_usd_per_batch"];
  require_keys(f, {"usd"}, w + ".flat_usd_per_batch");
  return FlatUsdPerBatch{get_number(f, "usd", w + ".flat_usd_per_batch")};
}

Json to_json(const TierCosts& c) {
  return {{"super", c.super_usd}, {"batch", c.batch_usd}, {"bundle", c.bundle_usd}};
}

TierCosts tier_costs_from_json(const Json& j, std::string_view where) {
  require_keys(j, {"super", "batch", "bundle"}, where);
  return {get_number(j, "super", where), get_number(j, "batch", where),
          get_number(j, "bundle", where)};
}

Json to_json(const PipelineParams& p) {
  return {
      {"tps", p.tps},
      {"gas_per_tx", p.gas_per_tx},
      {"total_block_gas", p.total_block_gas},
      {"target_finality_s", p.target_finality_s},
      {"tx_max_per_super", p.tx_max_per_super},
      {"max_super_proofs_per_batch", p.max_super_proofs_per_batch},
      {"max_batch_proofs_per_bundle", p.max_batch_proofs_per_bundle},
      {"t_super_s", p.t_super_s},
      {"t_batch_s", p.t_batch_s},
      {"t_bundle_s", p.t_bundle_s},
      {"gas_verification_per_bundle", p.gas_verification_per_bundle},
      {"da_model", to_json(p.da_model)},
      {"gas_price_gwei", p.gas_price_gwei},
      {"eth_price_usd", p.eth_price_usd},
      {"machine_cost_usd_month", to_json(p.machine_cost_usd_month)},
      {"month_seconds", p.month_seconds},
  };
}

PipelineParams params_from_json(const Json& j, const PipelineParams& base,
                                std::string_view where) {
  require_keys(j,
               {"tps", "gas_per_tx", "total_block_gas", "target_finality_s",
                "tx_max_per_super", "max_super_proofs_per_batch",
                "max_batch_proofs_per_bundle", "t_super_s", "t_batch_s",
                "t_bundle_s", "gas_verification_per_bundle", "da_model",
                "gas_price_gwei", "eth_price_usd", "machine_cost_usd_month",
                "month_seconds"},
               where);
  PipelineParams p = base;
  auto num = [&](const Json& o, const char* k) { return get_number(o, k, where); };
  auto integer = [&](const Json& o, const char* k) {
    return get_integer(o, k, where);
  };
  read_if(j, "tps", p.tps, num);
  read_if(j, "gas_per_tx", p.gas_per_tx, integer);
  read_if(j, "total_block_gas", p.total_block_gas, integer);
  read_if(j, "target_finality_s", p.target_finality_s, num);
  read_if(j, "tx_max_per_super", p.tx_max_per_super, integer);
  read_if(j, "max_super_proofs_per_batch", p.max_super_proofs_per_batch, integer);
  read_if(j, "max_batch_proofs_per_bundle", p.max_batch_proofs_per_bundle, integer);
  read_if(j, "t_super_s", p.t_super_s, num);
  read_if(j, "t_batch_s", p.t_batch_s, num);
  read_if(j, "t_bundle_s", p.t_bundle_s, num);
  read_if(j, "gas_verification_per_bundle", p.gas_verification_per_bundle, integer);
  read_if(j, "gas_price_gwei", p.gas_price_gwei, num);
  read_if(j, "eth_price_usd", p.eth_price_usd, num);
  read_if(j, "month_seconds", p.month_seconds, num);
  const std::string w(where);
  if (j.contains("da_model")) {
    p.da_model = da_model_from_json(j["da_model"], w + ".da_model");
  }
  if (j.contains("machine_cost_usd_month")) {
    p.machine_cost_usd_month = tier_costs_from_json(
        j["machine_cost_usd_month"], w + ".machine_cost_usd_month");
  }
  return p;
}

Json to_json(const DerivedConfig& c) {
  return {{"n_super", c.n_super},
          {"n_batch", c.n_batch},
          {"n_bundle", c.n_bundle},
          {"batch_epoch_s", c.batch_epoch_s},
          {"bundle_epoch_s", c.bundle_epoch_s}};
}

DerivedConfig config_from_json(const Json& j, std::string_view where) {
  require_keys(j, {"n_super", "n_batch", "n_bundle", "batch_epoch_s", "bundle_epoch_s"},
               where);
  DerivedConfig c;
  c.n_super = get_integer(j, "n_super", where);
  c.n_batch = get_integer(j, "n_batch", where);
  c.n_bundle = get_integer(j, "n_bundle", where);
  c.batch_epoch_s = get_number(j, "batch_epoch_s", where);
  c.bundle_epoch_s = get_number(j, "bundle_epoch_s", where);
  return c;
}

Json to_json(const CostBreakdown& c) {
  return {{"da_usd_month", c.da_usd_month},
          {"verification_usd_month", c.verification_usd_month},
          {"machine_usd_month", c.machine_usd_month},
          {"total_usd_month", c.total_usd_month},
          {"da_usd_per_batch", c.da_usd_per_batch},
          {"verification_usd_per_bundle", c.verification_usd_per_bundle},
          {"batches_per_month", c.batches_per_month},
          {"bundles_per_month", c.bundles_per_month}};
}

CostBreakdown cost_from_json(const Json& j, std::string_view where) {
  require_keys(j,
               {"da_usd_month", "verification_usd_month", "machine_usd_month",
                "total_usd_month", "da_usd_per_batch",
                "verification_usd_per_bundle", "batches_per_month",
                "bundles_per_month"},
               where);
  CostBreakdown c;
  auto num = [&](const Json& o, const char* k) { return get_number(o, k, where); };
  read_if(j, "da_usd_month", c.da_usd_month, num);
  read_if(j, "verification_usd_month", c.verification_usd_month, num);
  read_if(j, "machine_usd_month", c.machine_usd_month, num);
  read_if(j, "total_usd_month", c.total_usd_month, num);
  read_if(j, "da_usd_per_batch", c.da_usd_per_batch, num);
  read_if(j, "verification_usd_per_bundle", c.verification_usd_per_bundle, num);
  read_if(j, "batches_per_month", c.batches_per_month, num);
  read_if(j, "bundles_per_month", c.bundles_per_month, num);
  return c;
}

}  // namespace provesizer
