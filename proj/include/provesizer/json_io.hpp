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

#ifndef PROVESIZER_JSON_IO_HPP_
#define PROVESIZER_JSON_IO_HPP_

#include <initializer_list>
#include <string>
#include <string_view>

#include "json.hpp"
#include "provesizer/params.hpp"

namespace provesizer {

using Json = nlohmann::ordered_json;

/// Throws Error(kInvalidConfig) naming `where` if `obj` is not an object or
/// has a key outside `allowed`.
void require_keys(const Json& obj, std::initializer_list<std::string_view> allowed,
                  std::string_view where);

// Typed field readers; Error(kInvalidConfig) on a type mismatch.
double get_number(const Json& obj, const char* key, std::string_view where);
std::int64_t get_integer(const Json& obj, const char* key, std::string_view where);
std::string get_string(const Json& obj, const char* key, std::string_view where);

/// {"blob": {...}} | {"calldata": {...}} | {"flat_usd_per_batch": {...}}
Json to_json(const DaModel& model);
DaModel da_model_from_json(const Json& j, std::string_view where);

Json to_json(const TierCosts& costs);
TierCosts tier_costs_from_json(const Json& j, std::string_view where);

/// Keys are the PipelineParams field names; absent keys keep `base` values.
Json to_json(const PipelineParams& params);
PipelineParams params_from_json(const Json& j, const PipelineParams& base,
                                std::string_view where);

Json to_json(const DerivedConfig& config);
DerivedConfig config_from_json(const Json& j, std::string_view where);

Json to_json(const CostBreakdown& cost);
CostBreakdown cost_from_json(const Json& j, std::string_view where);

}  // namespace provesizer

#endif  // PROVESIZER_JSON_IO_HPP_
