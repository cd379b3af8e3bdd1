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

#ifndef PROVESIZER_OPTIMIZER_HPP_
#define PROVESIZER_OPTIMIZER_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "provesizer/cost_model.hpp"
#include "provesizer/params.hpp"

namespace provesizer {

struct CountRange {
  std::int64_t lo = 0;
  std::int64_t hi = 0;
};

/// Search domain shared by the SMT encoding and the exhaustive oracle.
/// Epochs live on the lattice floor + k * granularity, k >= 0, up to the
/// ceiling; the floor defaults to max(t_super, t_batch, t_bundle) and the
/// ceiling to target_finality - t_super - floor.
struct SearchBounds {
  CountRange super_count{0, 0};
  CountRange batch_count{0, 0};
  CountRange bundle_count{0, 0};
  double epoch_granularity_s = 1.0;
  std::optional<double> epoch_floor_s;
  std::optional<double> epoch_ceiling_s;
};

// Integer view of the epoch lattice, in centiseconds.
struct EpochLattice {
  std::int64_t floor_cs = 0;
  std::int64_t step_cs = 0;
  std::int64_t points = 0;  // number of lattice values, >= 1

  std::int64_t at(std::int64_t k) const { return floor_cs + step_cs * k; }
  double seconds(std::int64_t k) const {
    return static_cast<double>(at(k)) / 100.0;
  }
};

EpochLattice resolve_lattice(const PipelineParams& params,
                             const SearchBounds& bounds);

/// Counts ranges derived from derive_config: [0, 2n + 2] per tier.
SearchBounds default_bounds(const PipelineParams& params,
                            double epoch_granularity_s = 1.0);

struct FreeFleet {};
struct FixedFleet {
  DerivedConfig fleet;  // only the three counts are used
};
using OptimizeMode = std::variant<FreeFleet, FixedFleet>;

// cost >= count * k / epoch. The right side is convex in epoch, so any
// tangent line is a valid linear lower bound; solve() adds tangents at each
// model it sees to tighten the search.
struct ConvexCostTerm {
  std::string cost;
  std::string count;  // symbol or integer literal
  std::string epoch;
  std::int64_t k = 0;
};

struct Encoding {
  std::string text;
  // Model quantity -> declared SMT symbol.
  std::map<std::string, std::string> variable_names;
  std::int64_t time_scale = 100;     // SMT time unit = 1/100 s
  std::int64_t money_scale = 10000;  // SMT money unit = 1e-4 USD
  std::int64_t objective_lower_bound = 0;
  // Bound tightening stops once the gap is below this many money units.
  std::int64_t objective_tolerance = 100;  // one cent
  std::string logic;
  std::vector<ConvexCostTerm> convex_terms;  // empty unless counts are fixed
};

/// Tangent of a convex term at epoch0, as an SMT-LIB2 assertion.
std::string tangent_cut(const ConvexCostTerm& term, std::int64_t epoch0);

Encoding encode(const PipelineParams& params, const SearchBounds& bounds,
                const OptimizeMode& mode);

struct SolverEndpoint {
  std::string command = "z3";
  std::vector<std::string> args{"-in"};
  // Emitted verbatim before the encoding, e.g. "(set-option :timeout 1000)".
  std::vector<std::string> options;
  // Use (minimize ...) instead of bound tightening when available.
  bool native_minimize = false;
};

enum class SolveStatus { kOptimal, kFeasible, kInfeasible, kTimeout, kSolverError };

std::string_view to_string(SolveStatus status);

struct SolverOutcome {
  SolveStatus status = SolveStatus::kSolverError;
  std::optional<DerivedConfig> config;
  double objective_usd = 0.0;
  double solve_time_s = 0.0;
  std::string solver_identity;
  std::string message;
  int queries = 0;
};

/// Runs the solver subprocess on `encoding`; tightens an upper bound on the
/// objective with push/assert/check-sat until the gap is below
/// encoding.objective_tolerance. On timeout the best incumbent is kept.
/// Throws Error(kSolverUnavailable) if the command cannot be started.
SolverOutcome solve(const Encoding& encoding, const SolverEndpoint& endpoint,
                    double timeout_s);

/// Exhaustive grid search over counts x lattice epochs. Deterministic
/// tie-break on (n_super, n_batch, n_bundle, batch_epoch, bundle_epoch).
/// Throws kBoundsTooLarge beyond kMaxOracleGridPoints.
inline constexpr std::int64_t kMaxOracleGridPoints = 10'000'000;

SolverOutcome brute_force_oracle(const PipelineParams& params,
                                 const SearchBounds& bounds);
// Single-threaded reference for the OpenMP kernel above.
SolverOutcome brute_force_oracle_serial(const PipelineParams& params,
                                        const SearchBounds& bounds);

std::int64_t oracle_grid_points(const PipelineParams& params,
                                const SearchBounds& bounds);

/// Cost change from shortening both epochs of `config` by one lattice step.
double granularity_cost_step(const PipelineParams& params,
                             const DerivedConfig& config,
                             double epoch_granularity_s);

struct OptimizeResult {
  std::optional<DerivedConfig> config;
  std::optional<CostBreakdown> cost;
  SolverOutcome outcome;
};

/// encode + solve, then re-price the configuration with monthly_cost.
/// Throws kFinalityInfeasible when the proof times alone exceed finality.
OptimizeResult optimize(const PipelineParams& params, const OptimizeMode& mode,
                        const SolverEndpoint& endpoint, double timeout_s,
                        const std::optional<SearchBounds>& bounds = std::nullopt);

}  // namespace provesizer

#endif  // PROVESIZER_OPTIMIZER_HPP_
