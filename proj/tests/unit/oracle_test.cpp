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

#include <cmath>
#include <random>

#include "doctest.h"

#include "fixtures.hpp"
#include "provesizer/cost_model.hpp"
#include "provesizer/error.hpp"
#include "provesizer/optimizer.hpp"

using namespace provesizer;

namespace {

SearchBounds small_grid(std::int64_t max_count, double granularity_s) {
  SearchBounds b;
  b.super_count = {0, max_count};
  b.batch_count = {0, max_count};
  b.bundle_count = {0, max_count};
  b.epoch_granularity_s = granularity_s;
  return b;
}

// Fast synthetic pipeline so small fleets can carry real load.
PipelineParams random_params(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  PipelineParams p = testing::scenario_params("steady");
  p.t_super_s = 100 + 400 * u(rng);
  p.t_batch_s = 100 + 400 * u(rng);
  p.t_bundle_s = 50 + 200 * u(rng);
  p.target_finality_s = 4000 + 4000 * u(rng);
  p.tps = 0.5 * u(rng);
  p.max_super_proofs_per_batch = 2 + static_cast<int>(8 * u(rng));
  p.max_batch_proofs_per_bundle = 1 + static_cast<int>(4 * u(rng));
  return p;
}

}  // namespace

TEST_CASE("oracle: OpenMP kernel matches the serial reference") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 20; ++i) {
    CAPTURE(i);
    const PipelineParams p = random_params(rng);
    const SearchBounds b = small_grid(4, 120);
    const SolverOutcome serial = brute_force_oracle_serial(p, b);
    const SolverOutcome parallel = brute_force_oracle(p, b);
    CHECK(serial.status == parallel.status);
    CHECK(serial.config == parallel.config);
    CHECK(serial.objective_usd == parallel.objective_usd);
    CHECK(serial.solver_identity == "oracle-serial");
    CHECK(parallel.solver_identity == "oracle-openmp");
  }
}

TEST_CASE("oracle: single point bounds") {
  const PipelineParams p = testing::scenario_params("steady");
  SearchBounds b;
  b.super_count = {2, 2};
  b.batch_count = {1, 1};
  b.bundle_count = {1, 1};
  b.epoch_floor_s = 6000;
  b.epoch_ceiling_s = 6000;
  const SolverOutcome ok = brute_force_oracle(p, b);
  REQUIRE(ok.status == SolveStatus::kOptimal);
  CHECK(*ok.config == DerivedConfig{2, 1, 1, 6000, 6000});

  b.super_count = {1, 1};  // below the throughput floor
  CHECK(brute_force_oracle(p, b).status == SolveStatus::kInfeasible);
}

TEST_CASE("oracle: Steady small grid beats the baseline") {
  const PipelineParams p = testing::scenario_params("steady");
  const SolverOutcome o = brute_force_oracle(p, small_grid(4, 60));
  REQUIRE(o.status == SolveStatus::kOptimal);
  CHECK(o.objective_usd <= 73989.1);
  CHECK(satisfies_finality(p, *o.config));
  CHECK(satisfies_batch_capacity(p, *o.config));
  CHECK(satisfies_bundle_capacity(p, *o.config));
}

TEST_CASE("oracle: grid size guard") {
  const PipelineParams p = testing::scenario_params("surge");
  const SearchBounds b = small_grid(2000, 1);
  CHECK(oracle_grid_points(p, b) > kMaxOracleGridPoints);
  try {
    brute_force_oracle(p, b);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kBoundsTooLarge);
  }
}

TEST_CASE("solver agrees with the oracle on small instances") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 4; ++i) {
    CAPTURE(i);
    const PipelineParams p = random_params(rng);
    const SearchBounds b = small_grid(3, 120);
    const SolverOutcome oracle = brute_force_oracle(p, b);
    const OptimizeResult smt = optimize(p, FreeFleet{}, testing::test_solver(), 60, b);
    if (oracle.status == SolveStatus::kInfeasible) {
      CHECK(smt.outcome.status == SolveStatus::kInfeasible);
      continue;
    }
    REQUIRE(smt.config.has_value());
    const double step = granularity_cost_step(p, *oracle.config, 120);
    CHECK(std::abs(smt.outcome.objective_usd - oracle.objective_usd) <= step + 0.01);
  }
}
