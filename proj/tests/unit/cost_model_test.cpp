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

#include "doctest.h"

#include "fixtures.hpp"
#include "provesizer/cost_model.hpp"
#include "provesizer/error.hpp"

using namespace provesizer;
using doctest::Approx;

namespace {

PipelineParams gpu() { return PipelineParams{}; }

}  // namespace

TEST_CASE("super prover count") {
  CHECK(derive_num_super_provers(100, 1592.81, 128) == 1245);
  CHECK(derive_num_super_provers(2.12, 1592.81, 128) == 27);
  CHECK(derive_num_super_provers(0.1, 1592.81, 128) == 2);
  CHECK(derive_num_super_provers(0, 1592.81, 128) == 0);
  CHECK_THROWS_AS(derive_num_super_provers(1, 1592.81, 0), Error);
}

TEST_CASE("batch epoch") {
  CHECK(derive_batch_epoch(gpu(), 2) == Approx(12289.19));

  PipelineParams p;
  p.t_super_s = 100;
  p.t_batch_s = 200;
  p.t_bundle_s = 50;
  CHECK(derive_batch_epoch(p, 1000) == Approx(200));

  PipelineParams tight = gpu();
  tight.target_finality_s = 2000;
  try {
    derive_batch_epoch(tight, 2);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kFinalityInfeasible);
  }
}

TEST_CASE("super proof demand") {
  CHECK(super_proof_demand_per_epoch(100, 1718.2, 128) == Approx(1342.34).epsilon(1e-4));
  CHECK(super_proof_demand_per_epoch(0.1, 6337, 128) == Approx(4.95).epsilon(1e-3));
  CHECK(super_proof_demand_per_epoch(0, 6337, 128) == 0.0);
}

TEST_CASE("batch and bundle prover counts") {
  CHECK(derive_num_batch_provers(1342.34, 45, 1718.2, 1718.2) == 30);
  CHECK(derive_num_batch_provers(9.60, 45, 12289.19, 1718.2) == 1);
  CHECK(derive_num_batch_provers(0, 45, 1718.2, 1718.2) == 0);

  CHECK(derive_num_bundle_provers(1, 15, 518, 518) == 1);
  CHECK(derive_num_bundle_provers(30, 15, 1718.2, 518) == 1);
  CHECK(derive_num_bundle_provers(0, 15, 518, 518) == 0);
}

TEST_CASE("bundle epoch") {
  CHECK(derive_bundle_epoch(gpu(), 12289.19, 1) == Approx(518.0));

  PipelineParams p;
  p.t_super_s = 100;
  p.t_batch_s = 200;
  p.t_bundle_s = 50;
  CHECK(derive_bundle_epoch(p, 200, 15) == Approx(200));
  CHECK(derive_bundle_epoch(p, 333.5, 15) == Approx(334));  // distribution term is a ceiling
}

TEST_CASE("batches per bundle epoch") {
  CHECK(batches_per_bundle_epoch(6337, 6337) == 1.0);
  CHECK(batches_per_bundle_epoch(7491, 5297) == Approx(1.414).epsilon(1e-3));
}

TEST_CASE("derive_config chains the derivations") {
  const DerivedConfig steady = derive_config(testing::scenario_params("steady"));
  CHECK(steady.n_super == 2);
  CHECK(steady.n_batch == 1);
  CHECK(steady.n_bundle == 1);
  CHECK(steady.batch_epoch_s == Approx(12289.19));
  CHECK(steady.bundle_epoch_s == Approx(518.0));

  CHECK(derive_config(testing::scenario_params("tge")).n_super == 27);

  PipelineParams idle = gpu();
  idle.tps = 0;
  const DerivedConfig zero = derive_config(idle);
  CHECK(zero.n_super == 0);
  CHECK(zero.n_batch == 0);
  CHECK(zero.n_bundle == 0);
  CHECK(zero.batch_epoch_s >= idle.t_batch_s);
}

TEST_CASE("unit L1 prices") {
  CHECK(da_cost_per_batch(BlobDa{200'000}, 10, 3000) == Approx(6.0));
  CHECK(da_cost_per_batch(CalldataDa{16, 100'000}, 10, 3000) == Approx(48.0));
  CHECK(da_cost_per_batch(BlobDa{200'000}, 0, 3000) == 0.0);
  CHECK(da_cost_per_batch(FlatUsdPerBatch{4962.27}, 0, 0) == 4962.27);

  CHECK(verification_cost_per_bundle(300'000, 20, 3000) == Approx(18.0));
  CHECK(verification_cost_per_bundle(300'000, 0, 3000) == 0.0);
}

TEST_CASE("monthly cost") {
  const PipelineParams steady = testing::scenario_params("steady");
  const CostBreakdown base =
      monthly_cost(steady, DerivedConfig{2, 1, 1, 1718.2, 1718.2});
  CHECK(base.da_usd_month == Approx(27350.2).epsilon(0.01));
  CHECK(base.machine_usd_month == 4000.0);
  CHECK(base.total_usd_month ==
        Approx(base.da_usd_month + base.verification_usd_month + base.machine_usd_month));

  const PipelineParams surge = testing::scenario_params("surge");
  CHECK(monthly_cost(surge, DerivedConfig{1245, 30, 2, 1718.2, 1718.2}).machine_usd_month ==
        1'277'000.0);

  const CostBreakdown empty = monthly_cost(steady, DerivedConfig{0, 0, 0, 1718.2, 1718.2});
  CHECK(empty.machine_usd_month == 0.0);
  CHECK(empty.total_usd_month == 0.0);
}

TEST_CASE("scale_cost is linear") {
  const CostBreakdown c = monthly_cost(testing::scenario_params("steady"),
                                       DerivedConfig{2, 1, 1, 1718.2, 1718.2});
  const CostBreakdown half = scale_cost(c, 0.5);
  CHECK(half.total_usd_month == Approx(c.total_usd_month / 2));
  CHECK(half.da_usd_per_batch == Approx(c.da_usd_per_batch));
}

TEST_CASE("feasibility") {
  CHECK(check_feasibility(gpu()) == Feasibility::kOk);

  PipelineParams tight = gpu();
  tight.target_finality_s = 3000;
  CHECK(check_feasibility(tight) == Feasibility::kFinalityInfeasible);

  CHECK(check_feasibility(gpu(), MemoryCapacity{64, 192, 192}) ==
        Feasibility::kMemoryInfeasible);
  CHECK(check_feasibility(gpu(), MemoryCapacity{192, 192, 192}) == Feasibility::kOk);
}

TEST_CASE("invalid parameters are rejected") {
  PipelineParams p = gpu();
  p.tx_max_per_super = 0;
  CHECK_THROWS_AS(validate(p), Error);
  p = gpu();
  p.tps = -1;
  CHECK_THROWS_AS(validate(p), Error);
  p = gpu();
  p.t_batch_s = 0;
  CHECK_THROWS_AS(validate(p), Error);
}

TEST_CASE("capacity predicates") {
  const PipelineParams surge = testing::scenario_params("surge");
  const DerivedConfig base{1245, 30, 2, 1718.2, 1718.2};
  CHECK(satisfies_finality(surge, base));
  CHECK(satisfies_batch_capacity(surge, base));
  CHECK(satisfies_bundle_capacity(surge, base));
  CHECK(satisfies_super_throughput(surge, 1245));
  CHECK_FALSE(satisfies_super_throughput(surge, 1244));

  DerivedConfig short_batch = base;
  short_batch.n_batch = 29;
  CHECK_FALSE(satisfies_batch_capacity(surge, short_batch));

  DerivedConfig late = base;
  late.batch_epoch_s = 8000;
  late.bundle_epoch_s = 8000;
  CHECK_FALSE(satisfies_finality(surge, late));
}
