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

#include "provesizer/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <ostream>

#include "provesizer/cost_model.hpp"
#include "provesizer/error.hpp"

namespace provesizer {

namespace {

// Neumaier summation keeps month-long totals conserved to ~1e-10.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

bool exceeds(double pool, double capacity) {
  return pool > capacity + 1e-9 * std::max(1.0, capacity);
}

void trace_line(std::ostream* out, const char* kind, const SimState& s) {
  if (!out) return;
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%.6f\t%s\t%.6f\t%.6f\t%lld\t%lld\t%lld\n",
                s.simulation_time_s, kind, s.proof_pool, s.batch_pool,
                static_cast<long long>(s.e_batch),
                static_cast<long long>(s.e_bundle),
                static_cast<long long>(s.bundles_finalized));
  *out << buf;
}

}  // namespace

std::string_view lag_name(const Lag& lag) {
  switch (lag.index()) {
    case 0: return "none";
    case 1: return "batch_prover_lag";
    case 2: return "bundle_prover_lag";
    default: return "throughput_violation";
  }
}

Lag throughput_guard(const PipelineParams& p, const DerivedConfig& c) {
  if (satisfies_super_throughput(p, c.n_super)) return NoLag{};
  return ThroughputViolation{};
}

std::int64_t bundle_epochs_for_days(double days, double bundle_epoch_s) {
  if (!(bundle_epoch_s > 0.0)) {
    throw Error(ErrorCode::kInvalidConfig, "bundle epoch must be positive");
  }
  if (!(days > 0.0)) return 0;
  return ceil_count(days * 86400.0 / bundle_epoch_s);
}

SimulationResult simulate(const PipelineParams& p, const DerivedConfig& c,
                          std::int64_t max_bundle_epochs,
                          const SimOptions& options) {
  if (!(c.batch_epoch_s > 0.0) || !(c.bundle_epoch_s > 0.0)) {
    throw Error(ErrorCode::kInvalidConfig, "epochs must be positive");
  }
  SimulationResult result;
  if (!lag_free(throughput_guard(p, c))) {
    result.lag = ThroughputViolation{};
    return result;
  }

  const double rate =
      std::min(p.tps / static_cast<double>(p.tx_max_per_super),
               static_cast<double>(c.n_super) / p.t_super_s);
  const double spb = static_cast<double>(p.max_super_proofs_per_batch);
  const double bpb = static_cast<double>(p.max_batch_proofs_per_bundle);
  const double batch_capacity =
      static_cast<double>(c.n_batch) * spb *
      (options.strict_paper_lag
           ? 1.0
           : static_cast<double>(floor_count(c.batch_epoch_s / p.t_batch_s)));
  const double bundle_capacity =
      static_cast<double>(c.n_bundle) * bpb *
      (options.strict_paper_lag
           ? 1.0
           : static_cast<double>(floor_count(c.bundle_epoch_s / p.t_bundle_s)));

  if (options.trace) {
    *options.trace
        << "time_s\tevent\tproof_pool\tbatch_pool\te_batch\te_bundle\tbundles\n";
  }

  SimState s;
  CompensatedSum accumulated;
  CompensatedSum consumed;
  SimTotals& totals = result.totals;
  // Accumulation-window start of the oldest batch tick still in batch_pool.
  double oldest_window_start = -1.0;

  while (s.e_bundle < max_bundle_epochs) {
    const double next_batch = static_cast<double>(s.e_batch + 1) * c.batch_epoch_s;
    const double next_bundle =
        static_cast<double>(s.e_bundle + 1) * c.bundle_epoch_s;
    const bool batch_first =
        next_batch <= next_bundle + 1e-9 * std::max(1.0, next_bundle);
    const double t = std::max(s.simulation_time_s,
                              batch_first ? next_batch : next_bundle);

    const double produced = rate * (t - s.last_accumulation_time_s);
    s.proof_pool += produced;
    accumulated.add(produced);
    s.last_accumulation_time_s = t;
    s.simulation_time_s = t;

    if (batch_first) {
      if (exceeds(s.proof_pool, batch_capacity)) {
        result.lag = BatchProverLag{t, s.proof_pool};
        trace_line(options.trace, "batch_lag", s);
        break;
      }
      const std::int64_t batches = ceil_count(s.proof_pool / spb);
      if (batches > 0 && oldest_window_start < 0.0) {
        oldest_window_start = static_cast<double>(s.e_batch) * c.batch_epoch_s;
      }
      consumed.add(s.proof_pool);
      s.proof_pool = 0.0;
      s.batch_pool += static_cast<double>(batches);
      totals.batch_proofs_produced += batches;
      ++s.e_batch;
      trace_line(options.trace, "batch", s);
    } else {
      if (exceeds(s.batch_pool, bundle_capacity)) {
        result.lag = BundleProverLag{t, s.batch_pool};
        trace_line(options.trace, "bundle_lag", s);
        break;
      }
      const std::int64_t bundles = ceil_count(s.batch_pool / bpb);
      if (bundles > 0) {
        result.max_observed_finality_s =
            std::max(result.max_observed_finality_s,
                     t - oldest_window_start + p.t_super_s);
        oldest_window_start = -1.0;
      }
      totals.batch_proofs_consumed += static_cast<std::int64_t>(s.batch_pool);
      totals.bundles_produced += bundles;
      s.bundles_finalized += bundles;
      s.batch_pool = 0.0;
      ++s.e_bundle;
      trace_line(options.trace, "bundle", s);
    }
  }

  totals.super_proofs_accumulated = accumulated.value();
  totals.super_proofs_consumed = consumed.value();
  result.bundle_epochs_completed = s.e_bundle;
  result.batch_epochs_completed = s.e_batch;
  result.final_state = s;
  if (s.simulation_time_s > 0.0) {
    result.cost = scale_cost(monthly_cost(p, c),
                             s.simulation_time_s / p.month_seconds);
  }
  return result;
}

SimulationResult replay_scenario(const Scenario& scenario, const MachineSpec& machine,
                                 const DerivedConfig& config, double days,
                                 const SimOptions& options, const PipelineParams& base) {
  const PipelineParams params = to_params(scenario, machine, base);
  return simulate(params, config, bundle_epochs_for_days(days, config.bundle_epoch_s),
                  options);
}

SimulationResult replay_scenario(const Catalog& catalog, std::string_view scenario,
                                 std::string_view machine, const DerivedConfig& config,
                                 double days, const SimOptions& options) {
  return replay_scenario(find_scenario(catalog, scenario), find_machine(catalog, machine),
                         config, days, options);
}

std::vector<SimulationResult> simulate_all_serial(
    const std::vector<SimulationJob>& jobs) {
  std::vector<SimulationResult> out(jobs.size());
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const auto& j = jobs[i];
    SimOptions o;
    o.strict_paper_lag = j.strict_paper_lag;
    out[i] = simulate(j.params, j.config, j.max_bundle_epochs, o);
  }
  return out;
}

std::vector<SimulationResult> simulate_all(const std::vector<SimulationJob>& jobs) {
  std::vector<SimulationResult> out(jobs.size());
  const auto n = static_cast<std::int64_t>(jobs.size());
  // Exceptions must not cross the parallel region.
  std::vector<std::exception_ptr> errors(jobs.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t i = 0; i < n; ++i) {
    try {
      const auto& j = jobs[static_cast<std::size_t>(i)];
      SimOptions o;
      o.strict_paper_lag = j.strict_paper_lag;
      out[static_cast<std::size_t>(i)] =
          simulate(j.params, j.config, j.max_bundle_epochs, o);
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

}  // namespace provesizer
