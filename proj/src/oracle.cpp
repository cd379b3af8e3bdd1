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

#include <chrono>
#include <limits>
#include <tuple>

#include "fixed_point.hpp"
#include "provesizer/error.hpp"
#include "provesizer/optimizer.hpp"

namespace provesizer {

namespace {

struct Best {
  std::int64_t cost = std::numeric_limits<std::int64_t>::max();
  std::int64_t ns = 0, nb = 0, nu = 0, eb = 0, eu = 0;
  bool found = false;

  auto key() const { return std::tie(cost, ns, nb, nu, eb, eu); }

  void offer(const Best& o) {
    if (o.found && (!found || o.key() < key())) *this = o;
  }
};

struct Grid {
  detail::FixedPointModel fp;
  CountRange s, b, u;
  std::int64_t nb_span = 0, nu_span = 0, rows = 0;

  Grid(const PipelineParams& params, const SearchBounds& bounds)
      : fp(detail::FixedPointModel::build(params, bounds)),
        s(bounds.super_count),
        b(bounds.batch_count),
        u(bounds.bundle_count) {
    if (s.lo < 0 || b.lo < 0 || u.lo < 0) {
      throw Error(ErrorCode::kInvalidParameter, "count bounds must be >= 0");
    }
    nb_span = std::max<std::int64_t>(b.hi - b.lo + 1, 0);
    nu_span = std::max<std::int64_t>(u.hi - u.lo + 1, 0);
    const std::int64_t ns_span = std::max<std::int64_t>(s.hi - s.lo + 1, 0);
    rows = ns_span * nb_span * nu_span * fp.lattice.points;
  }

  // One row: a count triple and a batch epoch; scans every bundle epoch.
  void scan_row(std::int64_t row, Best& best) const {
    const std::int64_t points = fp.lattice.points;
    const std::int64_t ib = row % points;
    std::int64_t rest = row / points;
    const std::int64_t nu = u.lo + rest % nu_span;
    rest /= nu_span;
    const std::int64_t nb = b.lo + rest % nb_span;
    const std::int64_t ns = s.lo + rest / nb_span;
    if (!fp.super_throughput_ok(ns)) return;
    const std::int64_t eb = fp.lattice.at(ib);
    for (std::int64_t iu = ib; iu < points; ++iu) {
      const std::int64_t eu = fp.lattice.at(iu);
      if (fp.ts + eb + eu > fp.tf) break;
      const auto cost = fp.evaluate(ns, nb, nu, eb, eu);
      if (!cost) continue;
      best.offer(Best{*cost, ns, nb, nu, eb, eu, true});
    }
  }
};

SolverOutcome finish(const Best& best, std::chrono::steady_clock::time_point start,
                     const char* identity) {
  SolverOutcome out;
  out.solver_identity = identity;
  out.solve_time_s = std::chrono::duration<double>(
                         std::chrono::steady_clock::now() - start)
                         .count();
  if (!best.found) {
    out.status = SolveStatus::kInfeasible;
    return out;
  }
  out.status = SolveStatus::kOptimal;
  DerivedConfig c;
  c.n_super = best.ns;
  c.n_batch = best.nb;
  c.n_bundle = best.nu;
  c.batch_epoch_s = static_cast<double>(best.eb) / detail::kTimeScale;
  c.bundle_epoch_s = static_cast<double>(best.eu) / detail::kTimeScale;
  out.config = c;
  out.objective_usd =
      static_cast<double>(best.cost) / static_cast<double>(detail::kMoneyScale);
  return out;
}

void check_size(const PipelineParams& params, const SearchBounds& bounds) {
  if (oracle_grid_points(params, bounds) > kMaxOracleGridPoints) {
    throw Error(ErrorCode::kBoundsTooLarge,
                "search grid too large for exhaustive enumeration");
  }
}

}  // namespace

std::int64_t oracle_grid_points(const PipelineParams& params,
                                const SearchBounds& bounds) {
  const Grid g(params, bounds);
  const std::int64_t points = g.fp.lattice.points;
  std::int64_t out = 0;
  if (__builtin_mul_overflow(g.rows, points, &out)) {
    return std::numeric_limits<std::int64_t>::max();
  }
  return out;
}

SolverOutcome brute_force_oracle_serial(const PipelineParams& params,
                                        const SearchBounds& bounds) {
  const auto start = std::chrono::steady_clock::now();
  check_size(params, bounds);
  const Grid g(params, bounds);
  Best best;
  for (std::int64_t row = 0; row < g.rows; ++row) g.scan_row(row, best);
  return finish(best, start, "oracle-serial");
}

SolverOutcome brute_force_oracle(const PipelineParams& params,
                                 const SearchBounds& bounds) {
  const auto start = std::chrono::steady_clock::now();
  check_size(params, bounds);
  const Grid g(params, bounds);
  Best best;
#pragma omp parallel
  {
    Best local;
#pragma omp for schedule(dynamic, 64) nowait
    for (std::int64_t row = 0; row < g.rows; ++row) g.scan_row(row, local);
#pragma omp critical
    best.offer(local);
  }
  return finish(best, start, "oracle-openmp");
}

}  // namespace provesizer
