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

#include "provesizer/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "fixed_point.hpp"
#include "provesizer/error.hpp"
#include "provesizer/sexpr.hpp"
#include "provesizer/smt_process.hpp"

namespace provesizer {

namespace {

using detail::checked_add;
using detail::checked_mul;
using detail::kTimeScale;
using detail::to_cs_down;
using detail::to_cs_up;

class Writer {
 public:
  void line(const std::string& s) {
    out_ << s << '\n';
  }
  void declare(const std::string& name) {
    out_ << "(declare-const " << name << " Int)\n";
  }
  void assert_(const std::string& s) { out_ << "(assert " << s << ")\n"; }
  void comment(const std::string& s) { out_ << "; " << s << '\n'; }
  std::string str() const { return out_.str(); }

 private:
  std::ostringstream out_;
};

std::string num(std::int64_t v) {
  if (v < 0) return "(- " + std::to_string(-v) + ")";
  return std::to_string(v);
}

constexpr std::int64_t kTangentCuts = 32;

}  // namespace

std::string tangent_cut(const ConvexCostTerm& t, std::int64_t e0) {
  // cost * e0^2 >= count * k * (2 e0 - epoch)
  return "(assert (>= (* " + num(checked_mul(e0, e0)) + " " + t.cost +
         ") (* " + num(t.k) + " " + t.count + " (- " +
         num(checked_mul(2, e0)) + " " + t.epoch + "))))";
}

EpochLattice resolve_lattice(const PipelineParams& p, const SearchBounds& b) {
  if (!(b.epoch_granularity_s > 0.0)) {
    throw Error(ErrorCode::kInvalidParameter,
                "epoch granularity must be positive");
  }
  EpochLattice lat;
  lat.step_cs = std::llround(b.epoch_granularity_s * kTimeScale);
  if (lat.step_cs < 1) {
    throw Error(ErrorCode::kInvalidParameter,
                "epoch granularity below 0.01 s is not representable");
  }
  lat.floor_cs = std::max({to_cs_up(p.t_super_s), to_cs_up(p.t_batch_s),
                           to_cs_up(p.t_bundle_s)});
  if (b.epoch_floor_s) lat.floor_cs = std::max(lat.floor_cs, to_cs_up(*b.epoch_floor_s));
  std::int64_t ceiling_cs =
      to_cs_down(p.target_finality_s) - to_cs_up(p.t_super_s) - lat.floor_cs;
  if (b.epoch_ceiling_s) ceiling_cs = std::min(ceiling_cs, to_cs_down(*b.epoch_ceiling_s));
  lat.points =
      ceiling_cs < lat.floor_cs ? 0 : (ceiling_cs - lat.floor_cs) / lat.step_cs + 1;
  return lat;
}

SearchBounds default_bounds(const PipelineParams& params,
                            double epoch_granularity_s) {
  const DerivedConfig d = derive_config(params);
  SearchBounds b;
  b.super_count = {0, 2 * d.n_super + 2};
  b.batch_count = {0, 2 * d.n_batch + 2};
  b.bundle_count = {0, 2 * d.n_bundle + 2};
  b.epoch_granularity_s = epoch_granularity_s;
  return b;
}

Encoding encode(const PipelineParams& p, const SearchBounds& b,
                const OptimizeMode& mode) {
  validate(p);
  const auto* fixed = std::get_if<FixedFleet>(&mode);

  const detail::FixedPointModel fp = detail::FixedPointModel::build(p, b);
  const EpochLattice& lat = fp.lattice;
  const std::int64_t max_epoch_cs =
      lat.points > 0 ? lat.at(lat.points - 1) : lat.floor_cs;

  Encoding enc;
  enc.time_scale = detail::kTimeScale;
  enc.money_scale = detail::kMoneyScale;
  enc.logic = "QF_NIA";
  enc.variable_names = {
      {"n_super", "n_super"},
      {"n_batch", "n_batch"},
      {"n_bundle", "n_bundle"},
      {"batch_epoch", "batch_epoch_cs"},
      {"bundle_epoch", "bundle_epoch_cs"},
      {"da_cost", "da_cost"},
      {"verification_cost", "verification_cost"},
      {"machine_cost", "machine_cost"},
      {"total_cost", "total_cost"},
  };

  // In fixed-fleet mode the counts become literals, which keeps the
  // capacity constraints linear.
  auto count = [&](const char* name, std::int64_t fixed_value) {
    return fixed ? num(fixed_value) : std::string(name);
  };
  const std::string ns = count("n_super", fixed ? fixed->fleet.n_super : 0);
  const std::string nb = count("n_batch", fixed ? fixed->fleet.n_batch : 0);
  const std::string nu = count("n_bundle", fixed ? fixed->fleet.n_bundle : 0);

  Writer w;
  w.line("(set-option :print-success false)");
  w.line("(set-option :produce-models true)");
  w.line("(set-logic " + enc.logic + ")");
  for (const char* v :
       {"n_super", "n_batch", "n_bundle", "batch_epoch_idx", "bundle_epoch_idx",
        "batch_epoch_cs", "bundle_epoch_cs", "batch_rounds", "bundle_rounds",
        "super_demand", "batches_per_epoch", "batch_ticks", "batch_demand",
        "da_cost", "verification_cost", "machine_cost", "total_cost"}) {
    w.declare(v);
  }

  w.comment("fleet");
  auto range = [&](const char* name, const CountRange& r, std::int64_t pinned) {
    if (fixed) {
      w.assert_("(= " + std::string(name) + " " + num(pinned) + ")");
    } else {
      w.assert_("(and (>= " + std::string(name) + " " + num(r.lo) + ") (<= " +
                name + " " + num(r.hi) + "))");
    }
  };
  range("n_super", b.super_count, fixed ? fixed->fleet.n_super : 0);
  range("n_batch", b.batch_count, fixed ? fixed->fleet.n_batch : 0);
  range("n_bundle", b.bundle_count, fixed ? fixed->fleet.n_bundle : 0);

  w.comment("epochs on the lattice floor + step * idx (centiseconds)");
  if (lat.points == 0) {
    w.assert_("false");
  } else {
    for (const char* idx : {"batch_epoch_idx", "bundle_epoch_idx"}) {
      w.assert_("(and (>= " + std::string(idx) + " 0) (<= " + idx + " " +
                num(lat.points - 1) + "))");
    }
  }
  w.assert_("(= batch_epoch_cs (+ " + num(lat.floor_cs) + " (* " +
            num(lat.step_cs) + " batch_epoch_idx)))");
  w.assert_("(= bundle_epoch_cs (+ " + num(lat.floor_cs) + " (* " +
            num(lat.step_cs) + " bundle_epoch_idx)))");

  w.comment("finality");
  w.assert_("(<= (+ " + num(fp.ts) + " batch_epoch_cs bundle_epoch_cs) " + num(fp.tf) + ")");

  w.comment("ordering");
  w.assert_("(>= batch_epoch_cs " + num(fp.ts) + ")");
  w.assert_("(>= batch_epoch_cs " + num(fp.tb) + ")");
  w.assert_("(>= bundle_epoch_cs batch_epoch_cs)");
  w.assert_("(>= bundle_epoch_cs " + num(fp.tu) + ")");

  w.comment("rounds per epoch: floor(epoch / proof time)");
  w.assert_("(<= (* " + num(fp.tb) + " batch_rounds) batch_epoch_cs)");
  w.assert_("(< batch_epoch_cs (* " + num(fp.tb) + " (+ batch_rounds 1)))");
  w.assert_("(<= (* " + num(fp.tu) + " bundle_rounds) bundle_epoch_cs)");
  w.assert_("(< bundle_epoch_cs (* " + num(fp.tu) + " (+ bundle_rounds 1)))");

  w.comment("super proofs per batch epoch: ceil(tps * epoch / tx_max)");
  w.assert_("(>= (* " + num(fp.demand_den) + " super_demand) (* " + num(fp.tps_num) +
            " batch_epoch_cs))");
  w.assert_("(< (* " + num(fp.demand_den) + " (- super_demand 1)) (* " +
            num(fp.tps_num) + " batch_epoch_cs))");

  w.comment("super-tier throughput: tps * t_super <= n_super * tx_max");
  w.assert_("(<= " + num(fp.throughput_lhs) + " (* " + num(fp.throughput_coeff) +
            " " + ns + "))");

  w.comment("batch capacity");
  w.assert_("(>= (* " + num(p.max_super_proofs_per_batch) + " " + nb +
            " batch_rounds) super_demand)");

  w.comment("batch proofs per batch epoch and per bundle epoch");
  const std::string spb = num(p.max_super_proofs_per_batch);
  w.assert_("(>= (* " + spb + " batches_per_epoch) super_demand)");
  w.assert_("(< (* " + spb + " (- batches_per_epoch 1)) super_demand)");
  w.assert_("(>= batch_ticks 1)");
  w.assert_("(>= (* batch_epoch_cs batch_ticks) bundle_epoch_cs)");
  w.assert_("(< (* batch_epoch_cs (- batch_ticks 1)) bundle_epoch_cs)");
  w.assert_("(= batch_demand (* batch_ticks batches_per_epoch))");

  w.comment("bundle capacity");
  w.assert_("(>= (* " + num(p.max_batch_proofs_per_bundle) + " " + nu +
            " bundle_rounds) batch_demand)");

  w.comment("monthly cost in 1e-4 USD: count * unit * month / epoch, rounded up");
  w.assert_("(>= da_cost 0)");
  w.assert_("(>= (* da_cost batch_epoch_cs) (* " + num(fp.da_k) + " " + nb + "))");
  w.assert_("(>= verification_cost 0)");
  w.assert_("(>= (* verification_cost bundle_epoch_cs) (* " + num(fp.verif_k) +
            " " + nu + "))");
  w.assert_("(= machine_cost (+ (* " + num(fp.m_super) + " " + ns + ") (* " +
            num(fp.m_batch) + " " + nb + ") (* " + num(fp.m_bundle) + " " + nu + ")))");
  w.assert_("(= total_cost (+ machine_cost da_cost verification_cost))");

  // Tangents only help while they stay linear, i.e. with literal counts.
  // With symbolic counts they add products and slow nonlinear search.
  if (fixed) {
    enc.convex_terms = {{"da_cost", nb, "batch_epoch_cs", fp.da_k},
                        {"verification_cost", nu, "bundle_epoch_cs", fp.verif_k}};
  }
  if (fixed && lat.points > 0) {
    w.comment("tangent cuts, implied by the cost terms above");
    const std::int64_t steps = std::min<std::int64_t>(kTangentCuts, lat.points);
    for (std::int64_t i = 0; i < steps; ++i) {
      const std::int64_t e0 =
          lat.at(steps == 1 ? 0 : i * (lat.points - 1) / (steps - 1));
      for (const auto& term : enc.convex_terms) w.line(tangent_cut(term, e0));
    }
  }
  enc.text = w.str();

  // Machine floor plus L1 at the longest epochs: a valid lower bound.
  const std::int64_t lo_s = fixed ? fixed->fleet.n_super : b.super_count.lo;
  const std::int64_t lo_b = fixed ? fixed->fleet.n_batch : b.batch_count.lo;
  const std::int64_t lo_u = fixed ? fixed->fleet.n_bundle : b.bundle_count.lo;
  std::int64_t lb = checked_add(
      checked_add(checked_mul(fp.m_super, std::max<std::int64_t>(lo_s, 0)),
                  checked_mul(fp.m_batch, std::max<std::int64_t>(lo_b, 0))),
      checked_mul(fp.m_bundle, std::max<std::int64_t>(lo_u, 0)));
  if (max_epoch_cs > 0) {
    lb = checked_add(lb, checked_mul(fp.da_k, std::max<std::int64_t>(lo_b, 0)) / max_epoch_cs);
    lb = checked_add(lb, checked_mul(fp.verif_k, std::max<std::int64_t>(lo_u, 0)) / max_epoch_cs);
  }
  enc.objective_lower_bound = lb;
  return enc;
}

std::string_view to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::kOptimal: return "optimal";
    case SolveStatus::kFeasible: return "feasible";
    case SolveStatus::kInfeasible: return "infeasible";
    case SolveStatus::kTimeout: return "timeout";
    case SolveStatus::kSolverError: return "solver_error";
  }
  return "solver_error";
}

namespace {

struct Model {
  DerivedConfig config;
  std::int64_t objective = 0;
};

enum class Reply { kSat, kUnsat, kUnknown, kTimeout, kError };

class Session {
 public:
  Session(const SolverEndpoint& endpoint, smt::Clock::time_point deadline)
      : proc_(endpoint.command, endpoint.args), deadline_(deadline) {}

  bool send(const std::string& s) { return proc_.send(s); }

  // Reads one response; sets error_ on solver errors or EOF.
  std::optional<std::string> read() {
    auto r = proc_.read_response(deadline_);
    if (!r) {
      if (proc_.eof()) error_ = "solver closed its output";
      return std::nullopt;
    }
    if (r->rfind("(error", 0) == 0) {
      error_ = *r;
      return std::nullopt;
    }
    return r;
  }

  std::string identity() {
    send("(get-info :name)\n(get-info :version)\n");
    std::string out;
    for (int i = 0; i < 2; ++i) {
      auto r = proc_.read_response(deadline_);
      if (!r) break;
      try {
        const smt::SExpr e = smt::parse(*r);
        if (e.is_list && e.list.size() == 2 && !e.list[1].is_list) {
          std::string v = e.list[1].atom;
          if (v.size() >= 2 && v.front() == '"') v = v.substr(1, v.size() - 2);
          if (!out.empty()) out += ' ';
          out += v;
        }
      } catch (const std::invalid_argument&) {
      }
    }
    return out.empty() ? "unknown" : out;
  }

  Reply check() {
    if (smt::Clock::now() >= deadline_) return Reply::kTimeout;
    if (!send("(check-sat)\n")) {
      error_ = "solver closed its input";
      return Reply::kError;
    }
    auto r = read();
    if (!r) return error_.empty() ? Reply::kTimeout : Reply::kError;
    if (*r == "sat") return Reply::kSat;
    if (*r == "unsat") return Reply::kUnsat;
    if (*r == "unknown") return Reply::kUnknown;
    error_ = "unexpected reply: " + *r;
    return Reply::kError;
  }

  std::optional<Model> model(const Encoding& enc) {
    const auto& v = enc.variable_names;
    const std::string names[] = {v.at("n_super"), v.at("n_batch"),
                                 v.at("n_bundle"), v.at("batch_epoch"),
                                 v.at("bundle_epoch"), v.at("total_cost")};
    std::string q = "(get-value (";
    for (const auto& n : names) q += n + " ";
    q += "))\n";
    send(q);
    auto r = read();
    if (!r) return std::nullopt;
    try {
      const smt::SExpr e = smt::parse(*r);
      std::map<std::string, std::int64_t> values;
      for (const auto& pair : e.list) {
        if (!pair.is_list || pair.list.size() != 2) {
          throw std::invalid_argument("malformed binding");
        }
        values[pair.list[0].atom] = smt::to_int(pair.list[1]);
      }
      Model m;
      m.config.n_super = values.at(names[0]);
      m.config.n_batch = values.at(names[1]);
      m.config.n_bundle = values.at(names[2]);
      m.config.batch_epoch_s = static_cast<double>(values.at(names[3])) /
                               static_cast<double>(enc.time_scale);
      m.config.bundle_epoch_s = static_cast<double>(values.at(names[4])) /
                                static_cast<double>(enc.time_scale);
      m.objective = values.at(names[5]);
      return m;
    } catch (const std::exception& ex) {
      error_ = std::string("cannot parse model: ") + ex.what();
      return std::nullopt;
    }
  }

  const std::string& error() const { return error_; }

 private:
  smt::SolverProcess proc_;
  smt::Clock::time_point deadline_;
  std::string error_;
};

}  // namespace

SolverOutcome solve(const Encoding& enc, const SolverEndpoint& endpoint,
                    double timeout_s) {
  const auto start = smt::Clock::now();
  SolverOutcome out;
  auto finish = [&](SolveStatus s) {
    out.status = s;
    out.solve_time_s =
        std::chrono::duration<double>(smt::Clock::now() - start).count();
    return out;
  };
  if (!(timeout_s > 0.0)) {
    out.message = "zero time budget";
    return finish(SolveStatus::kTimeout);
  }
  const auto deadline =
      start + std::chrono::duration_cast<smt::Clock::duration>(
                  std::chrono::duration<double>(std::min(timeout_s, 1e9)));

  Session session(endpoint, deadline);
  session.send("(set-option :print-success false)\n");
  for (const auto& opt : endpoint.options) session.send(opt + "\n");
  out.solver_identity = session.identity();
  session.send(enc.text);

  std::optional<Model> incumbent;
  std::vector<std::string> cuts;
  auto adopt = [&](const Model& m) {
    const std::int64_t epochs[] = {
        std::llround(m.config.batch_epoch_s * enc.time_scale),
        std::llround(m.config.bundle_epoch_s * enc.time_scale)};
    for (const auto& term : enc.convex_terms) {
      for (std::int64_t e0 : epochs) cuts.push_back(tangent_cut(term, e0));
    }
    incumbent = m;
    out.config = m.config;
    out.objective_usd =
        static_cast<double>(m.objective) / static_cast<double>(enc.money_scale);
  };
  auto stop = [&](Reply r) {
    if (r == Reply::kTimeout) {
      out.message = "deadline reached";
      return finish(SolveStatus::kTimeout);
    }
    if (r == Reply::kError) {
      out.message = session.error();
      return finish(incumbent ? SolveStatus::kFeasible : SolveStatus::kSolverError);
    }
    out.message = "solver returned unknown";
    return finish(incumbent ? SolveStatus::kFeasible : SolveStatus::kSolverError);
  };

  const auto& total = enc.variable_names.at("total_cost");
  if (endpoint.native_minimize) {
    session.send("(minimize " + total + ")\n");
  }
  ++out.queries;
  const Reply first = session.check();
  if (first == Reply::kUnsat) return finish(SolveStatus::kInfeasible);
  if (first != Reply::kSat) return stop(first);
  auto m = session.model(enc);
  if (!m) return stop(Reply::kError);
  adopt(*m);
  if (endpoint.native_minimize) return finish(SolveStatus::kOptimal);

  std::int64_t lo = std::min(enc.objective_lower_bound, incumbent->objective);
  std::int64_t hi = incumbent->objective;
  while (hi - lo >= std::max<std::int64_t>(enc.objective_tolerance, 1)) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    session.send("(push 1)\n(assert (<= " + total + " " + std::to_string(mid) +
                 "))\n");
    ++out.queries;
    const Reply r = session.check();
    if (r == Reply::kSat) {
      auto better = session.model(enc);
      if (!better) return stop(Reply::kError);
      adopt(*better);
      hi = better->objective;
    } else if (r == Reply::kUnsat) {
      lo = mid + 1;
    } else {
      return stop(r);
    }
    session.send("(pop 1)\n");
    // Cuts are valid globally, so they go outside the push scope.
    for (const auto& c : cuts) session.send(c + "\n");
    cuts.clear();
  }
  session.send("(exit)\n");
  return finish(SolveStatus::kOptimal);
}

double granularity_cost_step(const PipelineParams& params,
                             const DerivedConfig& config,
                             double epoch_granularity_s) {
  const double base = monthly_cost(params, config).total_usd_month;
  DerivedConfig shorter = config;
  shorter.batch_epoch_s -= epoch_granularity_s;
  shorter.bundle_epoch_s -= epoch_granularity_s;
  if (shorter.batch_epoch_s <= 0.0 || shorter.bundle_epoch_s <= 0.0) {
    shorter.batch_epoch_s = config.batch_epoch_s + epoch_granularity_s;
    shorter.bundle_epoch_s = config.bundle_epoch_s + epoch_granularity_s;
  }
  return std::abs(monthly_cost(params, shorter).total_usd_month - base);
}

OptimizeResult optimize(const PipelineParams& params, const OptimizeMode& mode,
                        const SolverEndpoint& endpoint, double timeout_s,
                        const std::optional<SearchBounds>& bounds) {
  validate(params);
  if (check_feasibility(params) != Feasibility::kOk) {
    throw Error(ErrorCode::kFinalityInfeasible,
                "t_super + t_batch + t_bundle exceeds the finality target");
  }
  SearchBounds b;
  if (bounds) {
    b = *bounds;
  } else if (std::holds_alternative<FixedFleet>(mode)) {
    b.epoch_granularity_s = 1.0;
  } else {
    b = default_bounds(params);
  }
  if (const auto* fixed = std::get_if<FixedFleet>(&mode)) {
    b.super_count = {fixed->fleet.n_super, fixed->fleet.n_super};
    b.batch_count = {fixed->fleet.n_batch, fixed->fleet.n_batch};
    b.bundle_count = {fixed->fleet.n_bundle, fixed->fleet.n_bundle};
  }

  OptimizeResult result;
  result.outcome = solve(encode(params, b, mode), endpoint, timeout_s);
  if (!result.outcome.config) return result;

  const DerivedConfig& c = *result.outcome.config;
  if (!satisfies_finality(params, c) || !satisfies_batch_capacity(params, c) ||
      !satisfies_bundle_capacity(params, c) ||
      !satisfies_super_throughput(params, c.n_super)) {
    result.outcome.status = SolveStatus::kSolverError;
    result.outcome.message = "solver configuration violates the cost model";
    result.outcome.config.reset();
    return result;
  }
  result.config = c;
  result.cost = monthly_cost(params, c);
  return result;
}

}  // namespace provesizer
