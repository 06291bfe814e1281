// Copyright 2026 The qds Authors
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


#include "qds/adversary.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

#include "detail/parallel_for.hpp"
#include "qds/error.hpp"

namespace qds {

namespace {

bool touches_machine(const TraceStep& step, std::size_t k) {
  if (const auto* call = std::get_if<OracleCall>(&step)) return call->machine == k;
  return std::holds_alternative<ParallelOracleCall>(step);
}

std::size_t count_machine_calls(const AlgorithmTrace& trace, std::size_t k) {
  return static_cast<std::size_t>(std::count_if(
      trace.steps.begin(), trace.steps.end(),
      [k](const TraceStep& step) { return touches_machine(step, k); }));
}

double distance_sq(const StateVector& a, const StateVector& b) {
  const double d = distance(a, b);
  return d * d;
}

// Replays the trace and reports the state around every machine-k query.
void replay(const AlgorithmTrace& trace, const DistributedDatabase& db, std::size_t k,
            StateVector& state,
            const std::function<void(std::size_t, std::size_t, const StateVector&)>& before,
            const std::function<void(std::size_t, const StateVector&)>& after) {
  QueryCounter counter(db.machines());
  std::size_t t = 0;
  for (std::size_t s = 0; s < trace.steps.size(); ++s) {
    const bool hit = touches_machine(trace.steps[s], k);
    if (hit && before) before(t, s, state);
    apply_step(state, db, trace.steps[s], counter);
    if (hit) {
      ++t;
      if (after) after(t, state);
    }
  }
}

BoundCheck make_check(std::string name, double slack, double tolerance, std::string detail) {
  return {std::move(name), slack >= -tolerance ? CheckStatus::pass : CheckStatus::fail, slack,
          std::move(detail)};
}

BoundCheck not_applicable(std::string name, std::string detail) {
  return {std::move(name), CheckStatus::not_applicable, 0.0, std::move(detail)};
}

}  // namespace

std::vector<std::string> HardInputCheck::failures() const {
  std::vector<std::string> out;
  if (!majority) out.emplace_back("majority");
  if (!density) out.emplace_back("density");
  if (!headroom) out.emplace_back("headroom");
  return out;
}

HardInputCheck check_hard_input(const DistributedDatabase& db, const HardInputParams& params) {
  HardInputCheck check;
  const auto& stats = db.stats();
  check.total = stats.total;
  if (params.k >= db.machines()) {
    check.note = "machine " + std::to_string(params.k + 1) + " does not exist";
    return check;
  }
  const std::size_t k = params.k;
  check.machine_size = stats.machine_sizes[k];
  check.support = stats.machine_supports[k];
  check.capacity = stats.machine_capacities[k];
  Count others = 0;
  for (std::size_t j = 0; j < db.machines(); ++j) {
    if (j != k) others = std::max(others, stats.machine_capacities[j]);
  }
  check.capacity_sum = others + check.capacity;
  const double mk = static_cast<double>(check.machine_size);
  check.majority = check.machine_size > 0 && mk >= params.alpha * static_cast<double>(stats.total);
  check.density = check.support > 0 &&
                  mk / static_cast<double>(check.support) >=
                      params.beta * static_cast<double>(check.capacity);
  check.headroom = check.capacity_sum <= db.capacity();
  return check;
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t r) {
  if (r > n) return 0;
  r = std::min(r, n - r);
  std::uint64_t acc = 1;
  for (std::uint64_t i = 1; i <= r; ++i) {
    // acc * (n - r + i) / i is integral; divide out the common factor first.
    const std::uint64_t g = std::gcd(acc, i);
    const std::uint64_t factor = (n - r + i) / (i / g);
    acc /= g;
    if (acc > std::numeric_limits<std::uint64_t>::max() / factor) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    acc *= factor;
  }
  return acc;
}

HardInputFamily enumerate_family(const DistributedDatabase& db, const HardInputParams& params,
                                 std::size_t limit) {
  const auto check = check_hard_input(db, params);
  if (!check.passed()) {
    std::string clauses;
    for (const auto& f : check.failures()) clauses += (clauses.empty() ? "" : ", ") + f;
    if (!check.note.empty()) clauses += " (" + check.note + ")";
    fail(ErrorCode::hard_input, "hard-input conditions fail: " + clauses);
  }
  const std::size_t n = db.universe();
  const std::size_t m = check.support;
  const auto size = binomial(n, m);
  if (size > limit) {
    fail(ErrorCode::family_too_large, "family has " + std::to_string(size) +
                                          " members, limit is " + std::to_string(limit));
  }
  std::vector<Count> multiplicities;
  for (const Count c : db.row(params.k)) {
    if (c > 0) multiplicities.push_back(c);
  }
  HardInputFamily family{db, params, {}};
  family.members.reserve(size);
  std::vector<std::size_t> subset(m);
  for (std::size_t i = 0; i < m; ++i) subset[i] = i;
  while (true) {
    std::vector<Count> row(n, 0);
    for (std::size_t i = 0; i < m; ++i) row[subset[i]] = multiplicities[i];
    family.members.push_back(db.with_row(params.k, std::move(row)));
    // Next combination in lexicographic order.
    std::size_t pos = m;
    while (pos > 0 && subset[pos - 1] == n - m + pos - 1) --pos;
    if (pos == 0) break;
    ++subset[pos - 1];
    for (std::size_t i = pos; i < m; ++i) subset[i] = subset[i - 1] + 1;
  }
  return family;
}

std::vector<StateVector> erased_trajectory(const DistributedDatabase& db, std::size_t k,
                                           const AlgorithmTrace& trace) {
  if (k >= db.machines()) fail(ErrorCode::index, "machine index out of range");
  validate_trace(trace, db);
  const auto erased = db.with_machine_cleared(k);
  StateVector state(sampler_layout(db, trace.model));
  std::vector<StateVector> snapshots;
  bool first = true;
  replay(
      trace, erased, k, state,
      [&](std::size_t, std::size_t, const StateVector& s) {
        if (first) snapshots.push_back(s);
        first = false;
      },
      [&](std::size_t, const StateVector& s) { snapshots.push_back(s); });
  if (snapshots.empty()) snapshots.push_back(state);
  return snapshots;
}

PairSimulation simulate_pair(const HardInputFamily& family, const AlgorithmTrace& trace,
                             unsigned threads) {
  const auto& base = family.base;
  const std::size_t k = family.params.k;
  if (k >= base.machines()) fail(ErrorCode::index, "machine index out of range");
  validate_trace(trace, base);
  const auto erased = base.with_machine_cleared(k);
  const auto layout = sampler_layout(base, trace.model);

  PairSimulation sim{trace.model, count_machine_calls(trace, k), {}, {}, StateVector(layout)};
  std::vector<StateVector> pre_call;
  std::vector<std::size_t> call_steps;
  StateVector state(layout);
  sim.erased_snapshots.push_back(state);
  replay(
      trace, erased, k, state,
      [&](std::size_t t, std::size_t s, const StateVector& psi) {
        if (t == 0) sim.erased_snapshots.front() = psi;
        pre_call.push_back(psi);
        call_steps.push_back(s);
      },
      [&](std::size_t, const StateVector& psi) { sim.erased_snapshots.push_back(psi); });
  sim.erased_final = state;

  sim.members.resize(family.members.size());
  detail::parallel_for(family.members.size(), threads, [&](std::size_t index) {
    const auto& member = family.members[index];
    MemberTrajectory out;
    out.distance_sq.assign(sim.machine_calls + 1, 0.0);
    out.oracle_difference.resize(sim.machine_calls);
    QueryCounter scratch(member.machines());
    for (std::size_t t = 0; t < sim.machine_calls; ++t) {
      StateVector probe = pre_call[t];
      apply_step(probe, member, trace.steps[call_steps[t]], scratch);
      out.oracle_difference[t] = distance_sq(probe, sim.erased_snapshots[t + 1]);
    }
    StateVector psi(layout);
    replay(trace, member, k, psi, nullptr, [&](std::size_t t, const StateVector& s) {
      out.distance_sq[t] = distance_sq(s, sim.erased_snapshots[t]);
    });
    const auto fid = fidelity_uhlmann(psi, member);
    out.fidelity = fid.fidelity;
    out.branch_bound = fid.branch_bound;
    out.output_error = distance_sq(psi, fid.purification);
    out.erased_gap = distance_sq(sim.erased_final, fid.purification);
    sim.members[index] = std::move(out);
  });
  return sim;
}

PotentialTrace potential_Dt(const PairSimulation& simulation, const HardInputFamily& family) {
  PotentialTrace p;
  const std::size_t steps = simulation.machine_calls;
  const double size = static_cast<double>(simulation.members.size());
  const auto& stats = family.base.stats();
  const double ratio = static_cast<double>(stats.machine_supports[family.params.k]) /
                       static_cast<double>(family.base.universe());
  p.d.assign(steps + 1, 0.0);
  p.oracle_difference.assign(steps, 0.0);
  p.min_fidelity = simulation.members.empty() ? 0.0 : 1.0;
  for (const auto& m : simulation.members) {
    for (std::size_t t = 0; t <= steps; ++t) p.d[t] += m.distance_sq[t];
    for (std::size_t t = 0; t < steps; ++t) p.oracle_difference[t] += m.oracle_difference[t];
    p.output_error += m.output_error;
    p.erased_gap += m.erased_gap;
    p.fidelities.push_back(m.fidelity);
    p.min_fidelity = std::min(p.min_fidelity, m.fidelity);
  }
  if (size > 0) {
    for (auto& v : p.d) v /= size;
    for (auto& v : p.oracle_difference) v /= size;
    p.output_error /= size;
    p.erased_gap /= size;
  }
  for (std::size_t t = 0; t <= steps; ++t) {
    const double td = static_cast<double>(t);
    p.upper_bound.push_back(4.0 * ratio * td * td);
    if (t < steps) p.increment.push_back(std::sqrt(p.d[t + 1]) - std::sqrt(p.d[t]));
  }
  p.epsilon = 1.0 - std::sqrt(std::max(p.min_fidelity, 0.0));
  return p;
}

std::string_view to_string(CheckStatus status) {
  switch (status) {
    case CheckStatus::pass: return "pass";
    case CheckStatus::fail: return "fail";
    case CheckStatus::not_applicable: return "not applicable";
  }
  return "unknown";
}

bool BoundsReport::passed() const {
  return std::none_of(checks.begin(), checks.end(),
                      [](const BoundCheck& c) { return c.status == CheckStatus::fail; });
}

const BoundCheck& BoundsReport::check(std::string_view name) const {
  for (const auto& c : checks) {
    if (c.name == name) return c;
  }
  fail(ErrorCode::index, "no check named '" + std::string(name) + "'");
}

BoundsReport verify_bounds(const PotentialTrace& p, const HardInputFamily& family,
                           const BoundsOptions& options) {
  const auto& stats = family.base.stats();
  const std::size_t k = family.params.k;
  const double n_univ = static_cast<double>(family.base.universe());
  const double total = static_cast<double>(stats.total);
  const double mk = static_cast<double>(stats.machine_sizes[k]);
  const double support = static_cast<double>(stats.machine_supports[k]);
  const double kappa = static_cast<double>(stats.machine_capacities[k]);
  const double ratio = support / n_univ;
  const double beta = family.params.beta;
  const double tol = options.tolerance;
  const double final_d = p.d.empty() ? 0.0 : p.d.back();
  BoundsReport report;

  double slack = std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < p.d.size(); ++t) slack = std::min(slack, p.upper_bound[t] - p.d[t]);
  report.checks.push_back(make_check("upper_bound", slack, tol, "D_t <= 4 (m_k/N) t^2"));

  const double step = 2.0 * std::sqrt(ratio);
  slack = std::numeric_limits<double>::infinity();
  for (const double inc : p.increment) slack = std::min(slack, step - inc);
  report.checks.push_back(
      make_check("step_recurrence", slack, tol, "sqrt(D_{t+1}) <= sqrt(D_t) + 2 sqrt(m_k/N)"));

  slack = std::numeric_limits<double>::infinity();
  for (const double v : p.oracle_difference) slack = std::min(slack, 4.0 * ratio - v);
  report.checks.push_back(
      make_check("oracle_difference", slack, tol, "mean ||(O_t - I) psi_t||^2 <= 4 m_k/N"));

  report.checks.push_back(
      make_check("output_error", 2.0 * p.epsilon - p.output_error, tol, "E <= 2 epsilon"));

  const double small_input = beta * beta * kappa * n_univ / 16.0;
  if (total <= small_input) {
    report.checks.push_back(make_check("erased_gap", p.erased_gap - mk / (2.0 * total), tol,
                                       "F >= M_k / (2M)"));
  } else {
    report.checks.push_back(not_applicable("erased_gap", "needs M <= beta^2 kappa_k N / 16"));
  }

  const double triangle = std::sqrt(p.erased_gap) - std::sqrt(p.output_error);
  report.checks.push_back(make_check("triangle",
                                     final_d - (triangle > 0 ? triangle * triangle : 0.0), tol,
                                     "D_{t_k} >= (sqrt(F) - sqrt(E))^2"));

  report.c0 = p.epsilon * total / mk;
  const double root = 1.0 / std::sqrt(2.0) - std::sqrt(2.0 * report.c0);
  report.c = root > 0 ? root * root : 0.0;
  report.fidelity_hypothesis = p.min_fidelity > 9.0 / 16.0;
  std::vector<std::string> missing;
  if (!(total < small_input)) missing.emplace_back("M < beta^2 kappa_k N / 16");
  if (!(family.params.alpha > 4.0 * p.epsilon)) missing.emplace_back("alpha > 4 epsilon");
  if (!report.fidelity_hypothesis) missing.emplace_back("fidelity > 9/16");
  if (!(report.c0 < options.c0_margin)) missing.emplace_back("C0 below margin");
  if (missing.empty()) {
    report.checks.push_back(
        make_check("lower_bound", final_d - report.c * mk / total, tol, "D_{t_k} >= C M_k / M"));
  } else {
    std::string why = "needs";
    for (std::size_t i = 0; i < missing.size(); ++i) why += (i ? ", " : " ") + missing[i];
    report.checks.push_back(not_applicable("lower_bound", why));
  }

  const double expected = static_cast<double>(binomial(family.base.universe(),
                                                       stats.machine_supports[k]));
  const double actual = static_cast<double>(family.members.size());
  report.checks.push_back({"family_size",
                           actual == expected ? CheckStatus::pass : CheckStatus::fail,
                           -std::abs(actual - expected), "|T| = C(N, m_k)"});
  return report;
}

AdversaryRun run_adversary(const DistributedDatabase& db, const HardInputParams& params,
                           const AdversaryOptions& options) {
  AdversaryRun run;
  run.conditions = check_hard_input(db, params);
  const auto family = enumerate_family(db, params, options.family_limit);
  run.family_size = family.members.size();
  const AlgorithmTrace trace =
      options.trace ? *options.trace : build_sampler_trace(db, options.model, options.sampler);
  const auto sim = simulate_pair(family, trace, options.threads);
  run.machine_calls = sim.machine_calls;
  run.potential = potential_Dt(sim, family);
  run.bounds = verify_bounds(run.potential, family, options.bounds);
  return run;
}

}  // namespace qds
