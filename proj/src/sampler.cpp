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

#include "qds/sampler.hpp"

#include <cmath>

#include "qds/error.hpp"
#include "qds/trace.hpp"

namespace qds {

namespace {

std::vector<std::size_t> bank_slots(const RegisterLayout& layout, std::size_t machines) {
  std::vector<std::size_t> slots;
  for (std::size_t j = 0; j < machines; ++j) slots.push_back(layout.index_of(slot::elem_copy(j)));
  for (std::size_t j = 0; j < machines; ++j) slots.push_back(layout.index_of(slot::count_copy(j)));
  for (std::size_t j = 0; j < machines; ++j) slots.push_back(layout.index_of(slot::control(j)));
  return slots;
}

void run_steps(StateVector& state, const DistributedDatabase& db,
               const std::vector<TraceStep>& steps, QueryCounter& counter) {
  for (const auto& step : steps) apply_step(state, db, step, counter);
}

}  // namespace

std::string_view to_string(QueryModel model) {
  return model == QueryModel::sequential ? "sequential" : "parallel";
}

QueryModel parse_query_model(std::string_view text) {
  if (text == "sequential") return QueryModel::sequential;
  if (text == "parallel") return QueryModel::parallel;
  fail(ErrorCode::schema, "unknown query model '" + std::string(text) + "'");
}

RegisterLayout sampler_layout(const DistributedDatabase& db, QueryModel model) {
  const auto capacity = static_cast<std::size_t>(db.capacity());
  return model == QueryModel::sequential
             ? RegisterLayout::sequential(db.universe(), capacity)
             : RegisterLayout::parallel(db.universe(), db.machines(), capacity);
}

void apply_count_rotation(StateVector& state, bool dagger) {
  const auto& layout = state.layout();
  const std::size_t count = layout.index_of(slot::count);
  const std::size_t flag = layout.index_of(slot::flag);
  const std::size_t capacity = layout.slot_dim(count) - 1;
  if (capacity == 0) fail(ErrorCode::invalid_layout, "count rotation needs nu >= 1");
  const std::size_t controls[] = {count};
  apply_conditioned_rotation(
      state, controls, flag,
      [capacity](std::span<const std::size_t> c) -> std::optional<double> {
        return std::acos(std::sqrt(static_cast<double>(c[0]) / static_cast<double>(capacity)));
      },
      dagger);
}

void apply_fan_out(StateVector& state, std::size_t machines, bool dagger,
                   bool set_controls) {
  const auto& layout = state.layout();
  std::vector<std::size_t> slots = {layout.index_of(slot::elem)};
  const auto banks = bank_slots(layout, machines);
  // Element copies and controls; the count copies are untouched.
  slots.insert(slots.end(), banks.begin(), banks.begin() + static_cast<std::ptrdiff_t>(machines));
  slots.insert(slots.end(), banks.begin() + static_cast<std::ptrdiff_t>(2 * machines), banks.end());
  const std::size_t universe = layout.slot_dim(slots[0]);
  apply_basis_map(state, slots, [&](std::span<const std::size_t> in, std::span<std::size_t> out) {
    out[0] = in[0];
    for (std::size_t j = 0; j < machines; ++j) {
      out[1 + j] = dagger ? (in[1 + j] + universe - in[0]) % universe
                          : (in[1 + j] + in[0]) % universe;
      out[1 + machines + j] = set_controls ? in[1 + machines + j] ^ 1U : in[1 + machines + j];
    }
  });
}

void apply_fold_counts(StateVector& state, std::size_t machines, bool dagger) {
  const auto& layout = state.layout();
  std::vector<std::size_t> slots = {layout.index_of(slot::count)};
  for (std::size_t j = 0; j < machines; ++j) slots.push_back(layout.index_of(slot::count_copy(j)));
  const std::size_t modulus = layout.slot_dim(slots[0]);
  apply_basis_map(state, slots, [&](std::span<const std::size_t> in, std::span<std::size_t> out) {
    std::size_t sum = 0;
    for (std::size_t j = 0; j < machines; ++j) sum += in[1 + j];
    sum %= modulus;
    std::copy(in.begin(), in.end(), out.begin());
    out[0] = dagger ? (in[0] + modulus - sum) % modulus : (in[0] + sum) % modulus;
  });
}

void apply_D_sequential(StateVector& state, const DistributedDatabase& db, bool dagger,
                        QueryCounter& counter) {
  run_steps(state, db, distributing_steps(db.machines(), QueryModel::sequential, dagger), counter);
}

void apply_D_parallel(StateVector& state, const DistributedDatabase& db, bool dagger,
                      QueryCounter& counter, bool controls_enabled) {
  const auto banks = bank_slots(state.layout(), db.machines());
  const double leak = norm_outside_zero(state, banks);
  if (leak > kNormTolerance) {
    fail(ErrorCode::ancilla_contamination,
         "ancilla banks carry norm " + std::to_string(leak) + " outside |0>");
  }
  if (controls_enabled) {
    run_steps(state, db, distributing_steps(db.machines(), QueryModel::parallel, dagger), counter);
    return;
  }
  const std::size_t n = db.machines();
  for (int half = 0; half < 2; ++half) {
    if (half == 1) apply_count_rotation(state, dagger);
    apply_fan_out(state, n, false, false);
    apply_parallel_oracle(state, db, false, counter);
    apply_fold_counts(state, n, half == 1);
    apply_parallel_oracle(state, db, true, counter);
    apply_fan_out(state, n, true, false);
  }
}

void apply_S_chi(StateVector& state, double phase) {
  const std::size_t flag[] = {state.layout().index_of(slot::flag)};
  apply_diagonal_phase(state, flag, [phase](std::span<const std::size_t> b) -> std::optional<double> {
    if (b[0] == 0) return phase;
    return std::nullopt;
  });
}

void apply_S_pi(StateVector& state, double phase) {
  const auto& layout = state.layout();
  const std::size_t elem = layout.index_of(slot::elem);
  const std::size_t slots[] = {elem, layout.index_of(slot::flag)};
  apply_fourier(state, elem, true);
  apply_diagonal_phase(state, slots, [phase](std::span<const std::size_t> c) -> std::optional<double> {
    if (c[0] == 0 && c[1] == 0) return phase;
    return std::nullopt;
  });
  apply_fourier(state, elem, false);
}

std::uint64_t SamplerReport::measured_queries() const {
  return model == QueryModel::sequential ? queries.sequential_total() : queries.parallel_total();
}

SamplingRun run_sampling(const DistributedDatabase& db, QueryModel model) {
  SamplerReport report;
  report.model = model;
  report.schedule = build_schedule(db);
  if (db.capacity() < 1) fail(ErrorCode::capacity, "nu must be at least 1");

  const auto trace = build_sampler_trace(db, model);
  QueryCounter counter(db.machines());
  StateVector final_state = execute_trace(trace, db, counter);

  const std::size_t iterations = report.schedule.iterations;
  report.d_applications = distributing_applications(iterations, true);
  const std::uint64_t per_d = model == QueryModel::sequential ? 2 * db.machines() : 4;
  report.expected_queries = per_d * (2 * iterations + 3);
  report.queries_without_degenerate_step =
      report.schedule.degenerate ? per_d * (2 * iterations + 1) : report.expected_queries;
  report.queries = counter;

  const auto target = target_state(db, final_state.layout());
  report.final_state_error = phase_aligned_distance(final_state, target);
  if (model == QueryModel::parallel) {
    report.ancilla_leakage =
        norm_outside_zero(final_state, bank_slots(final_state.layout(), db.machines()));
  }
  const auto norms = branch_norms_by_elem(final_state);
  const double total = static_cast<double>(db.stats().total);
  for (std::size_t i = 0; i < db.universe(); ++i) {
    const double measured = norms[i] * norms[i];
    const double expected = static_cast<double>(db.stats().element_totals[i]) / total;
    report.measured_distribution.push_back(measured);
    report.target_distribution.push_back(expected);
    report.max_distribution_error =
        std::max(report.max_distribution_error, std::abs(measured - expected));
  }
  return {std::move(report), std::move(final_state)};
}

}  // namespace qds
