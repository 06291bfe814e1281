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

#include "qds/oracles.hpp"

#include <numeric>

#include "qds/error.hpp"

namespace qds {

namespace {

void require_machine(const DistributedDatabase& db, std::size_t machine) {
  if (machine >= db.machines()) {
    fail(ErrorCode::index, "machine " + std::to_string(machine) + " out of range (n=" +
                               std::to_string(db.machines()) + ")");
  }
}

std::size_t shifted(std::size_t s, Count c, bool dagger, std::size_t modulus) {
  const auto shift = static_cast<std::size_t>(c % static_cast<Count>(modulus));
  return dagger ? (s + modulus - shift) % modulus : (s + shift) % modulus;
}

void require_modulus(const RegisterLayout& layout, std::size_t count_slot,
                     const DistributedDatabase& db) {
  if (layout.slot_dim(count_slot) != static_cast<std::size_t>(db.capacity()) + 1) {
    fail(ErrorCode::shape, "count slot dimension must be nu+1");
  }
}

void require_universe(const RegisterLayout& layout, std::size_t elem_slot,
                      const DistributedDatabase& db) {
  if (layout.slot_dim(elem_slot) != db.universe()) {
    fail(ErrorCode::shape, "element slot dimension must be N");
  }
}

}  // namespace

void QueryCounter::record_sequential(std::size_t machine) {
  if (machine >= per_machine_.size()) fail(ErrorCode::index, "machine out of range");
  ++per_machine_[machine];
}

std::uint64_t QueryCounter::sequential_total() const {
  return std::accumulate(per_machine_.begin(), per_machine_.end(), std::uint64_t{0});
}

OracleWiring OracleWiring::bank(std::size_t machine) {
  return {slot::elem_copy(machine), slot::count_copy(machine), slot::control(machine)};
}

void apply_sequential_oracle(StateVector& state, const DistributedDatabase& db,
                             std::size_t machine, bool dagger, QueryCounter& counter) {
  apply_controlled_oracle(state, db, machine, dagger, OracleWiring{}, counter);
}

void apply_controlled_oracle(StateVector& state, const DistributedDatabase& db,
                             std::size_t machine, bool dagger,
                             const OracleWiring& wiring, QueryCounter& counter) {
  require_machine(db, machine);
  const auto& layout = state.layout();
  std::vector<std::size_t> slots = {layout.index_of(wiring.elem),
                                    layout.index_of(wiring.count)};
  require_universe(layout, slots[0], db);
  require_modulus(layout, slots[1], db);
  const bool controlled = !wiring.control.empty();
  if (controlled) {
    slots.push_back(layout.index_of(wiring.control));
    if (layout.slot_dim(slots[2]) != 2) fail(ErrorCode::shape, "control slot must be a qubit");
  }
  const auto row = db.row(machine);
  const std::size_t modulus = layout.slot_dim(slots[1]);
  apply_basis_map(state, slots,
                  [&](std::span<const std::size_t> in, std::span<std::size_t> out) {
                    out[0] = in[0];
                    const bool on = !controlled || in[2] == 1;
                    out[1] = on ? shifted(in[1], row[in[0]], dagger, modulus) : in[1];
                    if (controlled) out[2] = in[2];
                  });
  counter.record_sequential(machine);
}

void apply_parallel_oracle(StateVector& state, const DistributedDatabase& db,
                           bool dagger, QueryCounter& counter) {
  const auto& layout = state.layout();
  const std::size_t n = db.machines();
  if (counter.machines() != n) fail(ErrorCode::shape, "counter arity differs from n");
  // Bank slots in the order elem copies, count copies, controls.
  std::vector<std::size_t> slots;
  slots.reserve(3 * n);
  for (std::size_t j = 0; j < n; ++j) slots.push_back(layout.index_of(slot::elem_copy(j)));
  for (std::size_t j = 0; j < n; ++j) slots.push_back(layout.index_of(slot::count_copy(j)));
  for (std::size_t j = 0; j < n; ++j) slots.push_back(layout.index_of(slot::control(j)));
  if (layout.has(slot::elem_copy(n)) || layout.has(slot::count_copy(n)) ||
      layout.has(slot::control(n))) {
    fail(ErrorCode::shape, "layout has more banks than the database has machines");
  }
  for (std::size_t j = 0; j < n; ++j) {
    require_universe(layout, slots[j], db);
    require_modulus(layout, slots[n + j], db);
    if (layout.slot_dim(slots[2 * n + j]) != 2) fail(ErrorCode::shape, "control must be a qubit");
  }
  const std::size_t modulus = static_cast<std::size_t>(db.capacity()) + 1;
  std::vector<std::span<const Count>> rows;
  for (std::size_t j = 0; j < n; ++j) rows.push_back(db.row(j));
  apply_basis_map(state, slots,
                  [&](std::span<const std::size_t> in, std::span<std::size_t> out) {
                    std::copy(in.begin(), in.end(), out.begin());
                    for (std::size_t j = 0; j < n; ++j) {
                      if (in[2 * n + j] == 1) {
                        out[n + j] = shifted(in[n + j], rows[j][in[j]], dagger, modulus);
                      }
                    }
                  });
  counter.record_parallel();
}

}  // namespace qds
