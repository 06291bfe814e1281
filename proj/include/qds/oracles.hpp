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

/**
 * @file
 * The counting oracles exposed by each machine, applied as basis maps, and
 * exact query accounting.
 *
 *   sequential  O_j  |i, s>      -> |i, (s + c_ij) mod (nu+1)>
 *   controlled  O^_j |i, s, b>   -> |i, (s + b c_ij) mod (nu+1), b>
 *   parallel    O    applies O^_j to the j-th bank triple for every j at once
 *
 * The dagger subtracts instead of adding. Both directions cost one query.
 */
#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qds/database.hpp"
#include "qds/registers.hpp"

namespace qds {

class QueryCounter {
 public:
  explicit QueryCounter(std::size_t machines) : per_machine_(machines, 0) {}

  void record_sequential(std::size_t machine);
  void record_parallel() { ++parallel_; }

  std::size_t machines() const { return per_machine_.size(); }
  std::span<const std::uint64_t> per_machine() const { return per_machine_; }
  std::uint64_t machine_queries(std::size_t machine) const { return per_machine_.at(machine); }
  std::uint64_t sequential_total() const;
  std::uint64_t parallel_total() const { return parallel_; }
  /// Sequential queries plus n per parallel query.
  std::uint64_t sequential_equivalent() const {
    return sequential_total() + parallel_ * per_machine_.size();
  }

  bool operator==(const QueryCounter&) const = default;

 private:
  std::vector<std::uint64_t> per_machine_;
  std::uint64_t parallel_ = 0;
};

/// Slot names one oracle call acts on. An empty control means uncontrolled.
struct OracleWiring {
  std::string elem{slot::elem};
  std::string count{slot::count};
  std::string control;

  static OracleWiring bank(std::size_t machine);
};

void apply_sequential_oracle(StateVector& state, const DistributedDatabase& db,
                             std::size_t machine, bool dagger, QueryCounter& counter);

void apply_controlled_oracle(StateVector& state, const DistributedDatabase& db,
                             std::size_t machine, bool dagger,
                             const OracleWiring& wiring, QueryCounter& counter);

/// One simultaneous query to every machine over the bank slots of
/// RegisterLayout::parallel.
void apply_parallel_oracle(StateVector& state, const DistributedDatabase& db,
                           bool dagger, QueryCounter& counter);

}  // namespace qds
