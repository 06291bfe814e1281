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
 * The distributed dataset: n machines, each holding a multiset over the
 * universe {0, ..., N-1}, stored as a dense multiplicity table.
 *
 * Indices are 0-based in the C++ API. Scenario documents and the command
 * line use 1-based element and machine numbers.
 */
#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qds/registers.hpp"

namespace qds {

using Count = std::int64_t;

struct DatabaseStats {
  std::vector<Count> element_totals;        // c_i
  Count total = 0;                          // M
  std::vector<Count> machine_sizes;         // M_j
  std::vector<std::size_t> machine_supports;  // m_j
  std::vector<Count> machine_capacities;    // kappa_j = max_i c_ij

  bool operator==(const DatabaseStats&) const = default;
};

/// Immutable snapshot. Updates return a new database that shares every
/// machine row except the one that changed.
class DistributedDatabase {
 public:
  /// `rows[j][i]` is the multiplicity of element i on machine j.
  DistributedDatabase(std::size_t universe, Count capacity,
                      std::vector<std::vector<Count>> rows);

  std::size_t universe() const { return universe_; }
  std::size_t machines() const { return rows_.size(); }
  Count capacity() const { return capacity_; }

  Count multiplicity(std::size_t element, std::size_t machine) const;
  std::span<const Count> row(std::size_t machine) const;
  const DatabaseStats& stats() const { return stats_; }

  /// Adds delta (+1 or -1) to c_ij. Rejects underflow and capacity breaches.
  DistributedDatabase with_update(std::size_t element, std::size_t machine,
                                  int delta) const;
  DistributedDatabase with_row(std::size_t machine, std::vector<Count> row) const;
  DistributedDatabase with_machine_cleared(std::size_t machine) const;

  bool operator==(const DistributedDatabase& other) const;

 private:
  DistributedDatabase() = default;

  std::size_t universe_ = 0;
  Count capacity_ = 0;
  std::vector<std::shared_ptr<const std::vector<Count>>> rows_;
  DatabaseStats stats_;
};

DatabaseStats compute_stats(const DistributedDatabase& db);

/// Parses the scenario schema
///   { "N": int, "nu": int, "machines": [ { "elements": { "<i>": count } } ] }
/// with 1-based element keys.
DistributedDatabase load_scenario(std::string_view document);
DistributedDatabase load_scenario_file(const std::filesystem::path& path);
std::string to_scenario_document(const DistributedDatabase& db);

/// sqrt(c_i / M) on |i> with every other slot at 0.
StateVector target_state(const DistributedDatabase& db, const RegisterLayout& layout);

}  // namespace qds
