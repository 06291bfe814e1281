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

#include "qds/database.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <charconv>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>
#include "qds/error.hpp"

namespace qds {

namespace {

using nlohmann::json;

void require_machine(const DistributedDatabase& db, std::size_t machine) {
  if (machine >= db.machines()) {
    fail(ErrorCode::index, "machine " + std::to_string(machine) + " out of range");
  }
}

void reject_unknown_keys(const json& object, std::initializer_list<std::string_view> allowed,
                         std::string_view where) {
  for (const auto& [key, value] : object.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      fail(ErrorCode::schema, "unknown key '" + key + "' in " + std::string(where));
    }
  }
}

Count read_non_negative(const json& value, std::string_view what) {
  if (!value.is_number_integer()) {
    fail(ErrorCode::schema, std::string(what) + " must be an integer");
  }
  const auto v = value.get<std::int64_t>();
  if (v < 0) fail(ErrorCode::schema, std::string(what) + " must be non-negative");
  return v;
}

}  // namespace

DistributedDatabase::DistributedDatabase(std::size_t universe, Count capacity,
                                         std::vector<std::vector<Count>> rows)
    : universe_(universe), capacity_(capacity) {
  if (universe == 0) fail(ErrorCode::schema, "universe size N must be positive");
  if (capacity < 0) fail(ErrorCode::schema, "capacity nu must be non-negative");
  if (rows.empty()) fail(ErrorCode::schema, "at least one machine is required");
  rows_.reserve(rows.size());
  for (auto& row : rows) {
    if (row.size() != universe) fail(ErrorCode::schema, "machine row length differs from N");
    for (Count c : row) {
      if (c < 0) fail(ErrorCode::schema, "negative multiplicity");
    }
    rows_.push_back(std::make_shared<const std::vector<Count>>(std::move(row)));
  }
  stats_ = compute_stats(*this);
  for (std::size_t i = 0; i < universe_; ++i) {
    if (stats_.element_totals[i] > capacity_) {
      fail(ErrorCode::capacity, "element " + std::to_string(i + 1) + " has total " +
                                    std::to_string(stats_.element_totals[i]) +
                                    " above capacity nu=" + std::to_string(capacity_));
    }
  }
}

Count DistributedDatabase::multiplicity(std::size_t element, std::size_t machine) const {
  require_machine(*this, machine);
  if (element >= universe_) fail(ErrorCode::index, "element out of range");
  return (*rows_[machine])[element];
}

std::span<const Count> DistributedDatabase::row(std::size_t machine) const {
  require_machine(*this, machine);
  return *rows_[machine];
}

DistributedDatabase DistributedDatabase::with_update(std::size_t element,
                                                     std::size_t machine,
                                                     int delta) const {
  require_machine(*this, machine);
  if (element >= universe_) fail(ErrorCode::index, "element out of range");
  if (delta != 1 && delta != -1) fail(ErrorCode::schema, "updates are +1 or -1");
  const Count cell = (*rows_[machine])[element] + delta;
  const Count total = stats_.element_totals[element] + delta;
  if (cell < 0) fail(ErrorCode::capacity, "update would make a multiplicity negative");
  if (total > capacity_) fail(ErrorCode::capacity, "update would exceed capacity nu");

  DistributedDatabase next = *this;
  auto row = std::vector<Count>(*rows_[machine]);
  row[element] = cell;
  next.rows_[machine] = std::make_shared<const std::vector<Count>>(std::move(row));

  auto& s = next.stats_;
  s.element_totals[element] = total;
  s.total += delta;
  s.machine_sizes[machine] += delta;
  if (cell == 0) --s.machine_supports[machine];
  if (cell == 1 && delta == 1) ++s.machine_supports[machine];
  if (cell > s.machine_capacities[machine]) {
    s.machine_capacities[machine] = cell;
  } else if (delta == -1 && cell + 1 == s.machine_capacities[machine]) {
    const auto& r = *next.rows_[machine];
    s.machine_capacities[machine] = *std::max_element(r.begin(), r.end());
  }
  return next;
}

DistributedDatabase DistributedDatabase::with_row(std::size_t machine,
                                                  std::vector<Count> row) const {
  require_machine(*this, machine);
  std::vector<std::vector<Count>> rows;
  rows.reserve(rows_.size());
  for (std::size_t j = 0; j < rows_.size(); ++j) {
    rows.push_back(j == machine ? std::move(row) : *rows_[j]);
  }
  return DistributedDatabase(universe_, capacity_, std::move(rows));
}

DistributedDatabase DistributedDatabase::with_machine_cleared(std::size_t machine) const {
  return with_row(machine, std::vector<Count>(universe_, 0));
}

bool DistributedDatabase::operator==(const DistributedDatabase& other) const {
  if (universe_ != other.universe_ || capacity_ != other.capacity_ ||
      rows_.size() != other.rows_.size()) {
    return false;
  }
  for (std::size_t j = 0; j < rows_.size(); ++j) {
    if (*rows_[j] != *other.rows_[j]) return false;
  }
  return true;
}

DatabaseStats compute_stats(const DistributedDatabase& db) {
  DatabaseStats s;
  s.element_totals.assign(db.universe(), 0);
  for (std::size_t j = 0; j < db.machines(); ++j) {
    Count size = 0;
    std::size_t support = 0;
    Count kappa = 0;
    const auto row = db.row(j);
    for (std::size_t i = 0; i < db.universe(); ++i) {
      const Count c = row[i];
      s.element_totals[i] += c;
      size += c;
      support += c > 0 ? 1 : 0;
      kappa = std::max(kappa, c);
    }
    s.machine_sizes.push_back(size);
    s.machine_supports.push_back(support);
    s.machine_capacities.push_back(kappa);
    s.total += size;
  }
  return s;
}

DistributedDatabase load_scenario(std::string_view document) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error& e) {
    fail(ErrorCode::schema, std::string("malformed scenario: ") + e.what());
  }
  if (!doc.is_object()) fail(ErrorCode::schema, "scenario must be an object");
  reject_unknown_keys(doc, {"N", "nu", "machines"}, "scenario");
  for (const char* key : {"N", "nu", "machines"}) {
    if (!doc.contains(key)) fail(ErrorCode::schema, std::string("missing key '") + key + "'");
  }
  const Count universe = read_non_negative(doc["N"], "N");
  const Count capacity = read_non_negative(doc["nu"], "nu");
  if (universe == 0) fail(ErrorCode::schema, "N must be positive");
  if (!doc["machines"].is_array()) fail(ErrorCode::schema, "machines must be an array");

  std::vector<std::vector<Count>> rows;
  for (const auto& machine : doc["machines"]) {
    if (!machine.is_object()) fail(ErrorCode::schema, "machine entries must be objects");
    reject_unknown_keys(machine, {"elements"}, "machine entry");
    std::vector<Count> row(static_cast<std::size_t>(universe), 0);
    if (machine.contains("elements")) {
      const auto& elements = machine["elements"];
      if (!elements.is_object()) fail(ErrorCode::schema, "elements must be an object");
      for (const auto& [key, value] : elements.items()) {
        long long element = 0;
        const auto [end, ec] = std::from_chars(key.data(), key.data() + key.size(), element);
        if (ec != std::errc() || end != key.data() + key.size() || element < 1 ||
            element > universe) {
          fail(ErrorCode::schema, "element key '" + key + "' is not in 1..N");
        }
        row[static_cast<std::size_t>(element - 1)] = read_non_negative(value, "count");
      }
    }
    rows.push_back(std::move(row));
  }
  return DistributedDatabase(static_cast<std::size_t>(universe), capacity, std::move(rows));
}

DistributedDatabase load_scenario_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::io, "cannot open scenario '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return load_scenario(buffer.str());
}

std::string to_scenario_document(const DistributedDatabase& db) {
  json machines = json::array();
  for (std::size_t j = 0; j < db.machines(); ++j) {
    json elements = json::object();
    const auto row = db.row(j);
    for (std::size_t i = 0; i < db.universe(); ++i) {
      if (row[i] > 0) elements[std::to_string(i + 1)] = row[i];
    }
    machines.push_back({{"elements", elements}});
  }
  json doc = {{"N", db.universe()}, {"nu", db.capacity()}, {"machines", machines}};
  return doc.dump(2);
}

StateVector target_state(const DistributedDatabase& db, const RegisterLayout& layout) {
  const auto& s = db.stats();
  if (s.total == 0) fail(ErrorCode::empty_database, "M = 0, nothing to sample");
  const std::size_t elem = layout.index_of(slot::elem);
  if (layout.slot_dim(elem) != db.universe()) {
    fail(ErrorCode::shape, "elem slot dimension differs from N");
  }
  std::vector<Amplitude> amps(layout.dimension());
  const double total = static_cast<double>(s.total);
  for (std::size_t i = 0; i < db.universe(); ++i) {
    amps[i * layout.stride(elem)] =
        std::sqrt(static_cast<double>(s.element_totals[i]) / total);
  }
  return StateVector(layout, std::move(amps));
}

}  // namespace qds
