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
 * Experiment orchestration behind the qds command-line tool. Each command
 * reads its inputs, runs, writes its reports and returns a process exit
 * status: 0 success, 2 input error, 3 precondition or assertion failure.
 */
#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qds/adversary.hpp"
#include "qds/database.hpp"
#include "qds/error.hpp"
#include "qds/sampler.hpp"

namespace qds {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitFailed = 3;

enum class Command { sample, adversary, sweep, check };

struct ExperimentConfig {
  Command command = Command::check;
  std::filesystem::path scenario;
  QueryModel model = QueryModel::sequential;

  HardInputParams adversary;
  std::size_t family_limit = kDefaultFamilyLimit;
  /// Truncated sampler: overrides floor(m~) and drops the tuned step.
  std::optional<std::size_t> iterations;
  bool tuned_step = true;
  /// External oblivious trace to replay instead of the sampler's.
  std::filesystem::path trace_in;
  double c0_margin = 0.24;

  std::filesystem::path grid;

  std::filesystem::path out;
  std::filesystem::path trace_csv;
  std::filesystem::path summary;

  double tolerance = 1e-9;
  /// 0 means QDS_THREADS, then the hardware concurrency.
  unsigned threads = 0;
};

/// Throws schema on a non-positive tolerance or a non-positive alpha/beta.
void validate_config(const ExperimentConfig& config);

/// QDS_THREADS when set to a positive integer, else `requested`, else the
/// hardware concurrency.
unsigned resolve_threads(unsigned requested);

/// Exit status for a library error.
int exit_code_for(ErrorCode code);

struct SweepGrid {
  std::vector<std::size_t> universe;   // N
  std::vector<std::size_t> machines;   // n
  std::vector<Count> capacity;         // nu
  std::vector<Count> total;            // M
  QueryModel model = QueryModel::sequential;
  std::uint64_t seed = 1;
  double band_low = 1.0;
  double band_high = 8.0;
  /// Points whose sampler register would be larger are marked invalid.
  std::size_t max_dimension = std::size_t{1} << 22;
};

/// { "N": [..], "n": [..], "nu": [..], "M": [..], "model": "...",
///   "seed": int, "band": [lo, hi], "max_dimension": int }
SweepGrid load_sweep_grid(std::string_view document);

/// Uniform draws in [0, floor(nu/n)] per cell from mt19937_64(seed), then
/// single-unit decrements on random nonzero cells or increments on random
/// cells whose element total is below nu until the total equals M. Throws
/// capacity when M is outside [1, nu N].
DistributedDatabase generate_database(std::size_t universe, std::size_t machines,
                                      Count capacity, Count total, std::uint64_t seed);

struct SweepPoint {
  std::size_t universe = 0;
  std::size_t machines = 0;
  Count capacity = 0;
  Count total = 0;
  bool valid = false;
  std::string note;
  std::size_t iterations = 0;
  std::size_t d_applications = 0;
  std::uint64_t queries = 0;
  double scale = 0.0;  // n sqrt(nu N / M), or sqrt(nu N / M) for parallel
  double ratio = 0.0;
  double final_state_error = 0.0;
};

/// Points in N, n, nu, M nested order; point p is generated with seed + p.
std::vector<SweepPoint> run_sweep(const SweepGrid& grid, unsigned threads);
void write_sweep_csv(std::ostream& out, const std::vector<SweepPoint>& points);

/// Shortest round-trip decimal form.
std::string format_double(double value);

int cmd_sample(const ExperimentConfig& config, std::ostream& log);
int cmd_adversary(const ExperimentConfig& config, std::ostream& log);
int cmd_sweep(const ExperimentConfig& config, std::ostream& log);
int cmd_check(const ExperimentConfig& config, std::ostream& log);

/// Dispatches on config.command. Reports without an output path go to `out`;
/// library errors are written to `err` and mapped to exit statuses.
int run_command(const ExperimentConfig& config, std::ostream& out, std::ostream& err);

}  // namespace qds
