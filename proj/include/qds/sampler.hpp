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
 * Distributed quantum sampling by zero-error amplitude amplification.
 *
 * The distributing operator D maps |i,0> to
 *   sqrt(c_i/nu) |i,0> + sqrt((nu-c_i)/nu) |i,1>,
 * so D|pi,0> has amplitude sqrt(M/(nu N)) on the target |psi,0>. The sampler
 * applies D once, then floor(m~) standard iterations Q(pi,pi) and one final
 * Q(phi,varphi) whose phases make the rotation land on |psi,0> exactly, with
 *   Q(phi, varphi) = -D S_pi(varphi) D^dagger S_chi(phi).
 *
 * D is built from 2n sequential queries (load c_i into the count register,
 * rotate the flag, unload) or from 4 parallel queries through the ancilla
 * banks of RegisterLayout::parallel.
 */
#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "qds/database.hpp"
#include "qds/oracles.hpp"
#include "qds/registers.hpp"

namespace qds {

enum class QueryModel { sequential, parallel };

std::string_view to_string(QueryModel model);
/// Throws schema for anything but "sequential" or "parallel".
QueryModel parse_query_model(std::string_view text);

struct AASchedule {
  double theta = 0.0;        // arcsin sqrt(M / (nu N))
  double m_tilde = 0.0;      // pi / (4 theta) - 1/2
  std::size_t iterations = 0;  // floor(m_tilde)
  double phase_chi = 0.0;    // phi, applied on flag = 0
  double phase_pi = 0.0;     // varphi, applied along |pi, 0>
  bool degenerate = false;   // final iteration is -I
  double residual = 0.0;     // |lhs - rhs| of the matching equation
  bool numeric_fallback = false;
};

/// Schedule for success amplitude sqrt(ratio), ratio = M / (nu N) in (0, 1].
AASchedule schedule_for_ratio(double ratio);
AASchedule build_schedule(const DistributedDatabase& db);

/// |cot((2k+1) theta) - e^{i phi} sin(2 theta) / (-cos(2 theta) + i cot(varphi/2))|.
double matching_residual(double theta, std::size_t iterations, double phase_chi,
                         double phase_pi);

/// Damped Newton search over (phi, varphi); nullopt if no root is found to
/// 1e-10.
std::optional<std::pair<double, double>> solve_phases_numerically(double theta,
                                                                  std::size_t iterations);

RegisterLayout sampler_layout(const DistributedDatabase& db, QueryModel model);

/// The input-independent rotation |i,c,0> -> sqrt(c/nu)|i,c,0> + sqrt((nu-c)/nu)|i,c,1>
/// with nu read from the count slot.
void apply_count_rotation(StateVector& state, bool dagger = false);

/// |i, e_j, b_j> -> |i, e_j + i, b_j xor 1> on every bank (subtracting under
/// dagger). With set_controls off the control bank is left alone.
void apply_fan_out(StateVector& state, std::size_t machines, bool dagger,
                   bool set_controls = true);

/// |s, s_1 .. s_n> -> |s + sum_j s_j mod (nu+1), s_1 .. s_n>.
void apply_fold_counts(StateVector& state, std::size_t machines, bool dagger);

void apply_D_sequential(StateVector& state, const DistributedDatabase& db, bool dagger,
                        QueryCounter& counter);

/// Requires clean ancilla banks on entry and returns them clean. Turning
/// controls off is a diagnostic: every parallel query then acts trivially.
void apply_D_parallel(StateVector& state, const DistributedDatabase& db, bool dagger,
                      QueryCounter& counter, bool controls_enabled = true);

void apply_S_chi(StateVector& state, double phase);

/// Phase e^{i varphi} along |pi> (elem) x |0> (flag), identity on the
/// complement, as F S_0 F^dagger with F the Fourier map on the elem slot.
void apply_S_pi(StateVector& state, double phase);

struct SamplerReport {
  QueryModel model = QueryModel::sequential;
  AASchedule schedule;
  double final_state_error = 0.0;
  QueryCounter queries{0};
  std::size_t d_applications = 0;
  /// 2n(2 floor(m~) + 3) sequential or 4(2 floor(m~) + 3) parallel.
  std::uint64_t expected_queries = 0;
  /// The same count if a degenerate final iteration (-I) were skipped.
  std::uint64_t queries_without_degenerate_step = 0;
  double ancilla_leakage = 0.0;
  std::vector<double> measured_distribution;
  std::vector<double> target_distribution;
  double max_distribution_error = 0.0;

  /// The model's own counter: sequential total or parallel total.
  std::uint64_t measured_queries() const;
};

struct SamplingRun {
  SamplerReport report;
  StateVector final_state;
};

SamplingRun run_sampling(const DistributedDatabase& db, QueryModel model);

}  // namespace qds
