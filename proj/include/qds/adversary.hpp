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
 * Lower-bound harness. Builds hard-input families around a target machine k,
 * replays an oblivious trace against every member and against the run with
 * machine k erased, and checks the finite-size potential-function bounds.
 *
 * Step t counts queries that touch machine k: sequential calls to O_k and
 * every parallel query. D_t is the family average of ||psi_t^T - psi_t||^2
 * taken right after the t-th such query.
 */
#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qds/database.hpp"
#include "qds/fidelity.hpp"
#include "qds/sampler.hpp"
#include "qds/trace.hpp"

namespace qds {

struct HardInputParams {
  std::size_t k = 0;
  double alpha = 0.5;
  double beta = 0.5;
};

struct HardInputCheck {
  Count total = 0;          // M
  Count machine_size = 0;   // M_k
  std::size_t support = 0;  // m_k
  Count capacity = 0;       // kappa_k
  /// max_{i, j != k} c_ij + max_i c_ik.
  Count capacity_sum = 0;
  bool majority = false;   // M_k >= alpha M
  bool density = false;    // M_k / m_k >= beta kappa_k
  bool headroom = false;   // capacity_sum <= nu
  std::string note;

  bool passed() const { return majority && density && headroom; }
  /// Names of the failed clauses: "majority", "density", "headroom".
  std::vector<std::string> failures() const;
};

/// Diagnostic only; an out-of-range k fails every clause.
HardInputCheck check_hard_input(const DistributedDatabase& db, const HardInputParams& params);

/// C(n, r), saturating at UINT64_MAX.
std::uint64_t binomial(std::uint64_t n, std::uint64_t r);

inline constexpr std::size_t kDefaultFamilyLimit = 10000;

struct HardInputFamily {
  DistributedDatabase base;
  HardInputParams params;
  /// One member per m_k-subset of the universe in lexicographic order. The
  /// multiplicities of T_k, listed by ascending element, are placed on the
  /// subset in ascending order.
  std::vector<DistributedDatabase> members;
};

/// Throws hard_input when check_hard_input fails and family_too_large when
/// C(N, m_k) exceeds the limit.
HardInputFamily enumerate_family(const DistributedDatabase& db, const HardInputParams& params,
                                 std::size_t limit = kDefaultFamilyLimit);

struct MemberTrajectory {
  /// ||psi_t^T - psi_t||^2 for t = 0 .. t_k.
  std::vector<double> distance_sq;
  /// ||(O^T - O~) psi_t||^2 for the query that follows snapshot t.
  std::vector<double> oracle_difference;
  double fidelity = 0.0;
  double branch_bound = 0.0;
  /// ||psi_final^T - psi~^T||^2.
  double output_error = 0.0;
  /// ||psi_final - psi~^T||^2 with psi_final the erased run.
  double erased_gap = 0.0;
};

struct PairSimulation {
  QueryModel model = QueryModel::sequential;
  std::size_t machine_calls = 0;  // t_k
  std::vector<MemberTrajectory> members;
  /// Erased-run states right after each machine-k query, t = 0 .. t_k.
  std::vector<StateVector> erased_snapshots;
  StateVector erased_final;
};

/// Runs machine-k erased once and each member in parallel on `threads`
/// workers (0 picks the hardware concurrency).
PairSimulation simulate_pair(const HardInputFamily& family, const AlgorithmTrace& trace,
                             unsigned threads = 0);

/// Erased states after each machine-k query, preceded by the state just
/// before the first one.
std::vector<StateVector> erased_trajectory(const DistributedDatabase& db, std::size_t k,
                                           const AlgorithmTrace& trace);

struct PotentialTrace {
  std::vector<double> d;                  // D_t
  std::vector<double> upper_bound;        // 4 (m_k/N) t^2
  std::vector<double> increment;          // sqrt(D_{t+1}) - sqrt(D_t)
  std::vector<double> oracle_difference;  // family average, per query
  double output_error = 0.0;              // E_{t_k}
  double erased_gap = 0.0;                // F_{t_k}
  double epsilon = 0.0;                   // 1 - min_T sqrt(F(rho_T, psi_T))
  double min_fidelity = 0.0;
  std::vector<double> fidelities;
};

PotentialTrace potential_Dt(const PairSimulation& simulation, const HardInputFamily& family);

enum class CheckStatus { pass, fail, not_applicable };

std::string_view to_string(CheckStatus status);

struct BoundCheck {
  std::string name;
  CheckStatus status = CheckStatus::not_applicable;
  /// Smallest (bound - value) seen; negative beyond tolerance means failure.
  double slack = 0.0;
  std::string detail;
};

struct BoundsOptions {
  double tolerance = 1e-9;
  /// The lower-bound check is skipped once C0 reaches this value.
  double c0_margin = 0.24;
};

struct BoundsReport {
  std::vector<BoundCheck> checks;
  double c0 = 0.0;
  double c = 0.0;
  /// Whether every member's output fidelity exceeds 9/16.
  bool fidelity_hypothesis = false;

  bool passed() const;
  const BoundCheck& check(std::string_view name) const;
};

BoundsReport verify_bounds(const PotentialTrace& potential, const HardInputFamily& family,
                           const BoundsOptions& options = {});

struct AdversaryOptions {
  QueryModel model = QueryModel::sequential;
  std::size_t family_limit = kDefaultFamilyLimit;
  unsigned threads = 0;
  /// Replayed instead of the sampler's own trace when set.
  std::optional<AlgorithmTrace> trace;
  /// Shapes the sampler trace when no external trace is given.
  TraceOptions sampler;
  BoundsOptions bounds;
};

struct AdversaryRun {
  HardInputCheck conditions;
  std::size_t family_size = 0;
  std::size_t machine_calls = 0;
  PotentialTrace potential;
  BoundsReport bounds;
};

/// The whole pipeline. Throws hard_input when the conditions fail.
AdversaryRun run_adversary(const DistributedDatabase& db, const HardInputParams& params,
                           const AdversaryOptions& options = {});

}  // namespace qds
