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
 * Oblivious algorithm traces: the fixed sequence of oracle calls and
 * input-independent unitaries an algorithm applies, starting from |0...0>.
 *
 * The sampler emits its circuit as a trace and executes it; the adversary
 * harness replays the same trace (or an externally supplied one) against
 * every member of a hard-input family.
 *
 * JSON form:
 *   { "model": "sequential" | "parallel",
 *     "steps": [ {"oracle": {"machine": j, "dagger": bool}},
 *                {"parallel_oracle": {"dagger": bool}},
 *                {"unitary": {"name": <builtin>, "dagger": bool, "phase": real}} ] }
 * Machines are 1-based in JSON. Builtins: fourier, count_rotation, phase_chi,
 * phase_pi, global_phase, fan_out, fold_counts.
 */
#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "qds/database.hpp"
#include "qds/oracles.hpp"
#include "qds/registers.hpp"
#include "qds/sampler.hpp"

namespace qds {

enum class Builtin {
  fourier,
  count_rotation,
  phase_chi,
  phase_pi,
  global_phase,
  fan_out,
  fold_counts,
};

std::string_view to_string(Builtin builtin);

struct OracleCall {
  std::size_t machine = 0;
  bool dagger = false;
  bool operator==(const OracleCall&) const = default;
};

struct ParallelOracleCall {
  bool dagger = false;
  bool operator==(const ParallelOracleCall&) const = default;
};

struct UnitaryCall {
  Builtin name = Builtin::fourier;
  bool dagger = false;
  double phase = 0.0;
  bool operator==(const UnitaryCall&) const = default;
};

using TraceStep = std::variant<OracleCall, ParallelOracleCall, UnitaryCall>;

struct AlgorithmTrace {
  QueryModel model = QueryModel::sequential;
  std::vector<TraceStep> steps;

  bool operator==(const AlgorithmTrace&) const = default;
};

struct TraceOptions {
  /// Overrides floor(m~) standard iterations.
  std::optional<std::size_t> iterations;
  /// Whether the final tuned iteration is emitted.
  bool tuned_step = true;
};

/// D (or D^dagger) as primitive steps for n machines.
std::vector<TraceStep> distributing_steps(std::size_t machines, QueryModel model,
                                          bool dagger);

AlgorithmTrace build_sampler_trace(const DistributedDatabase& db, QueryModel model,
                                   const TraceOptions& options = {});

/// Number of D / D^dagger blocks build_sampler_trace emits for these options.
std::size_t distributing_applications(std::size_t iterations, bool tuned_step);

/// Throws trace when a step references a machine outside db or a primitive
/// the model's layout does not support.
void validate_trace(const AlgorithmTrace& trace, const DistributedDatabase& db);

void apply_step(StateVector& state, const DistributedDatabase& db,
                const TraceStep& step, QueryCounter& counter);

/// Runs the trace from |0...0> on sampler_layout(db, trace.model).
StateVector execute_trace(const AlgorithmTrace& trace, const DistributedDatabase& db,
                          QueryCounter& counter);

std::string trace_to_json(const AlgorithmTrace& trace);
AlgorithmTrace trace_from_json(std::string_view document);

}  // namespace qds
