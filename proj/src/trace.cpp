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

#include "qds/trace.hpp"

#include <numbers>

#include <nlohmann/json.hpp>
#include "qds/error.hpp"

namespace qds {

namespace {

using nlohmann::json;

constexpr std::pair<Builtin, std::string_view> kBuiltinNames[] = {
    {Builtin::fourier, "fourier"},         {Builtin::count_rotation, "count_rotation"},
    {Builtin::phase_chi, "phase_chi"},     {Builtin::phase_pi, "phase_pi"},
    {Builtin::global_phase, "global_phase"}, {Builtin::fan_out, "fan_out"},
    {Builtin::fold_counts, "fold_counts"},
};

Builtin parse_builtin(std::string_view name) {
  for (const auto& [b, text] : kBuiltinNames) {
    if (text == name) return b;
  }
  fail(ErrorCode::trace, "unknown builtin unitary '" + std::string(name) + "'");
}

bool needs_banks(Builtin b) { return b == Builtin::fan_out || b == Builtin::fold_counts; }

void append_iteration(std::vector<TraceStep>& steps, std::size_t machines, QueryModel model,
                      double phase_chi, double phase_pi) {
  steps.push_back(UnitaryCall{Builtin::phase_chi, false, phase_chi});
  auto undo = distributing_steps(machines, model, true);
  steps.insert(steps.end(), undo.begin(), undo.end());
  steps.push_back(UnitaryCall{Builtin::phase_pi, false, phase_pi});
  auto redo = distributing_steps(machines, model, false);
  steps.insert(steps.end(), redo.begin(), redo.end());
  steps.push_back(UnitaryCall{Builtin::global_phase, false, std::numbers::pi});
}

bool read_flag(const json& object, const char* key) {
  if (!object.contains(key)) return false;
  if (!object[key].is_boolean()) fail(ErrorCode::trace, std::string(key) + " must be a boolean");
  return object[key].get<bool>();
}

}  // namespace

std::string_view to_string(Builtin builtin) {
  for (const auto& [b, text] : kBuiltinNames) {
    if (b == builtin) return text;
  }
  return "unknown";
}

std::vector<TraceStep> distributing_steps(std::size_t machines, QueryModel model, bool dagger) {
  std::vector<TraceStep> steps;
  const UnitaryCall rotation{Builtin::count_rotation, dagger, 0.0};
  if (model == QueryModel::sequential) {
    for (std::size_t j = 0; j < machines; ++j) steps.push_back(OracleCall{j, false});
    steps.push_back(rotation);
    for (std::size_t j = machines; j-- > 0;) steps.push_back(OracleCall{j, true});
    return steps;
  }
  // Load c_i into the count register with two parallel queries, rotate,
  // then run the load backwards.
  steps.push_back(UnitaryCall{Builtin::fan_out, false, 0.0});
  steps.push_back(ParallelOracleCall{false});
  steps.push_back(UnitaryCall{Builtin::fold_counts, false, 0.0});
  steps.push_back(ParallelOracleCall{true});
  steps.push_back(UnitaryCall{Builtin::fan_out, true, 0.0});
  steps.push_back(rotation);
  steps.push_back(UnitaryCall{Builtin::fan_out, false, 0.0});
  steps.push_back(ParallelOracleCall{false});
  steps.push_back(UnitaryCall{Builtin::fold_counts, true, 0.0});
  steps.push_back(ParallelOracleCall{true});
  steps.push_back(UnitaryCall{Builtin::fan_out, true, 0.0});
  return steps;
}

std::size_t distributing_applications(std::size_t iterations, bool tuned_step) {
  return 1 + 2 * (iterations + (tuned_step ? 1 : 0));
}

AlgorithmTrace build_sampler_trace(const DistributedDatabase& db, QueryModel model,
                                   const TraceOptions& options) {
  const auto schedule = build_schedule(db);
  AlgorithmTrace trace;
  trace.model = model;
  auto& steps = trace.steps;
  const std::size_t n = db.machines();
  steps.push_back(UnitaryCall{Builtin::fourier, false, 0.0});
  auto d = distributing_steps(n, model, false);
  steps.insert(steps.end(), d.begin(), d.end());
  const std::size_t iterations = options.iterations.value_or(schedule.iterations);
  for (std::size_t k = 0; k < iterations; ++k) {
    append_iteration(steps, n, model, std::numbers::pi, std::numbers::pi);
  }
  if (options.tuned_step) {
    append_iteration(steps, n, model, schedule.phase_chi, schedule.phase_pi);
  }
  return trace;
}

void validate_trace(const AlgorithmTrace& trace, const DistributedDatabase& db) {
  for (std::size_t k = 0; k < trace.steps.size(); ++k) {
    const auto where = " (step " + std::to_string(k) + ")";
    if (const auto* call = std::get_if<OracleCall>(&trace.steps[k])) {
      if (call->machine >= db.machines()) {
        fail(ErrorCode::trace, "oracle call to machine " + std::to_string(call->machine + 1) +
                                   " but the database has " + std::to_string(db.machines()) +
                                   where);
      }
    } else if (std::holds_alternative<ParallelOracleCall>(trace.steps[k])) {
      if (trace.model != QueryModel::parallel) {
        fail(ErrorCode::trace, "parallel query in a sequential trace" + where);
      }
    } else if (needs_banks(std::get<UnitaryCall>(trace.steps[k]).name) &&
               trace.model != QueryModel::parallel) {
      fail(ErrorCode::trace, "ancilla-bank unitary in a sequential trace" + where);
    }
  }
}

void apply_step(StateVector& state, const DistributedDatabase& db, const TraceStep& step,
                QueryCounter& counter) {
  if (const auto* call = std::get_if<OracleCall>(&step)) {
    apply_sequential_oracle(state, db, call->machine, call->dagger, counter);
    return;
  }
  if (const auto* call = std::get_if<ParallelOracleCall>(&step)) {
    apply_parallel_oracle(state, db, call->dagger, counter);
    return;
  }
  const auto& u = std::get<UnitaryCall>(step);
  const double sign = u.dagger ? -1.0 : 1.0;
  switch (u.name) {
    case Builtin::fourier:
      apply_fourier(state, state.layout().index_of(slot::elem), u.dagger);
      break;
    case Builtin::count_rotation: apply_count_rotation(state, u.dagger); break;
    case Builtin::phase_chi: apply_S_chi(state, sign * u.phase); break;
    case Builtin::phase_pi: apply_S_pi(state, sign * u.phase); break;
    case Builtin::global_phase: apply_global_phase(state, sign * u.phase); break;
    case Builtin::fan_out: apply_fan_out(state, db.machines(), u.dagger); break;
    case Builtin::fold_counts: apply_fold_counts(state, db.machines(), u.dagger); break;
  }
}

StateVector execute_trace(const AlgorithmTrace& trace, const DistributedDatabase& db,
                          QueryCounter& counter) {
  validate_trace(trace, db);
  StateVector state(sampler_layout(db, trace.model));
  for (const auto& step : trace.steps) apply_step(state, db, step, counter);
  return state;
}

std::string trace_to_json(const AlgorithmTrace& trace) {
  json steps = json::array();
  for (const auto& step : trace.steps) {
    if (const auto* call = std::get_if<OracleCall>(&step)) {
      steps.push_back({{"oracle", {{"machine", call->machine + 1}, {"dagger", call->dagger}}}});
    } else if (const auto* call = std::get_if<ParallelOracleCall>(&step)) {
      steps.push_back({{"parallel_oracle", {{"dagger", call->dagger}}}});
    } else {
      const auto& u = std::get<UnitaryCall>(step);
      json body = {{"name", std::string(to_string(u.name))}, {"dagger", u.dagger}};
      if (u.phase != 0.0) body["phase"] = u.phase;
      steps.push_back({{"unitary", body}});
    }
  }
  json doc = {{"model", std::string(to_string(trace.model))}, {"steps", steps}};
  return doc.dump();
}

AlgorithmTrace trace_from_json(std::string_view document) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error& e) {
    fail(ErrorCode::trace, std::string("malformed trace: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("steps") || !doc["steps"].is_array()) {
    fail(ErrorCode::trace, "trace must be an object with a 'steps' array");
  }
  AlgorithmTrace trace;
  if (doc.contains("model")) {
    if (!doc["model"].is_string()) fail(ErrorCode::trace, "model must be a string");
    try {
      trace.model = parse_query_model(doc["model"].get<std::string>());
    } catch (const Error& e) {
      fail(ErrorCode::trace, e.what());
    }
  }
  for (const auto& entry : doc["steps"]) {
    if (!entry.is_object() || entry.size() != 1) {
      fail(ErrorCode::trace, "each step must be an object with exactly one key");
    }
    const auto& [kind, body] = *entry.items().begin();
    if (!body.is_object()) fail(ErrorCode::trace, "step body must be an object");
    if (kind == "oracle") {
      if (!body.contains("machine") || !body["machine"].is_number_integer() ||
          body["machine"].get<long long>() < 1) {
        fail(ErrorCode::trace, "oracle step needs a 1-based integer machine");
      }
      trace.steps.push_back(
          OracleCall{static_cast<std::size_t>(body["machine"].get<long long>() - 1),
                     read_flag(body, "dagger")});
    } else if (kind == "parallel_oracle") {
      trace.steps.push_back(ParallelOracleCall{read_flag(body, "dagger")});
    } else if (kind == "unitary") {
      if (!body.contains("name") || !body["name"].is_string()) {
        fail(ErrorCode::trace, "unitary step needs a name");
      }
      UnitaryCall u{parse_builtin(body["name"].get<std::string>()), read_flag(body, "dagger"), 0.0};
      if (body.contains("phase")) {
        if (!body["phase"].is_number()) fail(ErrorCode::trace, "phase must be a number");
        u.phase = body["phase"].get<double>();
      }
      trace.steps.push_back(u);
    } else {
      fail(ErrorCode::trace, "unknown step kind '" + kind + "'");
    }
  }
  return trace;
}

}  // namespace qds
