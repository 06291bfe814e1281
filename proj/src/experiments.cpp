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


#include "qds/experiments.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "detail/parallel_for.hpp"
#include "qds/trace.hpp"

namespace qds {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::io, "cannot open '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::io, "cannot write '" + path.string() + "'");
  out << content;
  if (!out) fail(ErrorCode::io, "write to '" + path.string() + "' failed");
}

// Writes to `path`, or to the log when no path was given.
void emit(const std::filesystem::path& path, const std::string& content, std::ostream& log) {
  if (path.empty()) {
    log << content;
  } else {
    write_file(path, content);
  }
}

ordered_json schedule_json(const AASchedule& s) {
  return {{"theta", s.theta},         {"m_tilde", s.m_tilde},
          {"iterations", s.iterations}, {"phase_chi", s.phase_chi},
          {"phase_pi", s.phase_pi},   {"degenerate", s.degenerate},
          {"residual", s.residual},   {"numeric_fallback", s.numeric_fallback}};
}

template <typename T>
std::vector<T> read_axis(const json& doc, const char* key) {
  if (!doc.contains(key) || !doc[key].is_array() || doc[key].empty()) {
    fail(ErrorCode::schema, std::string("grid axis '") + key + "' must be a non-empty array");
  }
  std::vector<T> out;
  for (const auto& v : doc[key]) {
    if (!v.is_number_integer() || v.get<long long>() < 0) {
      fail(ErrorCode::schema, std::string("grid axis '") + key + "' needs non-negative integers");
    }
    out.push_back(static_cast<T>(v.get<long long>()));
  }
  return out;
}

std::size_t sampler_dimension(std::size_t universe, std::size_t machines, Count capacity,
                              QueryModel model) {
  // Saturating product so absurd grid points are rejected instead of overflowing.
  const double bank = static_cast<double>(universe) * static_cast<double>(capacity + 1) * 2.0;
  const double dim = model == QueryModel::sequential
                         ? bank
                         : bank * std::pow(bank, static_cast<double>(machines));
  return dim > 1e18 ? static_cast<std::size_t>(1e18) : static_cast<std::size_t>(dim);
}

AdversaryOptions adversary_options(const ExperimentConfig& config) {
  AdversaryOptions options;
  options.model = config.model;
  options.family_limit = config.family_limit;
  options.threads = resolve_threads(config.threads);
  options.sampler.iterations = config.iterations;
  options.sampler.tuned_step = config.tuned_step;
  options.bounds.tolerance = config.tolerance;
  options.bounds.c0_margin = config.c0_margin;
  if (!config.trace_in.empty()) options.trace = trace_from_json(read_file(config.trace_in));
  return options;
}

}  // namespace

std::string format_double(double value) {
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof buffer, value);
  return std::string(buffer, result.ptr);
}

void validate_config(const ExperimentConfig& config) {
  if (!(config.tolerance > 0.0)) fail(ErrorCode::schema, "tolerance must be positive");
  if (config.command == Command::adversary) {
    const auto& p = config.adversary;
    if (!(p.alpha > 0.0 && p.alpha <= 1.0)) fail(ErrorCode::schema, "alpha must lie in (0, 1]");
    if (!(p.beta > 0.0 && p.beta <= 1.0)) fail(ErrorCode::schema, "beta must lie in (0, 1]");
    if (!(config.c0_margin > 0.0)) fail(ErrorCode::schema, "C0 margin must be positive");
  }
}

unsigned resolve_threads(unsigned requested) {
  if (const char* env = std::getenv("QDS_THREADS")) {
    unsigned value = 0;
    const std::string_view text(env);
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec == std::errc() && ptr == text.data() + text.size() && value > 0) return value;
  }
  if (requested > 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::hard_input:
    case ErrorCode::family_too_large:
    case ErrorCode::ancilla_contamination:
      return kExitFailed;
    default:
      return kExitInput;
  }
}

SweepGrid load_sweep_grid(std::string_view document) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error& e) {
    fail(ErrorCode::schema, std::string("malformed grid: ") + e.what());
  }
  if (!doc.is_object()) fail(ErrorCode::schema, "grid must be an object");
  static const char* const known[] = {"N", "n", "nu", "M", "model", "seed", "band",
                                      "max_dimension"};
  for (const auto& [key, value] : doc.items()) {
    if (std::find(std::begin(known), std::end(known), key) == std::end(known)) {
      fail(ErrorCode::schema, "unknown grid key '" + key + "'");
    }
  }
  SweepGrid grid;
  grid.universe = read_axis<std::size_t>(doc, "N");
  grid.machines = read_axis<std::size_t>(doc, "n");
  grid.capacity = read_axis<Count>(doc, "nu");
  grid.total = read_axis<Count>(doc, "M");
  if (doc.contains("model")) {
    if (!doc["model"].is_string()) fail(ErrorCode::schema, "model must be a string");
    grid.model = parse_query_model(doc["model"].get<std::string>());
  }
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned()) fail(ErrorCode::schema, "seed must be unsigned");
    grid.seed = doc["seed"].get<std::uint64_t>();
  }
  if (doc.contains("band")) {
    const auto& band = doc["band"];
    if (!band.is_array() || band.size() != 2 || !band[0].is_number() || !band[1].is_number() ||
        band[0].get<double>() > band[1].get<double>()) {
      fail(ErrorCode::schema, "band must be [low, high] with low <= high");
    }
    grid.band_low = band[0].get<double>();
    grid.band_high = band[1].get<double>();
  }
  if (doc.contains("max_dimension")) {
    if (!doc["max_dimension"].is_number_unsigned()) {
      fail(ErrorCode::schema, "max_dimension must be unsigned");
    }
    grid.max_dimension = doc["max_dimension"].get<std::size_t>();
  }
  return grid;
}

DistributedDatabase generate_database(std::size_t universe, std::size_t machines,
                                      Count capacity, Count total, std::uint64_t seed) {
  if (universe == 0 || machines == 0) fail(ErrorCode::schema, "N and n must be positive");
  if (capacity < 1) fail(ErrorCode::capacity, "nu must be at least 1");
  if (total < 1 || total > capacity * static_cast<Count>(universe)) {
    fail(ErrorCode::capacity, "M must lie in [1, nu N]");
  }
  std::mt19937_64 rng(seed);
  const Count cell_max = capacity / static_cast<Count>(machines);
  std::uniform_int_distribution<Count> cell(0, cell_max);
  std::vector<std::vector<Count>> rows(machines, std::vector<Count>(universe, 0));
  std::vector<Count> totals(universe, 0);
  Count sum = 0;
  for (std::size_t j = 0; j < machines; ++j) {
    for (std::size_t i = 0; i < universe; ++i) {
      rows[j][i] = cell(rng);
      totals[i] += rows[j][i];
      sum += rows[j][i];
    }
  }
  std::vector<std::pair<std::size_t, std::size_t>> candidates;
  while (sum != total) {
    candidates.clear();
    for (std::size_t j = 0; j < machines; ++j) {
      for (std::size_t i = 0; i < universe; ++i) {
        if (sum > total ? rows[j][i] > 0 : totals[i] < capacity) candidates.emplace_back(j, i);
      }
    }
    std::uniform_int_distribution<std::size_t> pick(0, candidates.size() - 1);
    const auto [j, i] = candidates[pick(rng)];
    const Count delta = sum > total ? -1 : 1;
    rows[j][i] += delta;
    totals[i] += delta;
    sum += delta;
  }
  return DistributedDatabase(universe, capacity, std::move(rows));
}

std::vector<SweepPoint> run_sweep(const SweepGrid& grid, unsigned threads) {
  std::vector<SweepPoint> points;
  for (const auto n_univ : grid.universe) {
    for (const auto n_mach : grid.machines) {
      for (const auto nu : grid.capacity) {
        for (const auto m : grid.total) {
          SweepPoint point;
          point.universe = n_univ;
          point.machines = n_mach;
          point.capacity = nu;
          point.total = m;
          points.push_back(std::move(point));
        }
      }
    }
  }
  detail::parallel_for(points.size(), threads, [&](std::size_t p) {
    auto& point = points[p];
    try {
      if (sampler_dimension(point.universe, point.machines, point.capacity, grid.model) >
          grid.max_dimension) {
        point.note = "register dimension above max_dimension";
        return;
      }
      const auto db = generate_database(point.universe, point.machines, point.capacity,
                                        point.total, grid.seed + p);
      const auto report = run_sampling(db, grid.model).report;
      point.valid = true;
      point.iterations = report.schedule.iterations;
      point.d_applications = report.d_applications;
      point.queries = report.measured_queries();
      const double root = std::sqrt(static_cast<double>(point.capacity) *
                                    static_cast<double>(point.universe) /
                                    static_cast<double>(point.total));
      point.scale = grid.model == QueryModel::sequential
                        ? static_cast<double>(point.machines) * root
                        : root;
      point.ratio = static_cast<double>(point.queries) / point.scale;
      point.final_state_error = report.final_state_error;
    } catch (const Error& e) {
      point.valid = false;
      point.note = e.what();
    }
  });
  return points;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepPoint>& points) {
  out << "N,n,nu,M,valid,iterations,d_applications,queries,scale,ratio,final_state_error,note\n";
  for (const auto& p : points) {
    std::string note = p.note;
    std::replace(note.begin(), note.end(), ',', ';');
    std::replace(note.begin(), note.end(), '\n', ' ');
    out << p.universe << ',' << p.machines << ',' << p.capacity << ',' << p.total << ','
        << (p.valid ? 1 : 0) << ',' << p.iterations << ',' << p.d_applications << ','
        << p.queries << ',' << format_double(p.scale) << ',' << format_double(p.ratio) << ','
        << format_double(p.final_state_error) << ',' << note << '\n';
  }
}

int cmd_check(const ExperimentConfig& config, std::ostream& log) {
  const auto db = load_scenario_file(config.scenario);
  const auto& stats = db.stats();
  ordered_json report = {{"N", db.universe()},
                         {"n", db.machines()},
                         {"nu", db.capacity()},
                         {"M", stats.total},
                         {"machine_sizes", stats.machine_sizes},
                         {"machine_supports", stats.machine_supports},
                         {"machine_capacities", stats.machine_capacities},
                         {"valid", true}};
  emit(config.out, report.dump(2) + "\n", log);
  return kExitOk;
}

int cmd_sample(const ExperimentConfig& config, std::ostream& log) {
  const auto db = load_scenario_file(config.scenario);
  const auto run = run_sampling(db, config.model);
  const auto& r = run.report;
  ordered_json distribution = ordered_json::array();
  for (std::size_t i = 0; i < r.measured_distribution.size(); ++i) {
    distribution.push_back({{"element", i + 1},
                            {"measured", r.measured_distribution[i]},
                            {"target", r.target_distribution[i]}});
  }
  const bool passed = r.final_state_error <= config.tolerance;
  ordered_json report = {
      {"model", std::string(to_string(r.model))},
      {"N", db.universe()},
      {"n", db.machines()},
      {"nu", db.capacity()},
      {"M", db.stats().total},
      {"schedule", schedule_json(r.schedule)},
      {"d_applications", r.d_applications},
      {"queries",
       {{"sequential", r.queries.sequential_total()},
        {"parallel", r.queries.parallel_total()},
        {"sequential_equivalent", r.queries.sequential_equivalent()},
        {"per_machine",
         std::vector<std::uint64_t>(r.queries.per_machine().begin(),
                                    r.queries.per_machine().end())},
        {"expected", r.expected_queries},
        {"without_degenerate_step", r.queries_without_degenerate_step}}},
      {"final_state_error", r.final_state_error},
      {"ancilla_leakage", r.ancilla_leakage},
      {"distribution", distribution},
      {"max_distribution_error", r.max_distribution_error},
      {"tolerance", config.tolerance},
      {"passed", passed}};
  emit(config.out, report.dump(2) + "\n", log);
  return passed ? kExitOk : kExitFailed;
}

int cmd_adversary(const ExperimentConfig& config, std::ostream& log) {
  const auto db = load_scenario_file(config.scenario);
  const auto options = adversary_options(config);
  const auto run = run_adversary(db, config.adversary, options);
  const auto& p = run.potential;

  std::ostringstream csv;
  csv << "t,D_t,upper_bound,step_increment,oracle_difference\n";
  for (std::size_t t = 0; t < p.d.size(); ++t) {
    csv << t << ',' << format_double(p.d[t]) << ',' << format_double(p.upper_bound[t]) << ',';
    if (t < p.increment.size()) {
      csv << format_double(p.increment[t]) << ',' << format_double(p.oracle_difference[t]);
    } else {
      csv << ',';
    }
    csv << '\n';
  }
  emit(config.trace_csv, csv.str(), log);

  ordered_json checks = ordered_json::array();
  for (const auto& c : run.bounds.checks) {
    checks.push_back({{"name", c.name},
                      {"status", std::string(to_string(c.status))},
                      {"slack", c.slack},
                      {"detail", c.detail}});
  }
  const auto& hc = run.conditions;
  ordered_json summary = {
      {"model", std::string(to_string(options.trace ? options.trace->model : config.model))},
      {"k", config.adversary.k + 1},
      {"alpha", config.adversary.alpha},
      {"beta", config.adversary.beta},
      {"conditions",
       {{"M", hc.total},
        {"M_k", hc.machine_size},
        {"m_k", hc.support},
        {"kappa_k", hc.capacity},
        {"capacity_sum", hc.capacity_sum},
        {"majority", hc.majority},
        {"density", hc.density},
        {"headroom", hc.headroom}}},
      {"family_size", run.family_size},
      {"machine_calls", run.machine_calls},
      {"E", p.output_error},
      {"F", p.erased_gap},
      {"D_final", p.d.empty() ? 0.0 : p.d.back()},
      {"epsilon", p.epsilon},
      {"min_fidelity", p.min_fidelity},
      {"C0", run.bounds.c0},
      {"C", run.bounds.c},
      {"fidelity_hypothesis", run.bounds.fidelity_hypothesis ? "holds" : "violated"},
      {"checks", checks},
      {"passed", run.bounds.passed()}};
  emit(config.summary, summary.dump(2) + "\n", log);
  return run.bounds.passed() ? kExitOk : kExitFailed;
}

int cmd_sweep(const ExperimentConfig& config, std::ostream& log) {
  const auto grid = load_sweep_grid(read_file(config.grid));
  const auto points = run_sweep(grid, resolve_threads(config.threads));
  std::ostringstream csv;
  write_sweep_csv(csv, points);
  emit(config.out, csv.str(), log);
  bool in_band = true;
  for (const auto& p : points) {
    if (p.valid && (p.ratio < grid.band_low || p.ratio > grid.band_high ||
                    p.final_state_error > config.tolerance)) {
      in_band = false;
    }
  }
  return in_band ? kExitOk : kExitFailed;
}

int run_command(const ExperimentConfig& config, std::ostream& out, std::ostream& err) {
  try {
    validate_config(config);
    switch (config.command) {
      case Command::sample: return cmd_sample(config, out);
      case Command::adversary: return cmd_adversary(config, out);
      case Command::sweep: return cmd_sweep(config, out);
      case Command::check: return cmd_check(config, out);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  }
  return kExitInput;
}

}  // namespace qds
