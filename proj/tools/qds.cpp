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


// qds: exact distributed-sampling simulator and lower-bound harness.
//
//   qds sample    --scenario <path> --model sequential|parallel [--tolerance 1e-9] --out <path>
//   qds adversary --scenario <path> --k <int> --alpha <real> --beta <real> [--limit 10000]
//                 --trace <csv> --summary <path>
//   qds sweep     --grid <path> [--threads <int>] --out <csv>
//   qds check     --scenario <path>

#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "qds/experiments.hpp"

int main(int argc, char** argv) {
  qds::ExperimentConfig config;
  std::string model = "sequential";
  std::size_t k = 1;
  std::size_t iterations = 0;

  CLI::App app{"Exact distributed quantum sampling and query lower-bound checks"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "qds 0.1.0");

  const std::map<std::string, qds::QueryModel> models{
      {"sequential", qds::QueryModel::sequential}, {"parallel", qds::QueryModel::parallel}};

  auto* sample = app.add_subcommand("sample", "Run the sampler and report the final state");
  sample->add_option("--scenario", config.scenario, "Scenario JSON")->required();
  sample->add_option("--model", model, "Query model")->check(CLI::IsMember({"sequential", "parallel"}));
  sample->add_option("--tolerance", config.tolerance, "Final-state error tolerance");
  sample->add_option("--out", config.out, "Report path (stdout when omitted)");

  auto* adversary =
      app.add_subcommand("adversary", "Replay a trace against a hard-input family");
  adversary->add_option("--scenario", config.scenario, "Scenario JSON")->required();
  adversary->add_option("--k", k, "Target machine (1-based)")->required()->check(CLI::PositiveNumber);
  adversary->add_option("--alpha", config.adversary.alpha, "Majority parameter")->required();
  adversary->add_option("--beta", config.adversary.beta, "Density parameter")->required();
  adversary->add_option("--limit", config.family_limit, "Family size limit");
  adversary->add_option("--model", model, "Query model")->check(CLI::IsMember({"sequential", "parallel"}));
  auto* iter_opt = adversary->add_option(
      "--iterations", iterations, "Truncate the sampler to this many standard iterations");
  adversary->add_flag("!--no-tuned-step", config.tuned_step, "Drop the final tuned iteration");
  adversary->add_option("--trace-in", config.trace_in, "External oblivious trace JSON")
      ->check(CLI::ExistingFile);
  adversary->add_option("--c0-margin", config.c0_margin, "Skip the lower bound once C0 reaches this");
  adversary->add_option("--tolerance", config.tolerance, "Slack allowed on every bound");
  adversary->add_option("--threads", config.threads, "Worker threads");
  adversary->add_option("--trace", config.trace_csv, "Per-step CSV (stdout when omitted)");
  adversary->add_option("--summary", config.summary, "Summary JSON (stdout when omitted)");

  auto* sweep = app.add_subcommand("sweep", "Measure query scaling over a grid");
  sweep->add_option("--grid", config.grid, "Grid JSON")->required();
  sweep->add_option("--threads", config.threads, "Worker threads");
  sweep->add_option("--tolerance", config.tolerance, "Final-state error tolerance");
  sweep->add_option("--out", config.out, "CSV path (stdout when omitted)");

  auto* check = app.add_subcommand("check", "Validate a scenario's schema and capacities");
  check->add_option("--scenario", config.scenario, "Scenario JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return qds::kExitInput;
  }

  config.model = models.at(model);
  if (sample->parsed()) {
    config.command = qds::Command::sample;
  } else if (adversary->parsed()) {
    config.command = qds::Command::adversary;
    config.adversary.k = k - 1;
    if (iter_opt->count() > 0) config.iterations = iterations;
  } else if (sweep->parsed()) {
    config.command = qds::Command::sweep;
  } else {
    config.command = qds::Command::check;
  }
  return qds::run_command(config, std::cout, std::cerr);
}
