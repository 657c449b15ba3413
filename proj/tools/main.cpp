// Copyright 2026 The incompat Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdio>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"
#include "incompat/error.hpp"

namespace {

using incompat::cli::Result;
using incompat::cli::RunConfig;

int exit_code(incompat::ErrorKind k) {
  switch (k) {
    case incompat::ErrorKind::kInvalidInput: return 2;
    case incompat::ErrorKind::kBudgetExceeded: return 3;
    case incompat::ErrorKind::kNumericalFailure: return 4;
  }
  return 4;
}

void add_dk(CLI::App* sub, RunConfig& c) {
  sub->add_option("d", c.d, "Dimension")->required();
  sub->add_option("k", c.k, "Number of bases")->required();
}

void add_subset(CLI::App* sub, RunConfig& c) {
  sub->add_option("--subset", c.subset, "Basis indices, e.g. 0,1,3")
      ->delimiter(',');
}

void add_tolerances(CLI::App* sub, RunConfig& c) {
  sub->add_option("--tie-tol", c.tie_tol, "Tie tolerance for lambda")
      ->check(CLI::PositiveNumber);
  sub->add_option("--gap-tol", c.gap_tol, "SDP duality gap tolerance")
      ->check(CLI::PositiveNumber);
  sub->add_option("--tuple-budget", c.tuple_budget, "Tuples scanned for lambda")
      ->check(CLI::PositiveNumber);
  sub->add_option("--block-budget", c.block_budget, "SDP block budget")
      ->check(CLI::PositiveNumber);
}

void add_scan_flags(CLI::App* sub, RunConfig& c) {
  sub->add_option("--group-tol", c.group_tol, "Clustering tolerance")
      ->check(CLI::PositiveNumber);
  sub->add_option("--scan-budget", c.scan_budget,
                  "Limit on C(d+1,k) d^k for subset scans")
      ->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Incompatibility robustness of mutually unbiased bases"};
  app.set_version_flag("--version", std::string("incompat ") + INCOMPAT_VERSION);
  app.set_config("--config", "", "Read options from a TOML/INI file");
  app.require_subcommand(1);
  app.fallthrough();

  RunConfig c;
  app.add_option("-o,--output", c.output, "Write the result to this file");
  app.add_option("--format", c.format, "Output format")
      ->check(CLI::IsMember({"json", "csv"}));
  app.add_option("-j,--jobs", c.jobs, "Worker threads")
      ->check(CLI::PositiveNumber);
  app.add_flag("--timings", c.timings, "Include wall-clock times");

  auto* mub = app.add_subcommand("mub", "Construct and verify d + 1 MUB");
  mub->add_option("d", c.d, "Dimension")->required();
  mub->add_option("--json", c.json_export, "Export the bases to this file");

  auto* bounds = app.add_subcommand("bounds", "Analytic upper and lower bounds");
  add_dk(bounds, c);
  add_subset(bounds, c);
  add_tolerances(bounds, c);

  auto* rob = app.add_subcommand("robustness", "White-noise robustness eta*");
  add_dk(rob, c);
  add_subset(rob, c);
  add_tolerances(rob, c);

  auto* table = app.add_subcommand("table", "Reproduce a reference table");
  table->add_option("which", c.which, "1, 2, low or analytic")
      ->required()
      ->check(CLI::IsMember({"1", "2", "low", "analytic"}));
  table->add_option("--dmax", c.dmax, "Largest dimension")
      ->check(CLI::PositiveNumber);
  table->add_option("--kmax", c.kmax, "Largest number of bases")
      ->check(CLI::PositiveNumber);
  add_tolerances(table, c);
  add_scan_flags(table, c);

  auto* scan = app.add_subcommand("scan", "Scan every k-subset of the bases");
  add_dk(scan, c);
  scan->add_flag("--exact", c.exact, "Also compute eta* per subset");
  add_tolerances(scan, c);
  add_scan_flags(scan, c);

  auto* qubit = app.add_subcommand("qubit", "Qubit optimality checks");
  qubit->add_option("--vectors", c.vectors,
                    "Bloch vectors 'x,y,z;x,y,z[;x,y,z]'");
  qubit->add_option("--eta", c.eta, "Noise for the parent positivity test");
  qubit->add_option("--samples", c.samples, "Random configurations");
  qubit->add_option("--seed", c.seed, "Sampling seed");

  auto* steer = app.add_subcommand("steering-check",
                                   "Steering identity and threshold");
  add_dk(steer, c);
  add_subset(steer, c);
  add_tolerances(steer, c);
  steer->add_option("--eta", c.eta, "Noise for the identity check");
  steer->add_option("--seed", c.seed, "Seed of the random state");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  c.command = app.get_subcommands().front()->get_name();

  try {
    Result r;
    if (c.command == "mub") r = incompat::cli::cmd_mub(c);
    if (c.command == "bounds") r = incompat::cli::cmd_bounds(c);
    if (c.command == "robustness") r = incompat::cli::cmd_robustness(c);
    if (c.command == "table") r = incompat::cli::cmd_table(c);
    if (c.command == "scan") r = incompat::cli::cmd_scan(c);
    if (c.command == "qubit") r = incompat::cli::cmd_qubit(c);
    if (c.command == "steering-check") r = incompat::cli::cmd_steering(c);
    const std::string text = incompat::cli::render(c, r);
    if (c.output.empty()) {
      std::cout << text;
    } else {
      std::ofstream f(c.output);
      if (!f) {
        std::cerr << "error: cannot write " << c.output << "\n";
        return 2;
      }
      f << text;
    }
    return r.exit_code;
  } catch (const incompat::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
}
