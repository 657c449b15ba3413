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

// Command implementations behind the incompat executable. Each command
// fills a result document; main() wraps it with the version and the config
// echo and writes it as JSON or CSV.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "incompat/joint.hpp"
#include "json.hpp"

namespace incompat::cli {

using Json = nlohmann::ordered_json;

struct RunConfig {
  std::string command;
  std::string which;  // table name
  int d = 0;
  int k = 0;
  std::vector<int> subset;
  double tie_tol = 1e-8;
  double gap_tol = 1e-8;
  double group_tol = 1e-6;
  std::uint64_t tuple_budget = 10'000'000;
  std::uint64_t block_budget = 4096;
  double scan_budget = 1e8;
  int dmax = 0;  // 0: table default
  int kmax = 0;
  bool exact = false;
  double eta = -1.0;  // negative: not given
  std::string vectors;
  std::uint64_t samples = 100'000;
  std::uint64_t seed = 1;
  std::string output;
  std::string json_export;
  std::string format = "json";
  int jobs = 1;
  bool timings = false;
};

Json config_json(const RunConfig& c);

/// Value rounded to 12 significant digits.
double num(double v);
Json num_or_null(const std::optional<double>& v);

LambdaOptions lambda_options(const RunConfig& c);
RobustnessOptions robustness_options(const RunConfig& c);

/// A command result. Tabular results put their rows in "rows"; the CSV
/// writer emits those, or key/value pairs of the scalar members otherwise.
struct Result {
  Json body = Json::object();
  /// Set for outputs whose natural CSV form is produced by the library.
  std::string csv;
  /// Process exit code for a result that is complete but not a success
  /// (a skipped computation).
  int exit_code = 0;
};

Result cmd_mub(const RunConfig& c);
Result cmd_bounds(const RunConfig& c);
Result cmd_robustness(const RunConfig& c);
Result cmd_table(const RunConfig& c);
Result cmd_scan(const RunConfig& c);
Result cmd_qubit(const RunConfig& c);
Result cmd_steering(const RunConfig& c);

std::string render(const RunConfig& c, const Result& r);

}  // namespace incompat::cli
