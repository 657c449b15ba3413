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

// Published reference values that the table commands grade against.

#pragma once

#include <optional>
#include <string>
#include <vector>

namespace incompat::reference {

/// One value of the robustness table for k MUB in dimension d. A cell with
/// inequivalent subsets has several entries.
struct RobustnessEntry {
  int d = 0;
  int k = 0;
  std::optional<double> eta_star;  // nullopt: unknown
  std::optional<double> eta_up;    // nullopt: unknown
  bool tight = false;              // eta_star == eta_up
  /// Closed form when one is known; the value is then exact to 1e-12.
  std::string closed_form;
};

const std::vector<RobustnessEntry>& robustness_table();
std::vector<RobustnessEntry> robustness_cell(int d, int k);

/// Closed forms with the subset of the standard construction realizing them.
struct AnalyticEntry {
  int d = 0;
  std::vector<int> subset;
  double value = 0.0;
  std::string closed_form;
  /// Reached by the educated-guess parent (otherwise only by the SDP).
  bool certificate = true;
};

const std::vector<AnalyticEntry>& analytic_table();

struct LowEntry {
  int d = 0;
  int k = 0;
  double value = 0.0;  // 4 decimals
};

const std::vector<LowEntry>& lower_bound_table();

/// Number of distinct eta_up values among k-subsets of the d + 1 bases.
struct CountEntry {
  int d = 0;
  int k = 0;
  std::optional<int> count;  // nullopt: not computed
};

const std::vector<CountEntry>& inequivalence_table();
/// nullopt when no value is recorded for (d, k).
std::optional<int> inequivalence_count(int d, int k);

/// Bounds for four MUB in the dimensions where no complete set is known.
struct QuadrupleBound {
  int d = 0;
  std::optional<double> lambda;
  double eta_up = 0.0;
  double eta_low = 0.0;
};

const std::vector<QuadrupleBound>& quadruple_bounds();

}  // namespace incompat::reference
