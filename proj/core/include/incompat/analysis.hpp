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

// Subset scans for operationally inequivalent MUB, qubit optimality of MUB,
// and the steering reading of the robustness.

#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "incompat/joint.hpp"
#include "incompat/measurement.hpp"
#include "incompat/mub.hpp"

namespace incompat {

inline constexpr double kGroupTol = 1e-6;
inline constexpr double kScanBudget = 1e8;  // C(d+1, k) d^k

struct SubsetRecord {
  std::vector<int> indices;
  double eta_up = 0.0;
  std::optional<double> eta_star;
  int cluster_id = 0;  // clusters numbered by increasing eta_up
};

struct SubsetScan {
  int d = 0;
  int k = 0;
  std::vector<SubsetRecord> records;  // subsets in lexicographic order
  double group_tol = kGroupTol;
  int distinct = 0;
  std::vector<double> cluster_values;  // smallest member of each cluster
  std::map<double, int> sensitivity;   // group_tol -> count
  bool complete = true;
};

struct ScanOptions {
  bool compute_exact = false;
  double group_tol = kGroupTol;
  double budget = kScanBudget;
  /// Scan the subsets that fit in the budget instead of throwing.
  bool allow_partial = false;
  int jobs = 1;
  RobustnessOptions robustness;
};

/// Number of single-linkage clusters of values with gaps > tol.
int count_clusters(std::vector<double> values, double tol);

/// Every k-subset of the d + 1 constructed bases. Throws BudgetExceeded
/// when C(d+1, k) d^k > budget unless allow_partial.
SubsetScan scan_subsets(int d, int k, const ScanOptions& opts = {});

std::string scan_to_csv(const SubsetScan& s);
std::string scan_to_json(const SubsetScan& s);

using Bloch = std::array<double, 3>;

/// 2 / (|a1 + a2| + |a1 - a2|).
double qubit_eta2(const Bloch& a1, const Bloch& a2);
/// 4 / (|a1+a2+a3| + |a1-a2-a3| + |a2-a1-a3| + |a3-a1-a2|).
double qubit_eta3(const Bloch& a1, const Bloch& a2, const Bloch& a3);

/// Explicit parent of the noisy two-outcome POVMs (1 +- eta a.sigma)/2.
/// The result has 2^n elements indexed by the bits of (mu_1, ..., mu_n),
/// bit set meaning mu = -1.
std::vector<Matrix> qubit_parent(const std::vector<Bloch>& a, double eta);
/// True iff every element of qubit_parent is PSD within 1e-10.
bool qubit_parent_positivity(const std::vector<Bloch>& a, double eta);

/// sigma_{a|x} on Bob's side, indexed [x][a].
struct Assemblage {
  std::vector<std::vector<Matrix>> sigma;

  /// max_x |sum_a sigma_{a|x} - reduced|.
  double no_signalling_deviation(const Matrix& reduced) const;
};

/// psi is a vector on C^d (x) C^d, Alice's factor first.
Matrix reduced_state_b(const Vector& psi, int d);
/// tr_A[(A_{a|x}^eta (x) 1) |psi><psi|].
Assemblage assemblage_noisy_measurements(const Vector& psi,
                                         const MeasurementSet& m, double eta);
/// tr_A[(A_{a|x} (x) 1) rho^eta] with
/// rho^eta = eta |psi><psi| + (1 - eta) 1/d (x) tr_A |psi><psi|.
Assemblage assemblage_noisy_state(const Vector& psi, const MeasurementSet& m,
                                  double eta);
/// Largest entrywise difference between the two assemblages.
double steering_identity_check(const Vector& psi, const MeasurementSet& m,
                               double eta);

struct SteeringReport {
  int d = 0;
  int k = 0;
  RobustnessReport robustness;
  std::string statement;
};

/// Noise threshold of the isotropic-type state for steering with k MUB
/// measurements (subset 0..k-1 of the standard construction).
SteeringReport steering_bound(int d, int k, const RobustnessOptions& opts = {});
std::string to_json(const SteeringReport& r, bool with_timings = false);

/// build_mub(d), or for d = 6 the product of the d = 2 and d = 3 sets.
MubSet standard_mubs(int d);

}  // namespace incompat
