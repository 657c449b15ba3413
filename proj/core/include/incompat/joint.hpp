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

// Exact white-noise robustness eta* of a measurement set:
//
//   eta* = max eta  s.t.  sum_j delta_{j_x,a} G_j = eta A_{a|x}
//                                 + (1 - eta) tr(A_{a|x}) 1/d,  G_j >= 0,
//
// solved as an SDP, certified by dual points, or saturated by explicit
// parent POVMs.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "incompat/bounds.hpp"
#include "incompat/measurement.hpp"
#include "incompat/sdp.hpp"

namespace incompat {

inline constexpr std::uint64_t kDefaultBlockBudget = 4096;
inline constexpr double kParentTol = 1e-7;

/// Variables: one d x d block per outcome tuple (mixed radix, last axis
/// fastest) followed by a 1 x 1 block s with eta = 1 - s. Minimizes s
/// subject to sum_j delta G_j + s (A - tr(A) 1/d) = A. Constraints are
/// Hermitian entries on the upper triangle, ordered by (x, a, row, col);
/// the last outcome of every measurement after the first is omitted since
/// its equations follow from the others. Throws BudgetExceeded when the
/// tuple count exceeds block_budget.
SdpProblem build_primal(const MeasurementSet& m,
                        std::uint64_t block_budget = kDefaultBlockBudget);

/// Same feasible set with every constraint negated, so the standard-form
/// multipliers y are the entries of X_{a|x} (X_{last|x} = 0 for x > 0) and
///   Z_j = sum_x X_{j_x|x},
///   Z_s = 1 + tr sum X A - (1/d) sum tr(A) tr(X).
SdpProblem build_dual(const MeasurementSet& m,
                      std::uint64_t block_budget = kDefaultBlockBudget);

/// eta from a solved robustness problem (either builder): 1 - C . X and
/// 1 - b . y respectively.
double eta_primal(const SdpSolution& s);
double eta_dual(const SdpSolution& s);

/// Operators X_{a|x} read back from the multipliers of build_dual (or, with
/// the sign flipped, build_primal).
std::vector<std::vector<HermitianOperator>> dual_operators(
    const MeasurementSet& m, const SdpProblem& p, const SdpSolution& s);

struct DualCertificate {
  std::vector<std::vector<HermitianOperator>> x;
  double value = 0.0;           // 1 + tr sum X A
  double scalar_residual = 0.0; // value - (1/d) sum tr(A) tr(X)
  double min_tuple_eigenvalue = 0.0;
  double lambda = 0.0;
  /// True when min_tuple_eigenvalue was read off lambda rather than
  /// scanned (too many tuples).
  bool tuple_residual_from_lambda = false;

  bool feasible(double tol = 1e-9) const {
    return scalar_residual >= -tol && min_tuple_eigenvalue >= -tol;
  }
};

/// Fills value, scalar slack and the smallest eigenvalue of
/// sum_x X_{j_x|x} over every tuple j, for arbitrary dual operators c.x.
/// Throws BudgetExceeded when there are more than scan_budget tuples.
void dual_residuals(const MeasurementSet& m, DualCertificate& c,
                    std::uint64_t scan_budget = 250'000);

DualCertificate dual_ansatz(const MeasurementSet& m,
                            const LambdaOptions& opts = {});
/// Same, reusing a lambda scan of m.
DualCertificate dual_ansatz(const MeasurementSet& m, const LambdaResult& lr);

struct ParentPOVM {
  int dim = 0;
  std::vector<int> arity;
  std::map<Tuple, HermitianOperator> elements;  // nonzero ones only
  /// G_j were divided by this to make them sum to identity.
  double normalization = 1.0;
  /// max |sum G - 1| after normalization.
  double completeness_deviation = 0.0;
  /// Per-entry residual below which check_parent accepts the marginals.
  double tolerance = kParentTol;
};

struct ParentCheck {
  bool ok = false;
  double eta = 0.0;
  double max_residual = 0.0;   // worst entry of M - (eta A + (1-eta) N)
  double min_eigenvalue = 0.0; // over all elements
  std::string diagnostic;
};

/// G_j = projector onto the top eigenspace of S_j when ||S_j|| = lambda,
/// normalized. Throws InvalidParent when sum_j G_j is not proportional to
/// the identity within 1e-6.
ParentPOVM parent_guess(const MeasurementSet& m, double tie_tol = 1e-8,
                        const LambdaOptions& opts = {});
/// Same, reusing a lambda scan of m made with the same tie tolerance.
ParentPOVM parent_guess(const MeasurementSet& m, const LambdaResult& lr,
                        double tie_tol = 1e-8);

/// Fits a single eta to every marginal by least squares on
/// span{A - N, 0} around N = tr(A) 1/d.
ParentCheck check_parent(const ParentPOVM& g, const MeasurementSet& m);

/// G_j = (S_j / lambda)^n over all tuples, by repeated squaring, normalized.
ParentPOVM parent_sequence(const MeasurementSet& m, int n,
                           std::uint64_t tuple_budget = 10'000'000);

/// eta^(n) of the sequence for k unbiased bases, n = 1..4.
double parent_sequence_eta(int n, int k, int d);

/// G_j = sum_y |chi_j^y><chi_j^y| with chi built by the factors
/// (1 + alpha_t sqrt(d) A_{j|x}) and circularly shifted basis orders.
/// Requires pairwise unbiased bases and k - 1 positive alphas.
ParentPOVM lower_bound_parent(const MeasurementSet& mubs,
                              const std::vector<double>& alphas,
                              std::uint64_t tuple_budget = 10'000'000);

struct RobustnessOptions {
  LambdaOptions lambda;
  SdpOptions sdp;
  std::uint64_t block_budget = kDefaultBlockBudget;
  bool try_certificate = true;
  bool allow_sdp = true;
  /// Bisection stops once the bracket is this narrow.
  double bisection_tol = 1e-6;
  /// Solver settings for the fixed-eta feasibility problems of the bisection.
  SdpOptions feasibility_sdp;
};

struct RobustnessReport {
  int d = 0;
  int k = 0;
  std::optional<double> eta;
  std::string method;  // certificate | sdp | sdp-bisection | bounds-only
  double lower = 0.0;
  double upper = 1.0;
  std::optional<double> gap;
  std::optional<double> lambda;
  std::optional<DualCertificate> certificate;
  std::optional<ParentCheck> parent;
  std::optional<SdpStatus> sdp_status;
  int sdp_iterations = 0;
  std::map<std::string, double> timings;  // seconds
  std::map<std::string, double> tolerances;
  std::string note;
};

/// Tries, in order: parent_guess certificate matching the dual ansatz,
/// the SDP (bisection when it stalls), and finally bounds alone.
RobustnessReport robustness(const MeasurementSet& m,
                            const RobustnessOptions& opts = {});

/// Decides joint measurability of the set at a fixed eta with one SDP.
bool jointly_measurable_at(const MeasurementSet& m, double eta,
                           const RobustnessOptions& opts = {});

std::string to_json(const RobustnessReport& r, bool with_timings = false);

}  // namespace incompat
