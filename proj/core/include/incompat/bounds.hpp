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

// Analytic bounds on the white-noise robustness eta*.
//
// Upper bounds come from the dual feasible point built on
//   lambda = max_j ||S_j||,  S_j = sum_x A_{j_x|x};
// lower bounds from an explicit parent POVM whose robustness obeys
//   eta_k = [(2a sqrt(d) + d)(k-1) eta_{k-1} + 2a sqrt(d) + a^2 d]
//           / [k (2a sqrt(d) + (a^2 + 1) d)],   eta_1 = 1.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "incompat/measurement.hpp"

namespace incompat {

using Tuple = std::vector<int>;

enum class LambdaMode {
  kAuto,        // symmetry-reduced when symmetries allow it, else exhaustive
  kExhaustive,
  kSymmetry,    // throws InvalidInput when the symmetries do not suffice
};

struct LambdaOptions {
  double tie_tol = 1e-8;
  std::uint64_t budget = 10'000'000;  // tuples actually evaluated
  LambdaMode mode = LambdaMode::kAuto;
  /// Scan only the first `budget` tuples instead of throwing.
  bool allow_truncation = false;
  int jobs = 1;
};

struct LambdaResult {
  double lambda = 0.0;
  std::vector<Tuple> argmax_tuples;  // sorted lexicographically
  std::uint64_t tuples_scanned = 0;
  std::string method;  // "exhaustive" | "symmetry-reduced" | "budget-truncated"
  /// False when truncated: lambda is then only a lower bound on the maximum.
  bool certifying = true;
};

LambdaResult compute_lambda(const MeasurementSet& m,
                            const LambdaOptions& opts = {});

/// ||S_j|| for one tuple.
double tuple_norm(const MeasurementSet& m, const Tuple& j);

struct BoundReport {
  std::string kind;  // upper_general | upper_rank1 | upper_simple |
                     // upper_charpoly_k4 | lower_recursive
  double value = 0.0;
  int d = 0;
  int k = 0;
  std::optional<double> lambda;
  std::vector<double> alphas;
  std::uint64_t tuples_scanned = 0;
  bool certifying = true;
  std::map<std::string, double> tolerances;
  std::string note;
};

std::string to_json(const BoundReport& r);

/// (lambda - sum (tr A / d)^2) / sum (tr A^2 / d - (tr A / d)^2).
/// Throws ZeroDenominator when every element is proportional to identity.
BoundReport eta_up_general(const MeasurementSet& m,
                           const LambdaOptions& opts = {});
/// (lambda - k/d) / (k - k/d); requires rank-one projective input.
BoundReport eta_up_rank1(const MeasurementSet& m,
                         const LambdaOptions& opts = {});
/// Value of the rank-one formula for a given lambda.
double eta_up_from_lambda(double lambda, int k, int d);
/// (sqrt(d)/k + 1) / (sqrt(d) + 1).
BoundReport eta_up_simple(int k, int d);

enum class CharpolyVariant {
  /// Fourth power-sum k[6q + 1 + q^2] + 4 s3 + s4 with q = (k-1)/d, the form
  /// whose d = 6 instance is (1/4)[(2X^2 - 4X + 1)^2 - s4] - (s3/3)(X - 1).
  kPublished,
  /// Exact fourth power-sum k + 6kq + k(k-1)(2k-3)/d^2 + 4 s3 + s4.
  kExact,
};

/// Coefficients (highest first) of the quartic factor of det(X - S_j) for
/// four unbiased rank-one projectors, from Newton's identities.
std::vector<double> charpoly_k4(int d, double sigma3, double sigma4,
                                CharpolyVariant variant);

/// Upper bound on eta for four MUB in dimension d from the largest root of
/// the quartic at sigma3 = 24/d^{3/2}, sigma4 = 24/d^2.
BoundReport eta_up_charpoly_k4(int d,
                               CharpolyVariant variant = CharpolyVariant::kPublished);

struct NewtonTraces {
  double tr1 = 0, tr2 = 0, tr3 = 0, tr4 = 0;
  Complex sigma3, sigma4;
};

/// Direct traces of S_j^n and the distinct-index cycle sums of overlaps.
NewtonTraces newton_traces(const MeasurementSet& m, const Tuple& j);
/// Closed forms of tr S^n (n = 1..4) for k unbiased rank-one projectors.
NewtonTraces newton_closed_forms(int k, int d, double sigma3, double sigma4,
                                 CharpolyVariant variant = CharpolyVariant::kExact);

/// One step of the lower-bound recursion.
double eta_low_step(double eta_prev, int k, int d, double alpha);
/// Closed-form optimal alpha for k = 3.
double alpha3_closed_form(int d);
/// Stage-wise golden-section maximization over alpha in (0, 10].
BoundReport eta_low_recursive(int k, int d);

}  // namespace incompat
