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

// Dense primal-dual interior-point solver for small block-diagonal
// Hermitian SDPs in standard form
//
//   (P)  min  C . X   s.t.  A_i . X = b_i,  X >= 0
//   (D)  max  b . y   s.t.  Z = C - sum_i y_i A_i >= 0
//
// with U . V = Re tr(U V). Constraint operators are sparse lists of entries.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "incompat/linalg.hpp"

namespace incompat {

/// One nonzero of a Hermitian constraint operator: value v at (row, col)
/// with row <= col, and conj(v) at (col, row) when row < col. Diagonal
/// values must be real.
struct SdpEntry {
  int block = 0;
  int row = 0;
  int col = 0;
  Complex value;
};

struct SdpConstraint {
  std::vector<SdpEntry> entries;
  double rhs = 0.0;
};

struct SdpStartingPoint {
  std::vector<Matrix> x;
  std::vector<double> y;
  std::vector<Matrix> z;
};

struct SdpProblem {
  std::vector<int> block_dims;
  std::vector<SdpEntry> objective;  // C, same entry convention
  std::vector<SdpConstraint> constraints;
  std::string provenance = "generic";  // primal-robustness | dual-robustness
  std::optional<SdpStartingPoint> start;

  /// Throws InvalidInput on out-of-range entries or complex diagonals.
  void validate() const;
  /// Plain-text block listing for cross-solver checks.
  std::string dump() const;
};

enum class SdpStatus { kOptimal, kInfeasible, kMaxIter };

std::string to_string(SdpStatus s);

struct SdpOptions {
  double gap_tol = 1e-8;
  double feas_tol = 1e-8;
  int max_iter = 200;
  /// Per-iteration progress on stderr.
  bool trace = false;
};

struct SdpSolution {
  double primal_value = 0.0;  // C . X
  double dual_value = 0.0;    // b . y
  double gap = 0.0;           // primal_value - dual_value
  double primal_residual = 0.0;  // ||b - A(X)||_inf
  double dual_residual = 0.0;    // max entry of C - Z - sum y A
  std::vector<Matrix> x;
  std::vector<double> y;
  std::vector<Matrix> z;
  SdpStatus status = SdpStatus::kMaxIter;
  int iterations = 0;
};

/// Helmberg-Kojima-Monteiro direction with Mehrotra predictor-corrector.
/// Throws NumericalFailure when the Schur complement loses definiteness.
SdpSolution solve_sdp(const SdpProblem& p, const SdpOptions& opts = {});

/// Re tr(A_i X) for the operator given by `entries`.
double apply_entries(const std::vector<SdpEntry>& entries,
                     const std::vector<Matrix>& x);

}  // namespace incompat
