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

// Complete sets of mutually unbiased bases in prime-power dimension.
//
// Odd d = p^r:  |phi^x_a> = d^{-1/2} sum_{l in F_d} w_p^{Tr(x l^2 + a l)} |l>
// Even d = 2^r: |phi^x_a> = d^{-1/2} sum_{l in T_r} i^{Tr((x + 2a) l)} |l>
//
// x and a run over field elements (resp. Teichmuller elements) in
// enumeration order; the computational basis is appended last.

#pragma once

#include <span>
#include <string>
#include <vector>

#include "incompat/galois.hpp"
#include "incompat/linalg.hpp"
#include "incompat/measurement.hpp"

namespace incompat {

struct Basis {
  Matrix vectors;  // columns
  std::string label;
};

struct MubMetadata {
  int p = 0;
  int r = 0;
  std::vector<int> modulus;  // low degree first; empty when not applicable
  std::string convention;    // "odd-field", "even-galois-ring", "pauli", ...
};

struct MubSet {
  int dim = 0;
  std::vector<Basis> bases;
  MubMetadata metadata;
  /// Monomial unitaries (X(b) Z(c)) that permute the outcomes of every basis.
  std::vector<OutcomeSymmetry> symmetries;
};

MubSet build_mub_odd(int p, int r, int size_budget = galois::kDefaultSizeBudget);
MubSet build_mub_even(int r, int size_budget = galois::kDefaultSizeBudget);
/// Dispatches on the factorization of d. Throws InvalidInput for d that is
/// not a prime power.
MubSet build_mub(int d, int size_budget = galois::kDefaultSizeBudget);
/// Z, X, Y eigenbases in that order.
MubSet pauli_triple();
/// Bases a_i (x) b_i for i < min(|a|, |b|). Unbiased, but not complete.
MubSet tensor_product(const MubSet& a, const MubSet& b);

struct UnbiasedReport {
  double max_deviation = 0.0;    // max | |<phi|psi>| - 1/sqrt(d) |
  double max_gram_deviation = 0.0;
  int worst_x = -1;
  int worst_y = -1;
  bool passed = false;
};

UnbiasedReport verify_unbiased(const MubSet& m, double tol = 1e-10);

/// Rank-one projective measurements for the chosen bases, in subset order.
MeasurementSet to_measurements(const MubSet& m, std::span<const int> subset);
MeasurementSet to_measurements(const MubSet& m);

std::string mub_to_json(const MubSet& m);
/// Parses and re-verifies unbiasedness; throws InvalidInput on failure.
MubSet mub_from_json(const std::string& text, double tol = 1e-10);

}  // namespace incompat
