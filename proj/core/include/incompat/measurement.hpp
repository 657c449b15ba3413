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

#pragma once

#include <optional>
#include <vector>

#include "incompat/linalg.hpp"

namespace incompat {

/// A unitary that maps every measurement of a set onto itself, permuting
/// outcomes: U A_{a|x} U^dagger = A_{perm[x][a]|x}.
struct OutcomeSymmetry {
  Matrix unitary;
  std::vector<std::vector<int>> perms;
};

/// k POVMs on C^d. Measurement x has outcomes() operators A_{a|x}.
class MeasurementSet {
 public:
  /// Validates PSD (tol) and completeness (tol) for every measurement.
  explicit MeasurementSet(std::vector<std::vector<HermitianOperator>> ops,
                          double tol = kPsdTol);

  /// Rank-one projective measurements A_{a|x} = |v_a><v_a| from the columns
  /// of each orthonormal basis matrix.
  static MeasurementSet from_bases(const std::vector<Matrix>& bases);

  int k() const { return static_cast<int>(ops_.size()); }
  int dim() const { return dim_; }
  int outcomes(int x) const { return static_cast<int>(ops_[x].size()); }
  const HermitianOperator& op(int x, int a) const { return ops_[x][a]; }
  const std::vector<std::vector<HermitianOperator>>& ops() const {
    return ops_;
  }

  /// Every element is a rank-one projector.
  bool rank_one_projective() const { return rank_one_; }
  /// Within each measurement all elements have equal trace.
  bool unbiased_traces() const { return unbiased_traces_; }

  /// Basis matrices (columns = vectors) when rank_one_projective().
  const std::optional<std::vector<Matrix>>& bases() const { return bases_; }

  /// Product of outcome counts, saturating at SIZE_MAX.
  std::uint64_t tuple_count() const;

  const std::vector<OutcomeSymmetry>& symmetries() const { return symmetries_; }
  void set_symmetries(std::vector<OutcomeSymmetry> s) {
    symmetries_ = std::move(s);
  }

  /// Returns the set with each A replaced by eta A + (1 - eta) tr(A) 1 / d.
  MeasurementSet noisy(double eta) const;

 private:
  MeasurementSet() = default;
  void classify();

  int dim_ = 0;
  std::vector<std::vector<HermitianOperator>> ops_;
  std::optional<std::vector<Matrix>> bases_;
  std::vector<OutcomeSymmetry> symmetries_;
  bool rank_one_ = false;
  bool unbiased_traces_ = false;
};

}  // namespace incompat
