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

#include "incompat/measurement.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "incompat/error.hpp"

namespace incompat {

MeasurementSet::MeasurementSet(std::vector<std::vector<HermitianOperator>> ops,
                               double tol)
    : ops_(std::move(ops)) {
  if (ops_.empty()) throw InvalidInput("measurement set is empty");
  dim_ = ops_[0].empty() ? 0 : ops_[0][0].dim();
  if (dim_ < 1) throw InvalidInput("measurement has no outcomes");
  for (size_t x = 0; x < ops_.size(); ++x) {
    if (ops_[x].empty()) throw InvalidInput("measurement has no outcomes");
    Matrix sum = Matrix::Zero(dim_, dim_);
    for (size_t a = 0; a < ops_[x].size(); ++a) {
      const HermitianOperator& op = ops_[x][a];
      if (op.dim() != dim_) throw InvalidInput("inconsistent dimensions");
      if (!is_psd(op, tol)) {
        throw InvalidInput("element " + std::to_string(a) + " of measurement " +
                           std::to_string(x) + " is not PSD");
      }
      sum += op.matrix();
    }
    const double dev =
        (sum - Matrix::Identity(dim_, dim_)).cwiseAbs().maxCoeff();
    if (dev > tol) {
      throw InvalidInput("measurement " + std::to_string(x) +
                         " does not sum to identity (deviation " +
                         std::to_string(dev) + ")");
    }
  }
  classify();
}

MeasurementSet MeasurementSet::from_bases(const std::vector<Matrix>& bases) {
  if (bases.empty()) throw InvalidInput("measurement set is empty");
  MeasurementSet m;
  m.dim_ = static_cast<int>(bases[0].rows());
  for (const Matrix& b : bases) {
    if (b.rows() != m.dim_ || b.cols() != m.dim_) {
      throw InvalidInput("basis matrix has wrong shape");
    }
    const double gram =
        (b.adjoint() * b - Matrix::Identity(m.dim_, m.dim_)).cwiseAbs().maxCoeff();
    if (gram > 1e-10) throw InvalidInput("basis is not orthonormal");
    std::vector<HermitianOperator> row;
    for (int a = 0; a < m.dim_; ++a) {
      row.push_back(HermitianOperator::projector(b.col(a)));
    }
    m.ops_.push_back(std::move(row));
  }
  m.bases_ = bases;
  m.rank_one_ = true;
  m.unbiased_traces_ = true;
  return m;
}

void MeasurementSet::classify() {
  rank_one_ = true;
  unbiased_traces_ = true;
  for (const auto& row : ops_) {
    for (const auto& op : row) {
      if (std::abs(op.trace() - 1.0) > 1e-9 ||
          (op.matrix() * op.matrix() - op.matrix()).cwiseAbs().maxCoeff() >
              1e-9) {
        rank_one_ = false;
      }
      if (std::abs(op.trace() - row[0].trace()) > 1e-9) {
        unbiased_traces_ = false;
      }
    }
  }
  if (!rank_one_) return;
  std::vector<Matrix> bases;
  for (const auto& row : ops_) {
    if (static_cast<int>(row.size()) != dim_) return;
    Matrix b(dim_, dim_);
    for (int a = 0; a < dim_; ++a) {
      const EigenSystem es = eigh(row[a]);
      b.col(a) = es.eigenvectors.col(dim_ - 1);
    }
    bases.push_back(std::move(b));
  }
  bases_ = std::move(bases);
}

std::uint64_t MeasurementSet::tuple_count() const {
  std::uint64_t total = 1;
  for (const auto& row : ops_) {
    const std::uint64_t n = row.size();
    if (total > std::numeric_limits<std::uint64_t>::max() / n) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    total *= n;
  }
  return total;
}

MeasurementSet MeasurementSet::noisy(double eta) const {
  std::vector<std::vector<HermitianOperator>> out;
  const HermitianOperator id = HermitianOperator::identity(dim_);
  for (const auto& row : ops_) {
    std::vector<HermitianOperator> r;
    for (const auto& op : row) {
      r.push_back(op * eta + id * ((1.0 - eta) * op.trace() / dim_));
    }
    out.push_back(std::move(r));
  }
  MeasurementSet m;
  m.dim_ = dim_;
  m.ops_ = std::move(out);
  m.classify();
  return m;
}

}  // namespace incompat
