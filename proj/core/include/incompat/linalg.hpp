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

#include <Eigen/Dense>
#include <complex>
#include <span>
#include <vector>

namespace incompat {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr double kHermiticityTol = 1e-10;
inline constexpr double kClusterTol = 1e-8;
inline constexpr double kPsdTol = 1e-9;

/// Dense Hermitian matrix. Construction checks ||M - M^dagger||_max against
/// the tolerance and stores (M + M^dagger) / 2.
class HermitianOperator {
 public:
  HermitianOperator() = default;
  explicit HermitianOperator(const Matrix& m, double tol = kHermiticityTol);

  static HermitianOperator identity(int d);
  static HermitianOperator zero(int d);
  /// |v><v|.
  static HermitianOperator projector(const Vector& v);

  int dim() const { return static_cast<int>(m_.rows()); }
  const Matrix& matrix() const { return m_; }
  double trace() const { return m_.trace().real(); }

  HermitianOperator operator+(const HermitianOperator& o) const;
  HermitianOperator operator-(const HermitianOperator& o) const;
  HermitianOperator operator*(double s) const;
  HermitianOperator& operator+=(const HermitianOperator& o);

 private:
  struct Trusted {};
  HermitianOperator(Matrix m, Trusted) : m_(std::move(m)) {}

  Matrix m_;
};

inline HermitianOperator operator*(double s, const HermitianOperator& h) {
  return h * s;
}

struct EigenSystem {
  Eigen::VectorXd eigenvalues;  // ascending
  Matrix eigenvectors;          // columns, orthonormal
};

/// Cyclic complex Jacobi. Throws NumericalFailure after max_sweeps.
EigenSystem eigh(const HermitianOperator& m, int max_sweeps = 100);
/// Same iteration without accumulating eigenvectors. Input must be Hermitian;
/// only the upper triangle is trusted.
Eigen::VectorXd eigvalsh(const Matrix& m, int max_sweeps = 100);

double op_norm(const HermitianOperator& m);
double max_eigenvalue(const HermitianOperator& m);
double min_eigenvalue(const HermitianOperator& m);

HermitianOperator max_eigenspace_projector(const HermitianOperator& m,
                                           double cluster_tol = kClusterTol);

bool is_psd(const HermitianOperator& m, double tol = kPsdTol);

/// exp(2 pi i / p).
Complex root_of_unity(int p);

/// Real roots of sum_i coeffs[i] X^{n-i} (highest degree first), ascending.
/// Repeated roots are reported once.
std::vector<double> real_poly_roots(std::span<const double> coeffs);

}  // namespace incompat
