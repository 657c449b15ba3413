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

#include "incompat/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "incompat/error.hpp"

namespace incompat {

HermitianOperator::HermitianOperator(const Matrix& m, double tol) {
  if (m.rows() != m.cols()) {
    throw InvalidInput("Hermitian operator must be square");
  }
  if (!m.allFinite()) throw InvalidInput("matrix has non-finite entries");
  const double asym = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (m.size() > 0 && asym > tol) {
    throw InvalidInput("matrix is not Hermitian (deviation " +
                       std::to_string(asym) + ")");
  }
  m_ = (m + m.adjoint()) * 0.5;
}

HermitianOperator HermitianOperator::identity(int d) {
  return {Matrix::Identity(d, d), Trusted{}};
}

HermitianOperator HermitianOperator::zero(int d) {
  return {Matrix::Zero(d, d), Trusted{}};
}

HermitianOperator HermitianOperator::projector(const Vector& v) {
  Matrix p = v * v.adjoint();
  return HermitianOperator(p, 1e-12);
}

HermitianOperator HermitianOperator::operator+(
    const HermitianOperator& o) const {
  return {m_ + o.m_, Trusted{}};
}

HermitianOperator HermitianOperator::operator-(
    const HermitianOperator& o) const {
  return {m_ - o.m_, Trusted{}};
}

HermitianOperator HermitianOperator::operator*(double s) const {
  return {m_ * s, Trusted{}};
}

HermitianOperator& HermitianOperator::operator+=(const HermitianOperator& o) {
  m_ += o.m_;
  return *this;
}

namespace {

// One Jacobi rotation zeroing a(p, q). With a(p, q) = |a_pq| e^{i phi} the
// unitary is Q = diag(1, e^{-i phi}) R on the (p, q) plane, R the real
// rotation of the phase-stripped 2x2 block.
template <bool kVectors>
void rotate(Matrix& a, Matrix* v, int p, int q) {
  const Complex apq = a(p, q);
  const double mag = std::abs(apq);
  const Complex phase = apq / mag;  // e^{i phi}
  const Complex conj_phase = std::conj(phase);
  const double app = a(p, p).real();
  const double aqq = a(q, q).real();
  const double theta = (aqq - app) / (2.0 * mag);
  const double t = (theta >= 0 ? 1.0 : -1.0) /
                   (std::abs(theta) + std::sqrt(theta * theta + 1.0));
  const double c = 1.0 / std::sqrt(t * t + 1.0);
  const double s = t * c;
  const int n = static_cast<int>(a.rows());
  for (int k = 0; k < n; ++k) {
    const Complex akp = a(k, p);
    const Complex akq = a(k, q) * conj_phase;
    a(k, p) = c * akp - s * akq;
    a(k, q) = s * akp + c * akq;
  }
  for (int k = 0; k < n; ++k) {
    const Complex apk = a(p, k);
    const Complex aqk = a(q, k) * phase;
    a(p, k) = c * apk - s * aqk;
    a(q, k) = s * apk + c * aqk;
  }
  a(p, p) = app - t * mag;
  a(q, q) = aqq + t * mag;
  a(p, q) = 0.0;
  a(q, p) = 0.0;
  if constexpr (kVectors) {
    for (int k = 0; k < n; ++k) {
      const Complex vkp = (*v)(k, p);
      const Complex vkq = (*v)(k, q) * conj_phase;
      (*v)(k, p) = c * vkp - s * vkq;
      (*v)(k, q) = s * vkp + c * vkq;
    }
  }
}

template <bool kVectors>
void jacobi(Matrix& a, Matrix* v, int max_sweeps) {
  const int n = static_cast<int>(a.rows());
  const double threshold = 1e-13 * a.norm();
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) off += std::norm(a(p, q));
    }
    if (std::sqrt(2.0 * off) <= threshold) return;
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        if (std::abs(a(p, q)) > 1e-300) rotate<kVectors>(a, v, p, q);
      }
    }
  }
  throw NumericalFailure("Jacobi eigensolver did not converge in " +
                         std::to_string(max_sweeps) + " sweeps");
}

}  // namespace

EigenSystem eigh(const HermitianOperator& m, int max_sweeps) {
  const int n = m.dim();
  Matrix a = m.matrix();
  Matrix v = Matrix::Identity(n, n);
  jacobi<true>(a, &v, max_sweeps);
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int i, int j) {
    return a(i, i).real() < a(j, j).real();
  });
  EigenSystem out;
  out.eigenvalues.resize(n);
  out.eigenvectors.resize(n, n);
  for (int i = 0; i < n; ++i) {
    out.eigenvalues(i) = a(order[i], order[i]).real();
    Vector col = v.col(order[i]);
    // Fix the gauge: largest-modulus component (first on ties) real positive.
    int pivot = 0;
    for (int k = 1; k < n; ++k) {
      if (std::abs(col(k)) > std::abs(col(pivot)) + 1e-12) pivot = k;
    }
    if (std::abs(col(pivot)) > 0) col *= std::conj(col(pivot)) / std::abs(col(pivot));
    out.eigenvectors.col(i) = col;
  }
  return out;
}

Eigen::VectorXd eigvalsh(const Matrix& m, int max_sweeps) {
  Matrix a = m;
  jacobi<false>(a, nullptr, max_sweeps);
  Eigen::VectorXd values = a.diagonal().real();
  std::sort(values.data(), values.data() + values.size());
  return values;
}

double op_norm(const HermitianOperator& m) {
  if (m.dim() == 0) return 0.0;
  const Eigen::VectorXd values = eigvalsh(m.matrix());
  return std::max(std::abs(values(0)), std::abs(values(values.size() - 1)));
}

double max_eigenvalue(const HermitianOperator& m) {
  const Eigen::VectorXd values = eigvalsh(m.matrix());
  return values(values.size() - 1);
}

double min_eigenvalue(const HermitianOperator& m) {
  return eigvalsh(m.matrix())(0);
}

HermitianOperator max_eigenspace_projector(const HermitianOperator& m,
                                           double cluster_tol) {
  const EigenSystem es = eigh(m);
  const int n = m.dim();
  const double top = es.eigenvalues(n - 1);
  Matrix p = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    if (es.eigenvalues(i) >= top - cluster_tol) {
      p += es.eigenvectors.col(i) * es.eigenvectors.col(i).adjoint();
    }
  }
  return HermitianOperator(p, 1e-9);
}

bool is_psd(const HermitianOperator& m, double tol) {
  return m.dim() == 0 || min_eigenvalue(m) >= -tol;
}

Complex root_of_unity(int p) {
  if (p < 2) throw InvalidInput("root of unity order must be >= 2");
  switch (p) {
    case 2: return {-1.0, 0.0};
    case 4: return {0.0, 1.0};
    default: return std::polar(1.0, 2.0 * std::numbers::pi / p);
  }
}

namespace {

double horner(std::span<const double> c, double x) {
  double acc = 0.0;
  for (double v : c) acc = acc * x + v;
  return acc;
}

std::vector<double> derivative(std::span<const double> c) {
  const int n = static_cast<int>(c.size()) - 1;
  std::vector<double> out;
  for (int i = 0; i < n; ++i) out.push_back(c[i] * (n - i));
  return out;
}

}  // namespace

std::vector<double> real_poly_roots(std::span<const double> coeffs) {
  size_t lead = 0;
  while (lead < coeffs.size() && coeffs[lead] == 0.0) ++lead;
  if (lead == coeffs.size()) {
    throw InvalidInput("polynomial is identically zero");
  }
  std::vector<double> c(coeffs.begin() + lead, coeffs.end());
  const int n = static_cast<int>(c.size()) - 1;
  if (n == 0) return {};
  const double leading = c.front();
  for (double& v : c) v /= leading;

  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) companion(0, i) = -c[i + 1];
  for (int i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
  if (solver.info() != Eigen::Success) {
    throw NumericalFailure("companion eigenvalue computation failed");
  }
  const Eigen::VectorXcd ev = solver.eigenvalues();

  double scale = 1.0;
  for (int i = 0; i < n; ++i) scale = std::max(scale, std::abs(ev(i)));
  // A root of multiplicity m splits into m eigenvalues at radius about
  // eps^{1/m}; gather eigenvalues closer than `merge` into one cluster.
  std::vector<Complex> all(ev.data(), ev.data() + n);
  std::sort(all.begin(), all.end(), [](Complex a, Complex b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  const double merge = 5e-3 * scale;

  auto polish = [](const std::vector<double>& f, double x) {
    const std::vector<double> df = derivative(f);
    for (int iter = 0; iter < 60; ++iter) {
      const double slope = df.empty() ? 0.0 : horner(df, x);
      if (slope == 0.0) break;
      const double step = horner(f, x) / slope;
      x -= step;
      if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(x))) break;
    }
    return x;
  };
  auto vanishes = [](const std::vector<double>& f, double x, double tol) {
    const int deg = static_cast<int>(f.size()) - 1;
    double bound = 0.0;
    for (int t = 0; t <= deg; ++t) {
      bound += std::abs(f[t]) * std::pow(std::abs(x), deg - t);
    }
    return std::abs(horner(f, x)) <= tol * std::max(1.0, bound);
  };

  std::vector<bool> used(n, false);
  std::vector<double> roots;
  for (int i = 0; i < n; ++i) {
    if (used[i]) continue;
    std::vector<Complex> cluster;
    for (int j = i; j < n; ++j) {
      if (!used[j] && std::abs(all[j] - all[i]) <= merge) {
        used[j] = true;
        cluster.push_back(all[j]);
      }
    }
    const int m = static_cast<int>(cluster.size());
    Complex mean = 0.0;
    for (Complex z : cluster) mean += z;
    mean /= static_cast<double>(m);
    if (m > 1 && std::abs(mean.imag()) <= 1e-6 * scale) {
      // Candidate m-fold root: simple root of the (m-1)-th derivative.
      std::vector<double> f = c;
      std::vector<std::vector<double>> chain = {c};
      for (int t = 1; t < m; ++t) chain.push_back(f = derivative(f));
      const double x = polish(f, mean.real());
      bool all_vanish = true;
      for (int t = 0; t < m; ++t) all_vanish &= vanishes(chain[t], x, 1e-8);
      if (all_vanish) {
        roots.push_back(x);
        continue;
      }
    }
    for (Complex z : cluster) {
      if (std::abs(z.imag()) > 1e-9 * scale) continue;
      const double x = polish(c, z.real());
      if (vanishes(c, x, 1e-8)) roots.push_back(x);
    }
  }
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end(),
                          [&](double a, double b) {
                            return std::abs(a - b) <= 1e-10 * scale;
                          }),
              roots.end());
  return roots;
}

}  // namespace incompat
