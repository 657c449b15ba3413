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

#include "incompat/sdp.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <cstdio>

#include "incompat/error.hpp"

namespace incompat {
namespace {

// v * E_ab in the expansion A_i = sum v E_ab.
struct Term {
  int con;
  int a;
  int b;
  Complex coef;
};

using Blocks = std::vector<Matrix>;

std::vector<std::vector<Term>> expand_terms(const SdpProblem& p) {
  std::vector<std::vector<Term>> out(p.block_dims.size());
  for (int i = 0; i < static_cast<int>(p.constraints.size()); ++i) {
    for (const SdpEntry& e : p.constraints[i].entries) {
      if (e.row == e.col) {
        out[e.block].push_back({i, e.row, e.row, Complex(e.value.real(), 0)});
      } else {
        out[e.block].push_back({i, e.row, e.col, e.value});
        out[e.block].push_back({i, e.col, e.row, std::conj(e.value)});
      }
    }
  }
  return out;
}

void add_entries(const std::vector<SdpEntry>& entries, double scale,
                 Blocks& out) {
  for (const SdpEntry& e : entries) {
    Matrix& m = out[e.block];
    if (e.row == e.col) {
      m(e.row, e.row) += scale * e.value.real();
    } else {
      m(e.row, e.col) += scale * e.value;
      m(e.col, e.row) += scale * std::conj(e.value);
    }
  }
}

Blocks zeros(const std::vector<int>& dims) {
  Blocks out;
  for (int n : dims) out.push_back(Matrix::Zero(n, n));
  return out;
}

Blocks scaled_identity(const std::vector<int>& dims, double s) {
  Blocks out;
  for (int n : dims) out.push_back(s * Matrix::Identity(n, n));
  return out;
}

double inner(const Blocks& u, const Blocks& v) {
  double s = 0.0;
  for (size_t b = 0; b < u.size(); ++b) {
    s += (u[b].conjugate().cwiseProduct(v[b])).sum().real();
  }
  return s;
}

double max_abs(const Blocks& u) {
  double s = 0.0;
  for (const Matrix& m : u) {
    if (m.size() > 0) s = std::max(s, m.cwiseAbs().maxCoeff());
  }
  return s;
}

Matrix herm(const Matrix& m) { return 0.5 * (m + m.adjoint()); }

// Largest alpha in (0, inf] with x + alpha dx >= 0, for x > 0.
double max_step(const Blocks& x, const Blocks& dx) {
  double alpha = std::numeric_limits<double>::infinity();
  for (size_t b = 0; b < x.size(); ++b) {
    const int n = static_cast<int>(x[b].rows());
    double lmin;
    if (n == 1) {
      lmin = dx[b](0, 0).real() / x[b](0, 0).real();
    } else {
      Eigen::LLT<Matrix> llt(x[b]);
      if (llt.info() != Eigen::Success) return 0.0;
      Matrix s = llt.matrixL().solve(dx[b]);
      s = llt.matrixL().solve(s.adjoint().eval());
      Eigen::SelfAdjointEigenSolver<Matrix> es(herm(s),
                                               Eigen::EigenvaluesOnly);
      lmin = es.eigenvalues()(0);
    }
    if (lmin < 0) alpha = std::min(alpha, -1.0 / lmin);
  }
  return alpha;
}

Blocks inverse(const Blocks& z) {
  Blocks out;
  out.reserve(z.size());
  for (const Matrix& m : z) {
    Eigen::LLT<Matrix> llt(m);
    if (llt.info() != Eigen::Success) {
      throw NumericalFailure("sdp: iterate lost positive definiteness");
    }
    out.push_back(herm(llt.solve(Matrix::Identity(m.rows(), m.cols()))));
  }
  return out;
}

class Solver {
 public:
  Solver(const SdpProblem& p, const SdpOptions& o)
      : p_(p), opts_(o), terms_(expand_terms(p)) {
    m_ = static_cast<int>(p.constraints.size());
    b_ = Eigen::VectorXd(m_);
    for (int i = 0; i < m_; ++i) b_(i) = p.constraints[i].rhs;
    c_ = zeros(p.block_dims);
    add_entries(p.objective, 1.0, c_);
    n_total_ = 0;
    for (int n : p.block_dims) n_total_ += n;
  }

  SdpSolution run();

 private:
  Eigen::VectorXd apply(const Blocks& w) const {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(m_);
    for (size_t blk = 0; blk < terms_.size(); ++blk) {
      for (const Term& t : terms_[blk]) {
        out(t.con) += (t.coef * w[blk](t.b, t.a)).real();
      }
    }
    return out;
  }

  Blocks adjoint(const Eigen::VectorXd& y) const {
    Blocks out = zeros(p_.block_dims);
    for (size_t blk = 0; blk < terms_.size(); ++blk) {
      for (const Term& t : terms_[blk]) {
        out[blk](t.a, t.b) += y(t.con) * t.coef;
      }
    }
    return out;
  }

  // M_il = Re tr(A_i X A_l Z^-1).
  Eigen::MatrixXd schur(const Blocks& x, const Blocks& zi) const {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(m_, m_);
    for (size_t blk = 0; blk < terms_.size(); ++blk) {
      const auto& ts = terms_[blk];
      const Matrix& xb = x[blk];
      const Matrix& zb = zi[blk];
      for (const Term& e : ts) {
        for (const Term& f : ts) {
          if (f.con < e.con) continue;
          m(e.con, f.con) +=
              (e.coef * f.coef * xb(e.b, f.a) * zb(f.b, e.a)).real();
        }
      }
    }
    return m.selfadjointView<Eigen::Upper>();
  }

  const SdpProblem& p_;
  SdpOptions opts_;
  std::vector<std::vector<Term>> terms_;
  int m_ = 0;
  int n_total_ = 0;
  Eigen::VectorXd b_;
  Blocks c_;
};

SdpSolution Solver::run() {
  Blocks x, z;
  Eigen::VectorXd y = Eigen::VectorXd::Zero(m_);
  if (p_.start) {
    x = p_.start->x;
    z = p_.start->z;
    for (int i = 0; i < m_; ++i) y(i) = p_.start->y.at(i);
  } else {
    double amax = 0.0, ratio = 0.0;
    for (int i = 0; i < m_; ++i) {
      double norm = 0.0;
      for (const SdpEntry& e : p_.constraints[i].entries) {
        norm += std::norm(e.value) * (e.row == e.col ? 1.0 : 2.0);
      }
      norm = std::sqrt(norm);
      amax = std::max(amax, norm);
      ratio = std::max(ratio, (1.0 + std::abs(b_(i))) / (1.0 + norm));
    }
    double cnorm = 0.0;
    for (const Matrix& cb : c_) cnorm += cb.squaredNorm();
    cnorm = std::sqrt(cnorm);
    const double rootn = std::sqrt(static_cast<double>(n_total_));
    x = scaled_identity(p_.block_dims, std::max({10.0, rootn, rootn * ratio}));
    z = scaled_identity(p_.block_dims,
                        std::max({10.0, rootn, cnorm, amax}) );
  }

  const double bnorm = m_ > 0 ? b_.lpNorm<Eigen::Infinity>() : 0.0;
  const double cmax = max_abs(c_);
  SdpSolution sol;
  for (int iter = 0;; ++iter) {
    const Eigen::VectorXd rp = b_ - apply(x);
    Blocks rd = c_;
    {
      const Blocks ay = adjoint(y);
      for (size_t blk = 0; blk < rd.size(); ++blk) rd[blk] -= z[blk] + ay[blk];
    }
    const double pobj = inner(c_, x);
    const double dobj = b_.dot(y);
    const double pinf = m_ > 0 ? rp.lpNorm<Eigen::Infinity>() : 0.0;
    const double dinf = max_abs(rd);
    sol.iterations = iter;
    sol.primal_value = pobj;
    sol.dual_value = dobj;
    sol.gap = pobj - dobj;
    sol.primal_residual = pinf;
    sol.dual_residual = dinf;
    const double xz = inner(x, z);
    if (std::abs(pobj - dobj) <= opts_.gap_tol && xz <= opts_.gap_tol &&
        pinf <= opts_.feas_tol * (1.0 + bnorm) &&
        dinf <= opts_.feas_tol * (1.0 + cmax)) {
      sol.status = SdpStatus::kOptimal;
      break;
    }
    // Diverging iterates with a separating functional mean infeasibility.
    if (y.norm() > 1e12 && dobj > 0 && max_abs(adjoint(y)) < 1e-6 * y.norm()) {
      sol.status = SdpStatus::kInfeasible;
      break;
    }
    if (xz > 1e14 || iter >= opts_.max_iter) {
      sol.status = xz > 1e14 ? SdpStatus::kInfeasible : SdpStatus::kMaxIter;
      break;
    }

    const double mu = xz / n_total_;
    const Blocks zi = inverse(z);
    Eigen::LLT<Eigen::MatrixXd> chol;
    {
      Eigen::MatrixXd m = schur(x, zi);
      chol.compute(m);
      if (chol.info() != Eigen::Success) {
        const double shift = 1e-13 * m.diagonal().cwiseAbs().maxCoeff();
        m.diagonal().array() += shift;
        chol.compute(m);
        if (chol.info() != Eigen::Success) {
          throw NumericalFailure("sdp: Schur complement is not positive definite");
        }
      }
    }

    // X Rd Z^-1 is shared by both solves.
    Blocks xrz(x.size());
    for (size_t blk = 0; blk < x.size(); ++blk) {
      xrz[blk] = x[blk] * rd[blk] * zi[blk];
    }

    auto direction = [&](double target, const Blocks* corr, Blocks& dx,
                         Eigen::VectorXd& dy, Blocks& dz) {
      Blocks r(x.size());
      for (size_t blk = 0; blk < x.size(); ++blk) {
        r[blk] = target * zi[blk] - x[blk] - xrz[blk];
        if (corr) r[blk] -= (*corr)[blk];
      }
      dy = chol.solve(rp - apply(r));
      const Blocks ady = adjoint(dy);
      dz.resize(x.size());
      dx.resize(x.size());
      for (size_t blk = 0; blk < x.size(); ++blk) {
        dz[blk] = rd[blk] - ady[blk];
        dx[blk] = herm(r[blk] - x[blk] * (-ady[blk]) * zi[blk]);
      }
    };

    Blocks dxp, dzp;
    Eigen::VectorXd dyp;
    direction(0.0, nullptr, dxp, dyp, dzp);
    const double ap = std::min(1.0, 0.98 * max_step(x, dxp));
    const double ad = std::min(1.0, 0.98 * max_step(z, dzp));
    double xz_pred = 0.0;
    {
      Blocks xn = x, zn = z;
      for (size_t blk = 0; blk < x.size(); ++blk) {
        xn[blk] += ap * dxp[blk];
        zn[blk] += ad * dzp[blk];
      }
      xz_pred = inner(xn, zn);
    }
    const double sigma = std::clamp(std::pow(xz_pred / xz, 3.0), 0.0, 1.0);
    Blocks corr(x.size());
    for (size_t blk = 0; blk < x.size(); ++blk) {
      corr[blk] = dxp[blk] * dzp[blk] * zi[blk];
    }
    Blocks dx, dz;
    Eigen::VectorXd dy;
    direction(sigma * mu, &corr, dx, dy, dz);
    const double tau = 0.95;
    const double alpha_p = std::min(1.0, tau * max_step(x, dx));
    const double alpha_d = std::min(1.0, tau * max_step(z, dz));
    if (opts_.trace) {
      std::fprintf(stderr,
                   "it %3d  pobj %.10g  dobj %.10g  pinf %.1e  dinf %.1e  "
                   "xz %.1e  step %.3f/%.3f  sigma %.3f\n",
                   iter, pobj, dobj, pinf, dinf, xz, alpha_p, alpha_d, sigma);
    }
    for (size_t blk = 0; blk < x.size(); ++blk) {
      x[blk] = herm(x[blk] + alpha_p * dx[blk]);
      z[blk] = herm(z[blk] + alpha_d * dz[blk]);
    }
    y += alpha_d * dy;
  }
  sol.x = std::move(x);
  sol.z = std::move(z);
  sol.y.assign(y.data(), y.data() + y.size());
  return sol;
}

}  // namespace

void SdpProblem::validate() const {
  auto check = [&](const SdpEntry& e) {
    if (e.block < 0 || e.block >= static_cast<int>(block_dims.size())) {
      throw InvalidInput("sdp: entry block out of range");
    }
    const int n = block_dims[e.block];
    if (e.row < 0 || e.col < 0 || e.row >= n || e.col >= n || e.row > e.col) {
      throw InvalidInput("sdp: entry must satisfy 0 <= row <= col < dim");
    }
    if (e.row == e.col && std::abs(e.value.imag()) > 0) {
      throw InvalidInput("sdp: diagonal entries must be real");
    }
  };
  for (int n : block_dims) {
    if (n < 1) throw InvalidInput("sdp: block dimensions must be positive");
  }
  for (const SdpEntry& e : objective) check(e);
  for (const SdpConstraint& c : constraints) {
    for (const SdpEntry& e : c.entries) check(e);
  }
  if (start) {
    if (start->x.size() != block_dims.size() ||
        start->z.size() != block_dims.size() ||
        start->y.size() != constraints.size()) {
      throw InvalidInput("sdp: starting point has the wrong shape");
    }
  }
}

std::string SdpProblem::dump() const {
  std::ostringstream os;
  os.precision(17);
  os << "provenance " << provenance << "\n";
  os << "blocks " << block_dims.size() << "\n";
  for (size_t b = 0; b < block_dims.size(); ++b) {
    os << "block " << b << " " << block_dims[b] << "\n";
  }
  auto entry = [&](const SdpEntry& e) {
    os << "  " << e.block << " " << e.row << " " << e.col << " "
       << e.value.real() << " " << e.value.imag() << "\n";
  };
  os << "objective " << objective.size() << "\n";
  for (const SdpEntry& e : objective) entry(e);
  os << "constraints " << constraints.size() << "\n";
  for (size_t i = 0; i < constraints.size(); ++i) {
    os << "constraint " << i << " rhs " << constraints[i].rhs << " entries "
       << constraints[i].entries.size() << "\n";
    for (const SdpEntry& e : constraints[i].entries) entry(e);
  }
  return os.str();
}

std::string to_string(SdpStatus s) {
  switch (s) {
    case SdpStatus::kOptimal: return "optimal";
    case SdpStatus::kInfeasible: return "infeasible";
    case SdpStatus::kMaxIter: return "max-iter";
  }
  return "unknown";
}

double apply_entries(const std::vector<SdpEntry>& entries,
                     const std::vector<Matrix>& x) {
  double s = 0.0;
  for (const SdpEntry& e : entries) {
    const Complex xv = x.at(e.block)(e.col, e.row);
    s += e.row == e.col ? e.value.real() * xv.real()
                        : 2.0 * (e.value * xv).real();
  }
  return s;
}

SdpSolution solve_sdp(const SdpProblem& p, const SdpOptions& opts) {
  p.validate();
  return Solver(p, opts).run();
}

}  // namespace incompat
