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

#include "incompat/joint.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

#include "incompat/error.hpp"
#include "json_util.hpp"

namespace incompat {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::vector<int> arity_of(const MeasurementSet& m) {
  std::vector<int> ar(m.k());
  for (int x = 0; x < m.k(); ++x) ar[x] = m.outcomes(x);
  return ar;
}

// Mixed-radix increment, last axis fastest. False after the final tuple.
bool next_tuple(Tuple& j, const std::vector<int>& ar) {
  for (int x = static_cast<int>(j.size()) - 1; x >= 0; --x) {
    if (++j[x] < ar[x]) return true;
    j[x] = 0;
  }
  return false;
}

std::uint64_t checked_tuple_count(const MeasurementSet& m,
                                  std::uint64_t budget, const char* what) {
  const std::uint64_t n = m.tuple_count();
  if (n > budget) {
    std::ostringstream os;
    os << what << ": " << n << " outcome tuples exceed the budget of "
       << budget;
    throw BudgetExceeded(os.str());
  }
  return n;
}

Matrix noise_part(const HermitianOperator& a) {
  const int d = a.dim();
  return (a.trace() / d) * Matrix::Identity(d, d);
}

// Hermitian entry (row, col, part) of the constraint layout, part 0 = real
// (or diagonal), 1 = imaginary.
struct Slot {
  int x;
  int a;
  int row;
  int col;
  int part;
};

std::vector<Slot> constraint_layout(const MeasurementSet& m) {
  std::vector<Slot> out;
  const int d = m.dim();
  for (int x = 0; x < m.k(); ++x) {
    const int na = x == 0 ? m.outcomes(x) : m.outcomes(x) - 1;
    for (int a = 0; a < na; ++a) {
      for (int r = 0; r < d; ++r) {
        out.push_back({x, a, r, r, 0});
        for (int c = r + 1; c < d; ++c) {
          out.push_back({x, a, r, c, 0});
          out.push_back({x, a, r, c, 1});
        }
      }
    }
  }
  return out;
}

Complex slot_value(const Slot& s) {
  if (s.row == s.col) return {1.0, 0.0};
  return s.part == 0 ? Complex(0.5, 0.0) : Complex(0.0, 0.5);
}

double slot_component(const Matrix& m, const Slot& s) {
  const Complex v = m(s.row, s.col);
  return s.part == 0 ? v.real() : v.imag();
}

// sum_j delta G_j + s K_{a|x} = T_{a|x}, minimize s, every row times sign.
SdpProblem build_marginal_problem(
    const MeasurementSet& m, const std::vector<std::vector<Matrix>>& target,
    const std::vector<std::vector<Matrix>>& kcoef, double sign,
    std::uint64_t budget, const char* provenance) {
  const std::uint64_t ntuples = checked_tuple_count(m, budget, provenance);
  const int d = m.dim();
  const std::vector<int> ar = arity_of(m);
  const int sblock = static_cast<int>(ntuples);

  SdpProblem p;
  p.provenance = provenance;
  p.block_dims.assign(ntuples, d);
  p.block_dims.push_back(1);
  p.objective.push_back({sblock, 0, 0, Complex(1.0, 0.0)});

  // Tuple indices per (x, a), in enumeration order.
  std::vector<std::vector<std::vector<int>>> members(m.k());
  for (int x = 0; x < m.k(); ++x) members[x].resize(ar[x]);
  {
    Tuple j(m.k(), 0);
    int idx = 0;
    do {
      for (int x = 0; x < m.k(); ++x) members[x][j[x]].push_back(idx);
      ++idx;
    } while (next_tuple(j, ar));
  }

  for (const Slot& s : constraint_layout(m)) {
    SdpConstraint c;
    const Complex v = sign * slot_value(s);
    for (int blk : members[s.x][s.a]) {
      c.entries.push_back({blk, s.row, s.col, v});
    }
    const double kv = slot_component(kcoef[s.x][s.a], s);
    if (kv != 0.0) c.entries.push_back({sblock, 0, 0, Complex(sign * kv, 0)});
    c.rhs = sign * slot_component(target[s.x][s.a], s);
    p.constraints.push_back(std::move(c));
  }
  return p;
}

// Interior point: white-noise parent with s = 1, and X_{a|x} = mu 1 on the
// kept outcomes. Only strictly interior when every tr A > 0.
std::optional<SdpStartingPoint> robustness_start(const MeasurementSet& m,
                                                 const SdpProblem& p,
                                                 double sign) {
  const int d = m.dim();
  const std::vector<int> ar = arity_of(m);
  SdpStartingPoint st;
  double gsum = 0.0;
  {
    Tuple j(m.k(), 0);
    do {
      double w = 1.0;
      for (int x = 0; x < m.k(); ++x) w *= m.op(x, j[x]).trace() / d;
      if (w <= 0.0) return std::nullopt;
      gsum += w;
      st.x.push_back(w * Matrix::Identity(d, d));
    } while (next_tuple(j, ar));
  }
  st.x.push_back(Matrix::Ones(1, 1));
  const double gmean = gsum / static_cast<double>(st.x.size() - 1);
  const double mu = 1.0 / (m.k() * gmean);

  const std::vector<Slot> layout = constraint_layout(m);
  st.y.assign(layout.size(), 0.0);
  for (size_t i = 0; i < layout.size(); ++i) {
    if (layout[i].row == layout[i].col) st.y[i] = -sign * mu;
  }
  std::vector<int> kept(m.k());
  for (int x = 0; x < m.k(); ++x) kept[x] = x == 0 ? ar[x] : ar[x] - 1;
  {
    Tuple j(m.k(), 0);
    do {
      int n = 0;
      for (int x = 0; x < m.k(); ++x) n += j[x] < kept[x] ? 1 : 0;
      st.z.push_back(mu * n * Matrix::Identity(d, d));
    } while (next_tuple(j, ar));
  }
  st.z.push_back(Matrix::Ones(1, 1));
  if (st.x.size() != p.block_dims.size()) return std::nullopt;
  return st;
}

SdpProblem build_robustness(const MeasurementSet& m, std::uint64_t budget,
                            double sign, const char* provenance) {
  std::vector<std::vector<Matrix>> target(m.k()), kcoef(m.k());
  for (int x = 0; x < m.k(); ++x) {
    for (int a = 0; a < m.outcomes(x); ++a) {
      const Matrix& am = m.op(x, a).matrix();
      target[x].push_back(am);
      kcoef[x].push_back(am - noise_part(m.op(x, a)));
    }
  }
  SdpProblem p =
      build_marginal_problem(m, target, kcoef, sign, budget, provenance);
  p.start = robustness_start(m, p, sign);
  return p;
}

double max_abs_entry(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

bool pairwise_unbiased(const MeasurementSet& m, double tol) {
  if (!m.bases()) return false;
  const auto& b = *m.bases();
  const double target = 1.0 / std::sqrt(static_cast<double>(m.dim()));
  for (size_t x = 0; x < b.size(); ++x) {
    for (size_t y = x + 1; y < b.size(); ++y) {
      const Matrix g = b[x].adjoint() * b[y];
      if ((g.cwiseAbs().array() - target).abs().maxCoeff() > tol) return false;
    }
  }
  return true;
}

ParentPOVM normalize(std::map<Tuple, HermitianOperator> elements,
                     const MeasurementSet& m) {
  const int d = m.dim();
  Matrix total = Matrix::Zero(d, d);
  for (const auto& [j, g] : elements) total += g.matrix();
  const double c = total.trace().real() / d;
  if (!(c > 0.0)) throw InvalidParent("parent family sums to zero");
  ParentPOVM out;
  out.dim = d;
  out.arity = arity_of(m);
  out.normalization = c;
  for (auto& [j, g] : elements) {
    out.elements.emplace(j, g * (1.0 / c));
  }
  out.completeness_deviation =
      max_abs_entry(total / c - Matrix::Identity(d, d));
  return out;
}

Matrix matrix_power(Matrix base, int n) {
  Matrix result = Matrix::Identity(base.rows(), base.cols());
  while (n > 0) {
    if (n & 1) result = result * base;
    n >>= 1;
    if (n > 0) base = base * base;
  }
  return result;
}

double lower_estimate(const MeasurementSet& m) {
  double lower = 1.0 / m.k();
  if (m.rank_one_projective() && pairwise_unbiased(m, 1e-9)) {
    lower = std::max(lower, eta_low_recursive(m.k(), m.dim()).value);
  }
  return lower;
}

// (lambda - sum (tr A/d)^2) / sum (tr A^2/d - (tr A/d)^2).
double eta_up_value(const MeasurementSet& m, double lambda) {
  const int d = m.dim();
  double num = lambda, den = 0.0;
  for (int x = 0; x < m.k(); ++x) {
    for (int a = 0; a < m.outcomes(x); ++a) {
      const Matrix& am = m.op(x, a).matrix();
      const double t = m.op(x, a).trace() / d;
      num -= t * t;
      den += (am * am).trace().real() / d - t * t;
    }
  }
  if (den <= 1e-14) {
    throw ZeroDenominator("every measurement element is proportional to the identity");
  }
  return num / den;
}

}  // namespace

SdpProblem build_primal(const MeasurementSet& m, std::uint64_t block_budget) {
  return build_robustness(m, block_budget, 1.0, "primal-robustness");
}

SdpProblem build_dual(const MeasurementSet& m, std::uint64_t block_budget) {
  return build_robustness(m, block_budget, -1.0, "dual-robustness");
}

double eta_primal(const SdpSolution& s) { return 1.0 - s.primal_value; }
double eta_dual(const SdpSolution& s) { return 1.0 - s.dual_value; }

std::vector<std::vector<HermitianOperator>> dual_operators(
    const MeasurementSet& m, const SdpProblem& p, const SdpSolution& s) {
  const double sign = p.provenance == "dual-robustness" ? 1.0 : -1.0;
  const int d = m.dim();
  std::vector<std::vector<Matrix>> xs(m.k());
  for (int x = 0; x < m.k(); ++x) {
    xs[x].assign(m.outcomes(x), Matrix::Zero(d, d));
  }
  const std::vector<Slot> layout = constraint_layout(m);
  if (layout.size() != s.y.size()) {
    throw InvalidInput("dual_operators: solution does not match the set");
  }
  for (size_t i = 0; i < layout.size(); ++i) {
    const Slot& sl = layout[i];
    Matrix& xm = xs[sl.x][sl.a];
    const double y = sign * s.y[i];
    if (sl.row == sl.col) {
      xm(sl.row, sl.row) += y;
    } else {
      const Complex v = y * slot_value(sl);
      xm(sl.row, sl.col) += v;
      xm(sl.col, sl.row) += std::conj(v);
    }
  }
  std::vector<std::vector<HermitianOperator>> out(m.k());
  for (int x = 0; x < m.k(); ++x) {
    for (auto& xm : xs[x]) out[x].emplace_back(xm);
  }
  return out;
}

void dual_residuals(const MeasurementSet& m, DualCertificate& c,
                    std::uint64_t scan_budget) {
  const int d = m.dim();
  double trxa = 0.0, noise = 0.0;
  for (int x = 0; x < m.k(); ++x) {
    for (int a = 0; a < m.outcomes(x); ++a) {
      const Matrix& xm = c.x[x][a].matrix();
      trxa += (xm * m.op(x, a).matrix()).trace().real();
      noise += m.op(x, a).trace() * xm.trace().real() / d;
    }
  }
  c.value = 1.0 + trxa;
  c.scalar_residual = c.value - noise;

  checked_tuple_count(m, scan_budget, "dual_residuals");
  const std::vector<int> ar = arity_of(m);
  double worst = std::numeric_limits<double>::infinity();
  Tuple j(m.k(), 0);
  do {
    Matrix sum = Matrix::Zero(d, d);
    for (int x = 0; x < m.k(); ++x) sum += c.x[x][j[x]].matrix();
    worst = std::min(worst, min_eigenvalue(HermitianOperator(sum)));
  } while (next_tuple(j, ar));
  c.min_tuple_eigenvalue = worst;
  c.tuple_residual_from_lambda = false;
}

DualCertificate dual_ansatz(const MeasurementSet& m,
                            const LambdaOptions& opts) {
  return dual_ansatz(m, compute_lambda(m, opts));
}

DualCertificate dual_ansatz(const MeasurementSet& m, const LambdaResult& lr) {
  const int d = m.dim();
  double den = 0.0;
  for (int x = 0; x < m.k(); ++x) {
    for (int a = 0; a < m.outcomes(x); ++a) {
      const Matrix& am = m.op(x, a).matrix();
      const double t = m.op(x, a).trace();
      den += (am * am).trace().real() - t * t / d;
    }
  }
  if (den <= 1e-14) {
    throw ZeroDenominator("dual ansatz: every element is proportional to the identity");
  }
  DualCertificate c;
  c.lambda = lr.lambda;
  const HermitianOperator id = HermitianOperator::identity(d);
  c.x.resize(m.k());
  for (int x = 0; x < m.k(); ++x) {
    for (int a = 0; a < m.outcomes(x); ++a) {
      c.x[x].push_back((id * (lr.lambda / m.k()) - m.op(x, a)) * (1.0 / den));
    }
  }
  try {
    dual_residuals(m, c);
  } catch (const BudgetExceeded&) {
    // sum_x X_{j_x|x} = (lambda 1 - S_j) / den, so its minimum over j is
    // (lambda - max_j ||S_j||) / den = 0.
    c.min_tuple_eigenvalue = 0.0;
    c.tuple_residual_from_lambda = true;
  }
  return c;
}

ParentPOVM parent_guess(const MeasurementSet& m, double tie_tol,
                        const LambdaOptions& opts) {
  LambdaOptions lo = opts;
  lo.tie_tol = tie_tol;
  return parent_guess(m, compute_lambda(m, lo), tie_tol);
}

ParentPOVM parent_guess(const MeasurementSet& m, const LambdaResult& lr,
                        double tie_tol) {
  std::map<Tuple, HermitianOperator> elements;
  for (const Tuple& j : lr.argmax_tuples) {
    HermitianOperator s = HermitianOperator::zero(m.dim());
    for (int x = 0; x < m.k(); ++x) s += m.op(x, j[x]);
    elements.emplace(j, max_eigenspace_projector(s, tie_tol));
  }
  ParentPOVM g = normalize(std::move(elements), m);
  if (g.completeness_deviation > 1e-6) {
    std::ostringstream os;
    os << "educated guess does not sum to a multiple of the identity "
          "(deviation "
       << g.completeness_deviation << ")";
    throw InvalidParent(os.str());
  }
  return g;
}

ParentCheck check_parent(const ParentPOVM& g, const MeasurementSet& m) {
  const int d = m.dim();
  if (g.dim != d || static_cast<int>(g.arity.size()) != m.k()) {
    throw InvalidInput("check_parent: parent and measurement shapes differ");
  }
  ParentCheck out;
  std::vector<std::vector<Matrix>> marg(m.k());
  for (int x = 0; x < m.k(); ++x) {
    marg[x].assign(m.outcomes(x), Matrix::Zero(d, d));
  }
  out.min_eigenvalue = std::numeric_limits<double>::infinity();
  for (const auto& [j, gj] : g.elements) {
    for (int x = 0; x < m.k(); ++x) marg[x][j[x]] += gj.matrix();
    out.min_eigenvalue = std::min(out.min_eigenvalue, min_eigenvalue(gj));
  }
  if (g.elements.empty()) out.min_eigenvalue = 0.0;

  double num = 0.0, den = 0.0;
  double eta_lo = std::numeric_limits<double>::infinity();
  double eta_hi = -eta_lo;
  for (int x = 0; x < m.k(); ++x) {
    for (int a = 0; a < m.outcomes(x); ++a) {
      const Matrix n = noise_part(m.op(x, a));
      const Matrix u = m.op(x, a).matrix() - n;
      const Matrix v = marg[x][a] - n;
      const double uv = (u.adjoint() * v).trace().real();
      const double uu = u.squaredNorm();
      num += uv;
      den += uu;
      if (uu > 1e-14) {
        eta_lo = std::min(eta_lo, uv / uu);
        eta_hi = std::max(eta_hi, uv / uu);
      }
    }
  }
  out.eta = den > 1e-14 ? num / den : 1.0;
  for (int x = 0; x < m.k(); ++x) {
    for (int a = 0; a < m.outcomes(x); ++a) {
      const Matrix n = noise_part(m.op(x, a));
      const Matrix expect = out.eta * m.op(x, a).matrix() + (1.0 - out.eta) * n;
      out.max_residual =
          std::max(out.max_residual, max_abs_entry(marg[x][a] - expect));
    }
  }

  std::ostringstream diag;
  if (out.max_residual > g.tolerance) {
    diag << "marginal residual " << out.max_residual << " exceeds "
         << g.tolerance;
    if (eta_hi - eta_lo > g.tolerance) {
      diag << "; per-outcome eta ranges over [" << eta_lo << ", " << eta_hi
           << "]";
    }
    diag << ". ";
  }
  if (out.eta < -1e-9 || out.eta > 1.0 + 1e-9) {
    diag << "fitted eta " << out.eta << " outside [0, 1]. ";
  }
  if (out.min_eigenvalue < -kPsdTol) {
    diag << "element with eigenvalue " << out.min_eigenvalue << ". ";
  }
  if (g.completeness_deviation > 1e-8) {
    diag << "elements sum to identity only within "
         << g.completeness_deviation << ". ";
  }
  out.diagnostic = diag.str();
  out.ok = out.diagnostic.empty();
  return out;
}

ParentPOVM parent_sequence(const MeasurementSet& m, int n,
                           std::uint64_t tuple_budget) {
  if (n < 1) throw InvalidInput("parent_sequence: n must be at least 1");
  checked_tuple_count(m, tuple_budget, "parent_sequence");
  const double lambda = compute_lambda(m).lambda;
  const std::vector<int> ar = arity_of(m);
  std::map<Tuple, HermitianOperator> elements;
  Tuple j(m.k(), 0);
  do {
    Matrix s = Matrix::Zero(m.dim(), m.dim());
    for (int x = 0; x < m.k(); ++x) s += m.op(x, j[x]).matrix();
    elements.emplace(j, HermitianOperator(matrix_power(s / lambda, n)));
  } while (next_tuple(j, ar));
  ParentPOVM g = normalize(std::move(elements), m);
  g.tolerance = n >= 32 ? 1e-6 : kParentTol;
  return g;
}

double parent_sequence_eta(int n, int k, int d) {
  const double K = k, D = d, q = k - 1;
  switch (n) {
    case 1:
      return 1.0 / K;
    case 2:
      return (D + 2 * q) / (K * (D + q));
    case 3:
      return (D * D + 5 * q * D + 3 * q * (K - 2)) /
             (K * (D * D + 3 * q * D + q * (K - 2)));
    case 4:
      return (D * D * D + 9 * q * D * D + 2 * q * (7 * K - 13) * D +
              4 * q * (K - 2) * (K - 3)) /
             (K * (D * D * D + 6 * q * D * D + q * (6 * K - 11) * D +
                   q * (K - 2) * (K - 3)));
    default:
      throw InvalidInput("parent_sequence_eta: closed forms exist for n = 1..4");
  }
}

ParentPOVM lower_bound_parent(const MeasurementSet& mubs,
                              const std::vector<double>& alphas,
                              std::uint64_t tuple_budget) {
  const int k = mubs.k(), d = mubs.dim();
  if (!mubs.rank_one_projective() || !pairwise_unbiased(mubs, 1e-9)) {
    throw InvalidInput("lower_bound_parent: bases are not pairwise unbiased");
  }
  if (static_cast<int>(alphas.size()) != k - 1) {
    throw InvalidInput("lower_bound_parent: need k - 1 coefficients");
  }
  for (double a : alphas) {
    if (!(a > 0.0)) throw InvalidInput("lower_bound_parent: coefficients must be positive");
  }
  checked_tuple_count(mubs, tuple_budget, "lower_bound_parent");
  const auto& b = *mubs.bases();
  const double rd = std::sqrt(static_cast<double>(d));
  const std::vector<int> ar = arity_of(mubs);
  std::map<Tuple, HermitianOperator> elements;
  Tuple j(k, 0);
  do {
    Matrix g = Matrix::Zero(d, d);
    for (int y = 0; y < k; ++y) {
      Vector v = b[y].col(j[y]);
      for (int t = 1; t < k; ++t) {
        const int x = (y + t) % k;
        const auto bx = b[x].col(j[x]);
        v += (alphas[t - 1] * rd * bx.dot(v)) * bx;
      }
      g += v * v.adjoint();
    }
    elements.emplace(j, HermitianOperator(g));
  } while (next_tuple(j, ar));
  return normalize(std::move(elements), mubs);
}

bool jointly_measurable_at(const MeasurementSet& m, double eta,
                           const RobustnessOptions& opts) {
  // sum delta G_j - s N = A^eta. Feasible for every eta once s is large,
  // and the set is jointly measurable at eta iff the minimum s is 0.
  std::vector<std::vector<Matrix>> target(m.k()), kcoef(m.k());
  for (int x = 0; x < m.k(); ++x) {
    for (int a = 0; a < m.outcomes(x); ++a) {
      const Matrix n = noise_part(m.op(x, a));
      target[x].push_back(eta * m.op(x, a).matrix() + (1.0 - eta) * n);
      kcoef[x].push_back(-n);
    }
  }
  const SdpProblem p = build_marginal_problem(m, target, kcoef, 1.0,
                                              opts.block_budget, "generic");
  const SdpSolution s = solve_sdp(p, opts.feasibility_sdp);
  return s.primal_value <= 1e-7;
}

RobustnessReport robustness(const MeasurementSet& m,
                            const RobustnessOptions& opts) {
  const auto t_start = Clock::now();
  RobustnessReport r;
  r.d = m.dim();
  r.k = m.k();
  r.tolerances = {{"tie_tol", opts.lambda.tie_tol},
                  {"gap_tol", opts.sdp.gap_tol},
                  {"parent_tol", kParentTol},
                  {"certificate_match_tol", 1e-7}};
  r.lower = lower_estimate(m);

  std::optional<LambdaResult> lr;
  {
    const auto t0 = Clock::now();
    try {
      lr = compute_lambda(m, opts.lambda);
      r.lambda = lr->lambda;
      r.upper = std::min(1.0, eta_up_value(m, lr->lambda));
    } catch (const BudgetExceeded&) {
      if (m.rank_one_projective() && pairwise_unbiased(m, 1e-9)) {
        r.upper = eta_up_simple(m.k(), m.dim()).value;
      }
      r.note += "lambda scan over budget; ";
    }
    r.timings["lambda"] = seconds_since(t0);
  }

  if (opts.try_certificate && lr) {
    const auto t0 = Clock::now();
    try {
      const ParentPOVM g = parent_guess(m, *lr, opts.lambda.tie_tol);
      const ParentCheck pc = check_parent(g, m);
      r.parent = pc;
      if (pc.ok) {
        r.lower = std::max(r.lower, pc.eta);
        if (std::abs(pc.eta - r.upper) <= 1e-7) {
          DualCertificate c = dual_ansatz(m, *lr);
          r.certificate = c;
          if (c.feasible()) {
            r.eta = r.upper;
            r.method = "certificate";
            r.gap = pc.eta - c.value;
          }
        }
      }
    } catch (const InvalidParent& e) {
      r.note += std::string("parent guess rejected: ") + e.what() + "; ";
    }
    r.timings["certificate"] = seconds_since(t0);
  }

  if (!r.eta && opts.allow_sdp && m.tuple_count() <= opts.block_budget) {
    const auto t0 = Clock::now();
    const SdpProblem p = build_primal(m, opts.block_budget);
    const SdpSolution s = solve_sdp(p, opts.sdp);
    r.sdp_status = s.status;
    r.sdp_iterations = s.iterations;
    if (s.status == SdpStatus::kOptimal) {
      r.eta = eta_primal(s);
      r.gap = s.gap;
      r.method = "sdp";
    } else {
      double lo = r.lower, hi = r.upper;
      while (hi - lo > opts.bisection_tol) {
        const double mid = 0.5 * (lo + hi);
        (jointly_measurable_at(m, mid, opts) ? lo : hi) = mid;
      }
      r.eta = 0.5 * (lo + hi);
      r.gap = hi - lo;
      r.method = "sdp-bisection";
    }
    if (*r.eta > r.upper + 1e-6 || *r.eta < r.lower - 1e-6) {
      r.note += "solver value falls outside the analytic bracket; ";
    }
    r.timings["sdp"] = seconds_since(t0);
  }

  if (!r.eta) {
    r.method = "bounds-only";
    if (m.tuple_count() > opts.block_budget) {
      r.note += "SDP over block budget; ";
    }
  }
  r.timings["total"] = seconds_since(t_start);
  return r;
}

std::string to_json(const RobustnessReport& r, bool with_timings) {
  using detail::sig12;
  nlohmann::ordered_json j;
  j["d"] = r.d;
  j["k"] = r.k;
  j["eta"] = r.eta ? nlohmann::ordered_json(sig12(*r.eta)) : nullptr;
  j["method"] = r.method;
  j["lower"] = sig12(r.lower);
  j["upper"] = sig12(r.upper);
  j["gap"] = r.gap ? nlohmann::ordered_json(sig12(*r.gap)) : nullptr;
  if (r.lambda) j["lambda"] = sig12(*r.lambda);
  if (r.certificate) {
    const DualCertificate& c = *r.certificate;
    j["certificate"] = {
        {"lambda", sig12(c.lambda)},
        {"value", sig12(c.value)},
        {"residuals",
         {{"scalar", sig12(c.scalar_residual)},
          {"min_tuple_eigenvalue", sig12(c.min_tuple_eigenvalue)},
          {"tuple_residual_from_lambda", c.tuple_residual_from_lambda}}}};
  }
  if (r.parent) {
    j["parent"] = {{"ok", r.parent->ok},
                   {"eta", sig12(r.parent->eta)},
                   {"max_residual", sig12(r.parent->max_residual)}};
  }
  if (r.sdp_status) {
    j["sdp"] = {{"status", to_string(*r.sdp_status)},
                {"iterations", r.sdp_iterations}};
  }
  nlohmann::ordered_json tol = nlohmann::ordered_json::object();
  for (const auto& [k, v] : r.tolerances) tol[k] = v;
  j["tolerances"] = tol;
  if (!r.note.empty()) j["note"] = r.note;
  if (with_timings) {
    nlohmann::ordered_json t = nlohmann::ordered_json::object();
    for (const auto& [k, v] : r.timings) t[k] = sig12(v);
    j["timings"] = t;
  }
  return j.dump();
}

}  // namespace incompat
