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

#include "incompat/bounds.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <set>
#include <thread>

#include "incompat/error.hpp"
#include "json_util.hpp"

namespace incompat {

namespace {

// Evaluates ||S_j|| either through the k x k Gram matrix of the rank-one
// vectors (same nonzero spectrum as S_j) or directly on S_j.
class TupleEvaluator {
 public:
  explicit TupleEvaluator(const MeasurementSet& m) : m_(m), k_(m.k()) {
    if (m.rank_one_projective() && m.bases()) {
      const auto& b = *m.bases();
      overlaps_.resize(k_ * k_);
      for (int x = 0; x < k_; ++x) {
        for (int y = x + 1; y < k_; ++y) {
          overlaps_[x * k_ + y] = b[x].adjoint() * b[y];
        }
      }
      gram_ = true;
    }
  }

  double operator()(const Tuple& j) const {
    if (gram_) {
      if (k_ == 1) return 1.0;
      if (k_ == 2) return 1.0 + std::abs(overlaps_[1](j[0], j[1]));
      Matrix g(k_, k_);
      for (int x = 0; x < k_; ++x) {
        g(x, x) = 1.0;
        for (int y = x + 1; y < k_; ++y) {
          g(x, y) = overlaps_[x * k_ + y](j[x], j[y]);
          g(y, x) = std::conj(g(x, y));
        }
      }
      solver_.compute(g, Eigen::EigenvaluesOnly);
      return solver_.eigenvalues()(k_ - 1);
    }
    Matrix s = Matrix::Zero(m_.dim(), m_.dim());
    for (int x = 0; x < k_; ++x) s += m_.op(x, j[x]).matrix();
    const Eigen::VectorXd v = eigvalsh(s);
    return std::max(std::abs(v(0)), std::abs(v(v.size() - 1)));
  }

 private:
  const MeasurementSet& m_;
  int k_;
  bool gram_ = false;
  std::vector<Matrix> overlaps_;
  mutable Eigen::SelfAdjointEigenSolver<Matrix> solver_;
};

// Number of leading axes that the symmetries let us pin to outcome 0.
int pinned_axes(const MeasurementSet& m) {
  const auto& sym = m.symmetries();
  if (sym.empty()) return 0;
  if (m.k() >= 2) {
    std::set<std::pair<int, int>> orbit;
    for (const auto& s : sym) orbit.insert({s.perms[0][0], s.perms[1][0]});
    if (static_cast<int>(orbit.size()) == m.outcomes(0) * m.outcomes(1)) {
      return 2;
    }
  }
  std::set<int> orbit;
  for (const auto& s : sym) orbit.insert(s.perms[0][0]);
  return static_cast<int>(orbit.size()) == m.outcomes(0) ? 1 : 0;
}

struct Partial {
  double best = -1.0;
  std::vector<std::pair<double, Tuple>> near;
};

void prune(Partial& p, double tie_tol) {
  std::erase_if(p.near, [&](const auto& e) { return e.first < p.best - tie_tol; });
}

}  // namespace

double tuple_norm(const MeasurementSet& m, const Tuple& j) {
  if (static_cast<int>(j.size()) != m.k()) {
    throw InvalidInput("tuple length does not match k");
  }
  return TupleEvaluator(m)(j);
}

LambdaResult compute_lambda(const MeasurementSet& m, const LambdaOptions& opts) {
  const int k = m.k();
  int pinned = 0;
  if (opts.mode != LambdaMode::kExhaustive) pinned = pinned_axes(m);
  if (opts.mode == LambdaMode::kSymmetry && pinned == 0) {
    throw InvalidInput("measurement set carries no usable outcome symmetry");
  }
  // Free axes are pinned..k-1; enumerate them in mixed radix, last fastest.
  std::uint64_t total = 1;
  bool overflow = false;
  for (int x = pinned; x < k; ++x) {
    if (total > opts.budget * 64 + 1) overflow = true;
    total *= static_cast<std::uint64_t>(m.outcomes(x));
  }
  LambdaResult res;
  std::uint64_t count = total;
  if (overflow || total > opts.budget) {
    if (!opts.allow_truncation) {
      throw BudgetExceeded("lambda enumeration needs " +
                           (overflow ? std::string("more than ") +
                                           std::to_string(opts.budget)
                                     : std::to_string(total)) +
                           " tuples; budget is " + std::to_string(opts.budget));
    }
    count = opts.budget;
    res.certifying = false;
  }

  auto decode = [&](std::uint64_t t) {
    Tuple j(k, 0);
    for (int x = k - 1; x >= pinned; --x) {
      j[x] = static_cast<int>(t % m.outcomes(x));
      t /= m.outcomes(x);
    }
    return j;
  };
  auto scan = [&](std::uint64_t lo, std::uint64_t hi, Partial& p) {
    const TupleEvaluator eval(m);  // one per thread: it owns a workspace
    for (std::uint64_t t = lo; t < hi; ++t) {
      Tuple j = decode(t);
      const double v = eval(j);
      if (v > p.best) p.best = v;
      if (v >= p.best - opts.tie_tol) p.near.emplace_back(v, std::move(j));
      if (p.near.size() > 4096) prune(p, opts.tie_tol);
    }
    prune(p, opts.tie_tol);
  };

  const int jobs = std::max(1, std::min<int>(opts.jobs, static_cast<int>(
                                                            std::max<std::uint64_t>(1, count / 1024))));
  std::vector<Partial> parts(jobs);
  if (jobs == 1) {
    scan(0, count, parts[0]);
  } else {
    std::vector<std::thread> threads;
    for (int w = 0; w < jobs; ++w) {
      const std::uint64_t lo = count * w / jobs;
      const std::uint64_t hi = count * (w + 1) / jobs;
      threads.emplace_back([&, lo, hi, w] { scan(lo, hi, parts[w]); });
    }
    for (auto& t : threads) t.join();
  }
  Partial merged;
  for (auto& p : parts) {
    merged.best = std::max(merged.best, p.best);
    for (auto& e : p.near) merged.near.push_back(std::move(e));
  }
  prune(merged, opts.tie_tol);

  res.lambda = merged.best;
  res.tuples_scanned = count;
  std::set<Tuple> argmax;
  for (auto& [v, j] : merged.near) {
    if (pinned == 0) {
      argmax.insert(j);
      continue;
    }
    for (const auto& s : m.symmetries()) {
      Tuple image(k);
      for (int x = 0; x < k; ++x) image[x] = s.perms[x][j[x]];
      argmax.insert(std::move(image));
    }
  }
  res.argmax_tuples.assign(argmax.begin(), argmax.end());
  res.method = !res.certifying ? "budget-truncated"
               : pinned > 0    ? "symmetry-reduced"
                               : "exhaustive";
  return res;
}

std::string to_json(const BoundReport& r) {
  nlohmann::json j;
  j["kind"] = r.kind;
  j["value"] = detail::sig12(r.value);
  j["d"] = r.d;
  j["k"] = r.k;
  if (r.lambda) j["lambda"] = detail::sig12(*r.lambda);
  if (!r.alphas.empty()) {
    nlohmann::json a = nlohmann::json::array();
    for (double v : r.alphas) a.push_back(detail::sig12(v));
    j["alphas"] = a;
  }
  j["tuples_scanned"] = r.tuples_scanned;
  j["certifying"] = r.certifying;
  j["tolerances"] = detail::tolerances_json(r.tolerances);
  if (!r.note.empty()) j["note"] = r.note;
  return j.dump();
}

BoundReport eta_up_general(const MeasurementSet& m, const LambdaOptions& opts) {
  const int d = m.dim();
  double mean_sq = 0.0;
  double denom = 0.0;
  for (const auto& row : m.ops()) {
    for (const auto& a : row) {
      const double t = a.trace() / d;
      mean_sq += t * t;
      denom += a.matrix().squaredNorm() / d - t * t;
    }
  }
  if (denom <= 1e-14) {
    throw ZeroDenominator(
        "every measurement element is proportional to the identity; the "
        "robustness is undefined");
  }
  const LambdaResult lr = compute_lambda(m, opts);
  BoundReport r;
  r.kind = "upper_general";
  r.value = (lr.lambda - mean_sq) / denom;
  r.d = d;
  r.k = m.k();
  r.lambda = lr.lambda;
  r.tuples_scanned = lr.tuples_scanned;
  r.certifying = lr.certifying;
  r.tolerances = {{"tie_tol", opts.tie_tol}};
  r.note = lr.method;
  return r;
}

double eta_up_from_lambda(double lambda, int k, int d) {
  const double kd = static_cast<double>(k) / d;
  return (lambda - kd) / (k - kd);
}

BoundReport eta_up_rank1(const MeasurementSet& m, const LambdaOptions& opts) {
  if (!m.rank_one_projective()) {
    throw InvalidInput("eta_up_rank1 requires rank-one projective measurements");
  }
  const LambdaResult lr = compute_lambda(m, opts);
  BoundReport r;
  r.kind = "upper_rank1";
  r.d = m.dim();
  r.k = m.k();
  r.value = eta_up_from_lambda(lr.lambda, r.k, r.d);
  r.lambda = lr.lambda;
  r.tuples_scanned = lr.tuples_scanned;
  r.certifying = lr.certifying;
  r.tolerances = {{"tie_tol", opts.tie_tol}};
  r.note = lr.method;
  return r;
}

BoundReport eta_up_simple(int k, int d) {
  if (k < 1 || d < 2) throw InvalidInput("eta_up_simple needs k >= 1, d >= 2");
  const double sd = std::sqrt(static_cast<double>(d));
  BoundReport r;
  r.kind = "upper_simple";
  r.d = d;
  r.k = k;
  r.value = (sd / k + 1.0) / (sd + 1.0);
  r.lambda = 1.0 + (k - 1) / sd;
  return r;
}

NewtonTraces newton_closed_forms(int k, int d, double s3, double s4,
                                 CharpolyVariant variant) {
  const double q = static_cast<double>(k - 1) / d;
  NewtonTraces t;
  t.tr1 = k;
  t.tr2 = k * (q + 1.0);
  t.tr3 = k * (3.0 * q + 1.0) + s3;
  if (variant == CharpolyVariant::kPublished) {
    t.tr4 = k * (6.0 * q + 1.0 + q * q) + 4.0 * s3 + s4;
  } else {
    t.tr4 = k + 6.0 * k * q +
            static_cast<double>(k) * (k - 1) * (2 * k - 3) / (double(d) * d) +
            4.0 * s3 + s4;
  }
  t.sigma3 = s3;
  t.sigma4 = s4;
  return t;
}

std::vector<double> charpoly_k4(int d, double sigma3, double sigma4,
                                CharpolyVariant variant) {
  const NewtonTraces p = newton_closed_forms(4, d, sigma3, sigma4, variant);
  const double e1 = p.tr1;
  const double e2 = (e1 * p.tr1 - p.tr2) / 2.0;
  const double e3 = (e2 * p.tr1 - e1 * p.tr2 + p.tr3) / 3.0;
  const double e4 = (e3 * p.tr1 - e2 * p.tr2 + e1 * p.tr3 - p.tr4) / 4.0;
  return {1.0, -e1, e2, -e3, e4};
}

BoundReport eta_up_charpoly_k4(int d, CharpolyVariant variant) {
  if (d < 5) throw InvalidInput("eta_up_charpoly_k4 needs d >= 5");
  const double s3 = 24.0 / std::pow(d, 1.5);
  const double s4 = 24.0 / (double(d) * d);
  const std::vector<double> c = charpoly_k4(d, s3, s4, variant);
  const std::vector<double> roots = real_poly_roots(c);
  if (roots.empty()) throw NumericalFailure("quartic has no real root");
  BoundReport r;
  r.kind = "upper_charpoly_k4";
  r.d = d;
  r.k = 4;
  r.lambda = roots.back();
  r.value = eta_up_from_lambda(roots.back(), 4, d);
  r.tolerances = {{"sigma3", s3}, {"sigma4", s4}};
  if (variant == CharpolyVariant::kPublished) {
    r.certifying = false;
    r.note =
        "published quartic; its fourth power-sum term differs from the exact "
        "one, so the value is not a certified bound";
  } else {
    r.note = "exact quartic";
  }
  return r;
}

NewtonTraces newton_traces(const MeasurementSet& m, const Tuple& j) {
  if (!m.rank_one_projective() || !m.bases()) {
    throw InvalidInput("newton_traces requires rank-one projective input");
  }
  const int k = m.k();
  if (static_cast<int>(j.size()) != k) {
    throw InvalidInput("tuple length does not match k");
  }
  const auto& b = *m.bases();
  Matrix g(k, k);
  for (int x = 0; x < k; ++x) {
    for (int y = 0; y < k; ++y) g(x, y) = b[x].col(j[x]).dot(b[y].col(j[y]));
  }
  // tr S^n = tr G^n for S = V V^dagger, G = V^dagger V.
  NewtonTraces t;
  Matrix s = Matrix::Zero(m.dim(), m.dim());
  for (int x = 0; x < k; ++x) s += m.op(x, j[x]).matrix();
  const Matrix s2 = s * s;
  t.tr1 = s.trace().real();
  t.tr2 = s2.trace().real();
  t.tr3 = (s2 * s).trace().real();
  t.tr4 = (s2 * s2).trace().real();
  Complex s3 = 0.0, s4 = 0.0;
  for (int a = 0; a < k; ++a) {
    for (int bb = 0; bb < k; ++bb) {
      if (bb == a) continue;
      for (int c = 0; c < k; ++c) {
        if (c == a || c == bb) continue;
        s3 += g(a, bb) * g(bb, c) * g(c, a);
        for (int e = 0; e < k; ++e) {
          if (e == a || e == bb || e == c) continue;
          s4 += g(a, bb) * g(bb, c) * g(c, e) * g(e, a);
        }
      }
    }
  }
  t.sigma3 = s3;
  t.sigma4 = s4;
  return t;
}

double eta_low_step(double eta_prev, int k, int d, double alpha) {
  const double sd = std::sqrt(static_cast<double>(d));
  const double num = (2 * alpha * sd + d) * (k - 1) * eta_prev +
                     (2 * alpha * sd + alpha * alpha * d);
  const double den = k * (2 * alpha * sd + (alpha * alpha + 1) * d);
  return num / den;
}

double alpha3_closed_form(int d) {
  const double sd = std::sqrt(static_cast<double>(d));
  return (std::sqrt(5.0 * d + 12.0 * sd + 8.0) - sd) / (2.0 * (sd + 2.0));
}

BoundReport eta_low_recursive(int k, int d) {
  if (k < 1 || d < 2) throw InvalidInput("eta_low_recursive needs k >= 1, d >= 2");
  BoundReport r;
  r.kind = "lower_recursive";
  r.d = d;
  r.k = k;
  r.tolerances = {{"alpha_lo", 0.0}, {"alpha_hi", 10.0}, {"golden_tol", 1e-12}};
  double eta = 1.0;
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int stage = 2; stage <= k; ++stage) {
    auto f = [&](double a) { return eta_low_step(eta, stage, d, a); };
    double lo = 0.0, hi = 10.0;
    double x1 = hi - inv_phi * (hi - lo), x2 = lo + inv_phi * (hi - lo);
    double f1 = f(x1), f2 = f(x2);
    while (hi - lo > 1e-12) {
      if (f1 < f2) {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + inv_phi * (hi - lo);
        f2 = f(x2);
      } else {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - inv_phi * (hi - lo);
        f1 = f(x1);
      }
    }
    double alpha = 0.5 * (lo + hi);
    // The objective is flat to O(eps) within sqrt(eps) of the optimum, so
    // finish on the stationarity condition, a quadratic in alpha.
    const double sd = std::sqrt(static_cast<double>(d));
    const double c2 = d, c1 = 2 * sd * ((stage - 1) * eta + 1),
                 c0 = double(d) * (stage - 1) * eta;
    const double e2 = double(stage) * d, e1 = 2.0 * stage * sd,
                 e0 = double(stage) * d;
    const double qa = c2 * e1 - c1 * e2, qb = 2 * (c2 * e0 - c0 * e2),
                 qc = c1 * e0 - c0 * e1;
    const double disc = qb * qb - 4 * qa * qc;
    if (std::abs(qa) > 1e-300 && disc >= 0) {
      for (double root : {(-qb + std::sqrt(disc)) / (2 * qa),
                          (-qb - std::sqrt(disc)) / (2 * qa)}) {
        if (root > 0 && root <= 10 && std::abs(root - alpha) < 1e-5 &&
            f(root) >= f(alpha) - 1e-15) {
          alpha = root;
        }
      }
    }
    r.alphas.push_back(alpha);
    eta = f(alpha);
  }
  r.value = eta;
  return r;
}

}  // namespace incompat
