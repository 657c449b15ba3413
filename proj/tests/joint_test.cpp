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

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "incompat/error.hpp"
#include "incompat/mub.hpp"

namespace incompat {
namespace {

const double kPi = std::acos(-1.0);

std::vector<int> first(int k) {
  std::vector<int> v(k);
  std::iota(v.begin(), v.end(), 0);
  return v;
}

const MubSet& mubs(int d) {
  static std::map<int, MubSet> cache;
  auto it = cache.find(d);
  if (it == cache.end()) {
    it = cache.emplace(d, d == 2 ? pauli_triple() : build_mub(d)).first;
  }
  return it->second;
}

MeasurementSet subset(int d, const std::vector<int>& s) {
  return to_measurements(mubs(d), s);
}

double solve_eta(const MeasurementSet& m) {
  const SdpSolution s = solve_sdp(build_primal(m));
  EXPECT_EQ(s.status, SdpStatus::kOptimal);
  return eta_primal(s);
}

TEST(BuildPrimal, Shapes) {
  const SdpProblem p22 = build_primal(subset(2, first(2)));
  ASSERT_EQ(p22.block_dims.size(), 5u);
  for (int b = 0; b < 4; ++b) EXPECT_EQ(p22.block_dims[b], 2);
  EXPECT_EQ(p22.block_dims[4], 1);
  EXPECT_EQ(p22.provenance, "primal-robustness");

  const SdpProblem p33 = build_primal(subset(3, first(3)));
  EXPECT_EQ(p33.block_dims.size(), 28u);
  EXPECT_EQ(p33.block_dims[26], 3);
  // k d d^2 real equations less the (k - 1) d^2 implied by completeness.
  EXPECT_EQ(p33.constraints.size(), 9u * (3 * 3 - 2));
}

TEST(BuildPrimal, BudgetExceeded) {
  EXPECT_THROW(build_primal(subset(5, first(6))), BudgetExceeded);
  EXPECT_THROW(build_dual(subset(3, first(4)), 80), BudgetExceeded);
  EXPECT_NO_THROW(build_dual(subset(3, first(4)), 81));
}

TEST(SolveRobustness, SingleMeasurementIsCompatible) {
  EXPECT_NEAR(solve_eta(subset(3, {1})), 1.0, 1e-7);
}

TEST(SolveRobustness, PauliValues) {
  EXPECT_NEAR(solve_eta(subset(2, first(2))), 1 / std::sqrt(2.0), 1e-7);
  EXPECT_NEAR(solve_eta(subset(2, first(3))), 0.57735, 1e-6);
}

TEST(SolveRobustness, DualBuilderAgrees) {
  const MeasurementSet m = subset(2, first(2));
  const SdpProblem p = build_dual(m);
  const SdpSolution s = solve_sdp(p);
  ASSERT_EQ(s.status, SdpStatus::kOptimal);
  EXPECT_NEAR(eta_dual(s), 1 / std::sqrt(2.0), 1e-7);
  EXPECT_NEAR(eta_primal(s), 1 / std::sqrt(2.0), 1e-7);
}

TEST(SolveRobustness, TableValues) {
  EXPECT_NEAR(solve_eta(subset(4, first(3))), 0.5469, 5e-4);
  EXPECT_NEAR(solve_eta(subset(5, first(4))), 0.4615, 5e-4);
  EXPECT_NEAR(solve_eta(subset(3, first(3))), std::cos(kPi / 18) / std::sqrt(3.0),
              1e-7);
}

TEST(SolveRobustness, DualOperatorsAreFeasibleCertificates) {
  for (const auto& [d, k] : {std::pair{2, 3}, {3, 3}, {4, 3}}) {
    const MeasurementSet m = subset(d, first(k));
    for (const SdpProblem& p : {build_primal(m), build_dual(m)}) {
      const SdpSolution s = solve_sdp(p);
      DualCertificate c;
      c.x = dual_operators(m, p, s);
      dual_residuals(m, c);
      EXPECT_GE(c.scalar_residual, -1e-7);
      EXPECT_GE(c.min_tuple_eigenvalue, -1e-7);
      EXPECT_NEAR(c.value, eta_dual(s), 1e-9);
      EXPECT_LE(eta_primal(s), c.value + 1e-8);
    }
  }
}

TEST(DualResiduals, ScaledIdentityIsStrictlyFeasible) {
  const MeasurementSet m = subset(3, first(3));
  DualCertificate c;
  const double mu = 0.3;
  c.x.assign(3, std::vector<HermitianOperator>(
                    3, HermitianOperator::identity(3) * mu));
  dual_residuals(m, c);
  EXPECT_NEAR(c.min_tuple_eigenvalue, 3 * mu, 1e-12);
  EXPECT_NEAR(c.scalar_residual, 1.0, 1e-12);
}

TEST(DualAnsatz, SaturatesScalarConstraint) {
  for (int d : {2, 3, 4, 5}) {
    for (int k = 2; k <= std::min(d + 1, 4); ++k) {
      const MeasurementSet m = subset(d, first(k));
      const DualCertificate c = dual_ansatz(m);
      EXPECT_NEAR(c.scalar_residual, 0.0, 1e-10);
      EXPECT_GE(c.min_tuple_eigenvalue, -1e-9);
      EXPECT_FALSE(c.tuple_residual_from_lambda);
      EXPECT_NEAR(c.value, eta_up_general(m).value, 1e-12);
    }
  }
  EXPECT_NEAR(dual_ansatz(subset(5, first(2))).value, (3 + std::sqrt(5.0)) / 8,
              1e-12);
}

TEST(DualAnsatz, NoisyInputs) {
  const MeasurementSet m = subset(3, first(3)).noisy(0.7);
  const DualCertificate c = dual_ansatz(m);
  EXPECT_TRUE(c.feasible());
  EXPECT_NEAR(c.value, eta_up_general(m).value, 1e-12);
}

TEST(ParentGuess, PauliPair) {
  const MeasurementSet m = subset(2, first(2));
  const ParentPOVM g = parent_guess(m);
  EXPECT_EQ(g.elements.size(), 4u);
  for (const auto& [j, e] : g.elements) {
    const Matrix p = e.matrix() * g.normalization;
    EXPECT_LE((p * p - p).cwiseAbs().maxCoeff(), 1e-9);
    EXPECT_NEAR(p.trace().real(), 1.0, 1e-9);
  }
  const ParentCheck c = check_parent(g, m);
  EXPECT_TRUE(c.ok) << c.diagnostic;
  EXPECT_NEAR(c.eta, 1 / std::sqrt(2.0), 1e-12);
}

TEST(ParentGuess, ElementsAreProjectorsBeforeNormalization) {
  for (int d : {3, 4, 5}) {
    const ParentPOVM g = parent_guess(subset(d, first(d)));
    for (const auto& [j, e] : g.elements) {
      const Matrix p = e.matrix() * g.normalization;
      EXPECT_LE((p * p - p).cwiseAbs().maxCoeff(), 1e-9);
    }
  }
}

TEST(ParentGuess, CompleteSetInDimensionThree) {
  const MeasurementSet m = subset(3, first(4));
  const ParentCheck c = check_parent(parent_guess(m), m);
  EXPECT_TRUE(c.ok) << c.diagnostic;
  EXPECT_NEAR(c.eta, (1 + 3 * std::sqrt(5.0)) / 16, 1e-12);
}

TEST(ParentGuess, TightnessForKEqualDAndDPlusOne) {
  for (int d : {2, 3, 4, 5}) {
    for (int k : {d, d + 1}) {
      if (d == 2 && k == 3) continue;  // covered by the Pauli triple below
      const MeasurementSet m = subset(d, first(k));
      const ParentCheck c = check_parent(parent_guess(m), m);
      EXPECT_TRUE(c.ok) << d << "," << k << ": " << c.diagnostic;
      EXPECT_NEAR(c.eta, eta_up_rank1(m).value, 1e-7) << d << "," << k;
    }
  }
  const MeasurementSet pauli = subset(2, first(3));
  const ParentCheck c = check_parent(parent_guess(pauli), pauli);
  EXPECT_TRUE(c.ok);
  EXPECT_NEAR(c.eta, 1 / std::sqrt(3.0), 1e-12);
}

TEST(ParentGuess, FiveDimensionalTriples) {
  // Both classes of triples are certified; in this construction's labeling
  // {0,1,3} carries (1+sqrt5)/6 and {0,1,2} the other value.
  const MeasurementSet a = subset(5, {0, 1, 3});
  const ParentCheck ca = check_parent(parent_guess(a), a);
  EXPECT_TRUE(ca.ok);
  EXPECT_NEAR(ca.eta, (1 + std::sqrt(5.0)) / 6, 1e-9);
  const MeasurementSet b = subset(5, {0, 1, 2});
  const ParentCheck cb = check_parent(parent_guess(b), b);
  EXPECT_TRUE(cb.ok);
  const double s5 = std::sqrt(5.0);
  EXPECT_NEAR(cb.eta, (13 - s5 + std::sqrt(30 * (5 + s5))) / 48, 1e-9);
}

TEST(ParentGuess, NineDimensionalTripleIsNotAParent) {
  const MeasurementSet m = subset(9, {0, 1, 2});
  EXPECT_NEAR(eta_up_rank1(m).value, 0.5, 1e-12);
  ParentCheck c;
  try {
    c = check_parent(parent_guess(m), m);
  } catch (const InvalidParent&) {
    c.ok = false;
  }
  EXPECT_FALSE(c.ok);
  const MeasurementSet other = subset(9, {0, 1, 3});
  const ParentCheck co = check_parent(parent_guess(other), other);
  EXPECT_TRUE(co.ok);
  EXPECT_NEAR(co.eta, (1 + std::cos(kPi / 9)) / 4, 1e-9);
}

TEST(ParentGuess, NonTightSubsetFailsMarginals) {
  const MeasurementSet m = subset(4, first(3));
  ParentCheck c;
  try {
    c = check_parent(parent_guess(m), m);
  } catch (const InvalidParent&) {
    c.ok = false;
  }
  EXPECT_FALSE(c.ok);
}

TEST(CheckParent, WhiteNoiseParentHasZeroEta) {
  const MeasurementSet m = subset(3, first(3));
  ParentPOVM g;
  g.dim = 3;
  g.arity = {3, 3, 3};
  Tuple j(3, 0);
  for (j[0] = 0; j[0] < 3; ++j[0]) {
    for (j[1] = 0; j[1] < 3; ++j[1]) {
      for (j[2] = 0; j[2] < 3; ++j[2]) {
        g.elements.emplace(j, HermitianOperator::identity(3) * (1.0 / 27));
      }
    }
  }
  const ParentCheck c = check_parent(g, m);
  EXPECT_TRUE(c.ok) << c.diagnostic;
  EXPECT_NEAR(c.eta, 0.0, 1e-14);
}

TEST(CheckParent, ReportsInconsistentMarginals) {
  const MeasurementSet m = subset(3, first(2));
  ParentPOVM g = parent_guess(m);
  // Move weight between two elements: marginals no longer match one eta.
  auto it = g.elements.begin();
  const HermitianOperator moved = it->second * 0.5;
  it->second = moved;
  std::next(it)->second += moved;
  const ParentCheck c = check_parent(g, m);
  EXPECT_FALSE(c.ok);
  EXPECT_NE(c.diagnostic.find("marginal residual"), std::string::npos);
}

TEST(CheckParent, ShapeMismatchThrows) {
  const ParentPOVM g = parent_guess(subset(3, first(2)));
  EXPECT_THROW(check_parent(g, subset(3, first(3))), InvalidInput);
}

TEST(ParentSequence, ClosedFormsOnRandomSubsets) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 8; ++trial) {
    const int d = std::uniform_int_distribution<int>(2, 5)(rng);
    const int k = std::uniform_int_distribution<int>(1, std::min(d + 1, 4))(rng);
    std::vector<int> pool = first(d + 1);
    std::shuffle(pool.begin(), pool.end(), rng);
    pool.resize(k);
    const MeasurementSet m = subset(d, pool);
    for (int n = 1; n <= 4; ++n) {
      const ParentCheck c = check_parent(parent_sequence(m, n), m);
      EXPECT_TRUE(c.ok) << c.diagnostic;
      EXPECT_NEAR(c.eta, parent_sequence_eta(n, k, d), 1e-8)
          << d << " " << k << " " << n;
    }
  }
}

TEST(ParentSequence, SpotValues) {
  EXPECT_DOUBLE_EQ(parent_sequence_eta(2, 3, 3), 7.0 / 15.0);
  EXPECT_DOUBLE_EQ(parent_sequence_eta(1, 6, 5), 1.0 / 6.0);
  EXPECT_THROW(parent_sequence_eta(5, 3, 3), InvalidInput);
  EXPECT_THROW(parent_sequence(subset(3, first(2)), 0), InvalidInput);
}

TEST(ParentSequence, SumsAreProportionalToIdentity) {
  for (int d : {2, 3, 4, 5}) {
    for (int k = 1; k <= d + 1; ++k) {
      if (std::pow(d, k) > 4000) break;
      const MeasurementSet m = subset(d, first(k));
      for (int n = 1; n <= 6; ++n) {
        EXPECT_LE(parent_sequence(m, n).completeness_deviation, 1e-8);
      }
    }
  }
}

TEST(ParentSequence, ConvergesToEducatedGuess) {
  const MeasurementSet m = subset(3, first(4));
  const ParentPOVM g = parent_sequence(m, 64);
  EXPECT_EQ(g.tolerance, 1e-6);
  const ParentCheck c = check_parent(g, m);
  EXPECT_TRUE(c.ok) << c.diagnostic;
  EXPECT_NEAR(c.eta, (1 + 3 * std::sqrt(5.0)) / 16, 1e-6);
}

TEST(LowerBoundParent, PairIsTight) {
  const MeasurementSet m = subset(2, first(2));
  const ParentCheck c = check_parent(lower_bound_parent(m, {1.0}), m);
  EXPECT_TRUE(c.ok);
  EXPECT_NEAR(c.eta, 1 / std::sqrt(2.0), 1e-12);
}

TEST(LowerBoundParent, OptimalTripleInDimensionFour) {
  const MeasurementSet m = subset(4, first(3));
  const BoundReport low = eta_low_recursive(3, 4);
  const ParentCheck c = check_parent(lower_bound_parent(m, low.alphas), m);
  EXPECT_TRUE(c.ok);
  EXPECT_NEAR(c.eta, low.value, 1e-8);
  EXPECT_NEAR(c.eta, 0.5263, 1e-4);
}

TEST(LowerBoundParent, MatchesRecursionForArbitraryCoefficients) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.05, 2.0);
  for (const auto& [d, k] : {std::pair{3, 3}, {3, 4}, {4, 4}, {5, 3}, {5, 4}}) {
    std::vector<double> alphas(k - 1);
    for (double& a : alphas) a = u(rng);
    double eta = 1.0;
    for (int t = 2; t <= k; ++t) eta = eta_low_step(eta, t, d, alphas[t - 2]);
    const MeasurementSet m = subset(d, first(k));
    const ParentCheck c = check_parent(lower_bound_parent(m, alphas), m);
    EXPECT_TRUE(c.ok) << c.diagnostic;
    EXPECT_NEAR(c.eta, eta, 1e-8);
  }
  // Vanishing last coefficient.
  const MeasurementSet m = subset(4, first(3));
  const ParentCheck c = check_parent(lower_bound_parent(m, {1.0, 1e-6}), m);
  EXPECT_NEAR(c.eta, eta_low_step(eta_low_step(1.0, 2, 4, 1.0), 3, 4, 1e-6),
              1e-8);
}

TEST(LowerBoundParent, RejectsBadInput) {
  const MeasurementSet m = subset(3, first(3));
  EXPECT_THROW(lower_bound_parent(m, {1.0}), InvalidInput);
  EXPECT_THROW(lower_bound_parent(m, {1.0, -0.5}), InvalidInput);
  const Matrix id = Matrix::Identity(3, 3);
  const MeasurementSet same = MeasurementSet::from_bases({id, id});
  EXPECT_THROW(lower_bound_parent(same, {1.0}), InvalidInput);
}

// An operator diagonal in two unbiased bases has a constant diagonal. The
// alternating pinching in both bases converges to such an operator.
TEST(Lemma, DiagonalInTwoUnbiasedBasesIsScalar) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int d : {3, 4, 5, 7}) {
    const auto& b = mubs(d).bases;
    const Matrix b0 = b[0].vectors, b1 = b[1].vectors;
    Matrix h(d, d);
    for (int r = 0; r < d; ++r) {
      for (int c = 0; c < d; ++c) h(r, c) = Complex(n(rng), n(rng));
    }
    h = 0.5 * (h + h.adjoint()).eval();
    auto pinch = [&](const Matrix& basis, const Matrix& op) {
      Matrix t = basis.adjoint() * op * basis;
      return Matrix(basis * Matrix(t.diagonal().asDiagonal()) * basis.adjoint());
    };
    for (int it = 0; it < 200; ++it) h = pinch(b1, pinch(b0, h));
    const Matrix t0 = b0.adjoint() * h * b0;
    const Matrix t1 = b1.adjoint() * h * b1;
    EXPECT_LE((t0 - Matrix(t0.diagonal().asDiagonal())).cwiseAbs().maxCoeff(), 1e-9);
    EXPECT_LE((t1 - Matrix(t1.diagonal().asDiagonal())).cwiseAbs().maxCoeff(), 1e-9);
    const Eigen::VectorXd diag = t0.diagonal().real();
    EXPECT_LE(diag.maxCoeff() - diag.minCoeff(), 1e-9) << d;
  }
}

TEST(Robustness, CertificatePath) {
  const RobustnessReport r = robustness(subset(7, first(2)));
  EXPECT_EQ(r.method, "certificate");
  ASSERT_TRUE(r.eta);
  EXPECT_NEAR(*r.eta, (5 + std::sqrt(7.0)) / 12, 1e-12);
  ASSERT_TRUE(r.certificate);
  EXPECT_TRUE(r.certificate->feasible());
}

TEST(Robustness, SdpPath) {
  const RobustnessReport r = robustness(subset(4, first(3)));
  EXPECT_EQ(r.method, "sdp");
  ASSERT_TRUE(r.eta);
  EXPECT_NEAR(*r.eta, 0.5469, 5e-4);
  EXPECT_LE(r.lower, *r.eta);
  EXPECT_GE(r.upper, *r.eta);
  EXPECT_NEAR(r.upper, 5.0 / 9.0, 1e-12);
}

TEST(Robustness, BoundsOnlyOverBudget) {
  RobustnessOptions o;
  o.block_budget = 10;
  o.try_certificate = false;
  const RobustnessReport r = robustness(subset(4, first(3)), o);
  EXPECT_EQ(r.method, "bounds-only");
  EXPECT_FALSE(r.eta);
  EXPECT_NEAR(r.lower, 0.5263, 1e-4);
  const std::string j = to_json(r);
  EXPECT_NE(j.find("\"eta\":null"), std::string::npos);
  EXPECT_EQ(j.find("timings"), std::string::npos);
  EXPECT_NE(to_json(r, true).find("timings"), std::string::npos);
}

TEST(Robustness, BisectionMatchesDirectSolve) {
  RobustnessOptions o;
  o.try_certificate = false;
  o.sdp.max_iter = 3;  // force the fallback
  const MeasurementSet m = subset(3, first(3));
  const RobustnessReport r = robustness(m, o);
  EXPECT_EQ(r.method, "sdp-bisection");
  ASSERT_TRUE(r.eta);
  EXPECT_NEAR(*r.eta, std::cos(kPi / 18) / std::sqrt(3.0), 1e-5);
}

TEST(JointlyMeasurableAt, BracketsEta) {
  const MeasurementSet m = subset(2, first(3));
  const double eta = 1 / std::sqrt(3.0);
  EXPECT_TRUE(jointly_measurable_at(m, eta - 1e-3));
  EXPECT_FALSE(jointly_measurable_at(m, eta + 1e-3));
}

TEST(Invariants, WeakDualityAndSandwich) {
  for (int d : {2, 3, 4, 5}) {
    for (int k = 2; k <= d + 1; ++k) {
      if (std::pow(d, k) > 1100) break;
      const MeasurementSet m = subset(d, first(k));
      const SdpSolution s = solve_sdp(build_primal(m));
      ASSERT_EQ(s.status, SdpStatus::kOptimal);
      EXPECT_LE(s.primal_value, s.dual_value + 1e-8 + 1e-12);
      const double eta = eta_primal(s);
      EXPECT_GE(dual_ansatz(m).value, eta - 1e-7);
      EXPECT_LE(eta_low_recursive(k, d).value, eta + 1e-6) << d << "," << k;
      EXPECT_LE(eta, eta_up_rank1(m).value + 1e-6) << d << "," << k;
    }
  }
}

}  // namespace
}  // namespace incompat
