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

#include "incompat/mub.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "incompat/error.hpp"

namespace incompat {
namespace {

TEST(BuildMubOdd, SmallPrimes) {
  for (auto [p, r, count] : {std::tuple{3, 1, 4}, {5, 1, 6}, {3, 2, 10}}) {
    const MubSet m = build_mub_odd(p, r);
    EXPECT_EQ(static_cast<int>(m.bases.size()), count);
    const UnbiasedReport rep = verify_unbiased(m, 1e-12);
    EXPECT_TRUE(rep.passed) << p << "^" << r << " dev " << rep.max_deviation;
    EXPECT_EQ(m.bases.back().label, "computational");
  }
  EXPECT_THROW(build_mub_odd(2, 1), InvalidInput);
}

TEST(BuildMubEven, SmallRings) {
  for (auto [r, count] : {std::pair{1, 3}, {2, 5}, {3, 9}}) {
    const MubSet m = build_mub_even(r);
    EXPECT_EQ(static_cast<int>(m.bases.size()), count);
    EXPECT_TRUE(verify_unbiased(m, 1e-12).passed) << r;
  }
}

TEST(BuildMubEven, QubitCaseIsPauliUpToPhases) {
  const MubSet m = build_mub_even(1);
  const MubSet pauli = pauli_triple();
  // Same set of rays: each constructed basis equals some Pauli basis.
  for (const Basis& b : m.bases) {
    bool matched = false;
    for (const Basis& q : pauli.bases) {
      const Matrix overlap = b.vectors.adjoint() * q.vectors;
      const Matrix mag = overlap.cwiseAbs().cast<Complex>();
      if ((mag - Matrix::Identity(2, 2)).norm() < 1e-12 ||
          (mag - Matrix(Eigen::Matrix2cd{{0, 1}, {1, 0}})).norm() < 1e-12) {
        matched = true;
      }
    }
    EXPECT_TRUE(matched) << b.label;
  }
}

TEST(BuildMub, CompleteUpTo32) {
  for (int d : {2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17, 19, 23, 25, 27, 29, 31,
                32}) {
    const MubSet m = build_mub(d);
    EXPECT_EQ(static_cast<int>(m.bases.size()), d + 1);
    const UnbiasedReport rep = verify_unbiased(m, 1e-10);
    EXPECT_TRUE(rep.passed) << d << " dev " << rep.max_deviation << " gram "
                            << rep.max_gram_deviation;
  }
}

TEST(BuildMub, Errors) {
  EXPECT_THROW(build_mub(6), InvalidInput);
  EXPECT_THROW(build_mub(12), InvalidInput);
  EXPECT_THROW(build_mub(81), BudgetExceeded);
}

TEST(BuildMub, DisplacementSymmetriesPermuteEveryBasis) {
  for (int d : {2, 3, 4, 5, 7, 8, 9}) {
    const MubSet m = build_mub(d);
    EXPECT_EQ(static_cast<int>(m.symmetries.size()), d * d) << d;
  }
}

TEST(PauliTriple, Convention) {
  const MubSet m = pauli_triple();
  ASSERT_EQ(m.bases.size(), 3u);
  EXPECT_LE((m.bases[0].vectors - Matrix::Identity(2, 2)).norm(), 0.0);
  EXPECT_TRUE(verify_unbiased(m, 1e-15).passed);
  EXPECT_TRUE(to_measurements(m).rank_one_projective());
}

TEST(VerifyUnbiased, IdenticalBasesFail) {
  MubSet m;
  m.dim = 3;
  m.bases = {{Matrix::Identity(3, 3), "a"}, {Matrix::Identity(3, 3), "b"}};
  const UnbiasedReport rep = verify_unbiased(m);
  EXPECT_FALSE(rep.passed);
  // Diagonal overlaps deviate by 1 - 1/sqrt(3), off-diagonal ones by 1/sqrt(3).
  EXPECT_GE(rep.max_deviation, 1.0 - 1.0 / std::sqrt(3.0));
  EXPECT_NEAR(rep.max_deviation, 1.0 / std::sqrt(3.0), 1e-15);
  EXPECT_EQ(rep.worst_x, 0);
  EXPECT_EQ(rep.worst_y, 1);
}

TEST(ToMeasurements, ProjectorsAndCompleteness) {
  const MubSet m = build_mub(4);
  const std::vector<int> subset = {0, 2, 4};
  const MeasurementSet ms = to_measurements(m, subset);
  EXPECT_EQ(ms.k(), 3);
  EXPECT_TRUE(ms.rank_one_projective());
  for (int x = 0; x < ms.k(); ++x) {
    Matrix sum = Matrix::Zero(4, 4);
    for (int a = 0; a < 4; ++a) {
      const Matrix& p = ms.op(x, a).matrix();
      EXPECT_NEAR(ms.op(x, a).trace(), 1.0, 1e-12);
      EXPECT_LE((p * p - p).cwiseAbs().maxCoeff(), 1e-12);
      for (int b = a + 1; b < 4; ++b) {
        EXPECT_LE((p * ms.op(x, b).matrix()).cwiseAbs().maxCoeff(), 1e-12);
      }
      sum += p;
    }
    EXPECT_LE((sum - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff(), 1e-10);
  }
  EXPECT_THROW(to_measurements(m, std::vector<int>{0, 0}), InvalidInput);
  EXPECT_THROW(to_measurements(m, std::vector<int>{5}), InvalidInput);
}

TEST(ToMeasurements, SymmetryPermutationsAreConsistent) {
  const MubSet m = build_mub(5);
  const MeasurementSet ms = to_measurements(m, std::vector<int>{1, 3, 5});
  for (const auto& s : ms.symmetries()) {
    for (int x = 0; x < ms.k(); ++x) {
      for (int a = 0; a < 5; ++a) {
        const Matrix image =
            s.unitary * ms.op(x, a).matrix() * s.unitary.adjoint();
        EXPECT_LE((image - ms.op(x, s.perms[x][a]).matrix()).norm(), 1e-10);
      }
    }
  }
}

TEST(Json, RoundTrip) {
  const MubSet m = build_mub(9);
  const MubSet back = mub_from_json(mub_to_json(m));
  ASSERT_EQ(back.bases.size(), m.bases.size());
  EXPECT_EQ(back.metadata.modulus, m.metadata.modulus);
  EXPECT_EQ(back.symmetries.size(), m.symmetries.size());
  for (size_t x = 0; x < m.bases.size(); ++x) {
    EXPECT_LE((back.bases[x].vectors - m.bases[x].vectors).norm(), 1e-15);
  }
  EXPECT_THROW(mub_from_json("{\"dim\": 2}"), InvalidInput);
}

TEST(Json, ImportRejectsBiasedBases) {
  MubSet m = build_mub(3);
  m.bases[1] = m.bases[0];
  EXPECT_THROW(mub_from_json(mub_to_json(m)), InvalidInput);
}

TEST(TensorProduct, SixDimensionalTriple) {
  const MubSet m = tensor_product(pauli_triple(), build_mub(3));
  EXPECT_EQ(m.dim, 6);
  EXPECT_EQ(m.bases.size(), 3u);
  EXPECT_TRUE(verify_unbiased(m, 1e-12).passed);
  EXPECT_EQ(m.symmetries.size(), 36u);
}

// Gauss-sum closed form for matrix elements between consecutive basis
// vectors of the same basis alpha, sandwiching the projector P onto
// |phi^x_j> with x != alpha:
//   <phi^a_{l1}| P |phi^a_{l2}> = (1/d) w^{Tr(mu [-(l1^2 - l2^2) + 2 j (l1 - l2)])}
// with mu = (4 (x - a))^{-1}, as a modulus-and-phase identity.
TEST(GaussSum, OddClosedFormMatchesInnerProducts) {
  std::mt19937_64 rng(17);
  for (auto [p, r] : {std::pair{3, 1}, {5, 1}, {3, 2}}) {
    const galois::FiniteField f = galois::field_construct(p, r);
    const MubSet m = build_mub_odd(p, r);
    const int d = f.order();
    const auto els = f.elements();
    const Complex omega = root_of_unity(p);
    std::uniform_int_distribution<int> pick(0, d - 1);
    for (int trial = 0; trial < 40; ++trial) {
      const int alpha = pick(rng);
      int x = pick(rng);
      if (x == alpha) x = (x + 1) % d;
      const int j = pick(rng), l1 = pick(rng), l2 = pick(rng);
      const Vector& phi = m.bases[x].vectors.col(j);
      const Complex direct = m.bases[alpha].vectors.col(l1).dot(phi) *
                             phi.dot(m.bases[alpha].vectors.col(l2));
      const auto mu = (f.from_int(4) * (els[x] - els[alpha])).inverse();
      const auto arg = mu * (-(els[l1] * els[l1] - els[l2] * els[l2]) +
                             f.from_int(2) * els[j] * (els[l1] - els[l2]));
      const Complex closed = std::pow(omega, arg.trace()) / static_cast<double>(d);
      EXPECT_LE(std::abs(direct - closed), 1e-10)
          << p << "^" << r << " alpha=" << alpha << " x=" << x;
    }
  }
}

// Even analogue: <phi^a_{l1}| P |phi^a_{l2}> equals, up to the modulus 1/d,
// a fourth root of unity i^{Tr[t^{-2} (x - a + 2 j) (l2 - l1)]} where the
// difference l2 - l1 is taken in the ring and t is the unit part of x - a.
TEST(GaussSum, EvenOverlapsAreScaledFourthRoots) {
  for (int r : {1, 2, 3}) {
    const MubSet m = build_mub_even(r);
    const int d = 1 << r;
    for (int alpha = 0; alpha < d; ++alpha) {
      for (int x = 0; x < d; ++x) {
        if (x == alpha) continue;
        for (int j = 0; j < d; ++j) {
          const Vector& phi = m.bases[x].vectors.col(j);
          for (int l1 = 0; l1 < d; ++l1) {
            for (int l2 = 0; l2 < d; ++l2) {
              const Complex v = m.bases[alpha].vectors.col(l1).dot(phi) *
                                phi.dot(m.bases[alpha].vectors.col(l2)) *
                                static_cast<double>(d);
              EXPECT_NEAR(std::abs(v), 1.0, 1e-10);
              const double turns = std::arg(v) / (std::acos(-1.0) / 2);
              EXPECT_NEAR(turns, std::round(turns), 1e-10);
            }
          }
        }
      }
    }
  }
}

}  // namespace
}  // namespace incompat
