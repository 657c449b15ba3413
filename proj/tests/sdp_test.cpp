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

#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include <cmath>

#include "incompat/error.hpp"

namespace incompat {
namespace {

// min tr(C X) s.t. tr X = 1, X >= 0 has value lambda_min(C).
TEST(SolveSdp, MinimumEigenvalueProgram) {
  Matrix c(3, 3);
  c << Complex(2, 0), Complex(0.5, 1), Complex(0, 0),
       Complex(0.5, -1), Complex(1, 0), Complex(0, -0.3),
       Complex(0, 0), Complex(0, 0.3), Complex(-1, 0);
  SdpProblem p;
  p.block_dims = {3};
  for (int r = 0; r < 3; ++r) {
    for (int col = r; col < 3; ++col) {
      if (c(r, col) != Complex(0, 0)) p.objective.push_back({0, r, col, c(r, col)});
    }
  }
  SdpConstraint trace;
  for (int r = 0; r < 3; ++r) trace.entries.push_back({0, r, r, Complex(1, 0)});
  trace.rhs = 1.0;
  p.constraints.push_back(trace);

  const SdpSolution s = solve_sdp(p);
  Eigen::SelfAdjointEigenSolver<Matrix> es(c);
  EXPECT_EQ(s.status, SdpStatus::kOptimal);
  EXPECT_NEAR(s.primal_value, es.eigenvalues()(0), 1e-7);
  EXPECT_NEAR(s.dual_value, es.eigenvalues()(0), 1e-7);
  EXPECT_LE(std::abs(s.gap), 1e-8);
  // The optimal X is the projector onto the bottom eigenvector.
  const Vector v = es.eigenvectors().col(0);
  EXPECT_NEAR((v.adjoint() * s.x[0] * v)(0, 0).real(), 1.0, 1e-6);
}

// Imaginary-part constraints: fix Im X_01 = 0.4 on a 2x2 block with
// tr X = 1 and minimize Re X_01 (entry value 1/2 reads Re X_01).
TEST(SolveSdp, ImaginaryEntryConstraint) {
  SdpProblem p;
  p.block_dims = {2};
  p.objective.push_back({0, 0, 1, Complex(0.5, 0)});
  p.constraints.push_back({{{0, 0, 0, Complex(1, 0)}, {0, 1, 1, Complex(1, 0)}}, 1.0});
  p.constraints.push_back({{{0, 0, 1, Complex(0, 0.5)}}, 0.4});
  const SdpSolution s = solve_sdp(p);
  ASSERT_EQ(s.status, SdpStatus::kOptimal);
  // |X_01| <= 1/2 at best, so Re X_01 >= -sqrt(1/4 - 0.16).
  EXPECT_NEAR(s.primal_value, -std::sqrt(0.25 - 0.16), 1e-7);
  EXPECT_NEAR(s.x[0](0, 1).imag(), 0.4, 1e-7);
  EXPECT_NEAR(apply_entries(p.constraints[1].entries, s.x), 0.4, 1e-9);
}

TEST(SolveSdp, ScalarBlocksBehaveLikeLp) {
  // min x0 + 2 x1 s.t. x0 + x1 = 3, x >= 0 -> 3 at x = (3, 0).
  SdpProblem p;
  p.block_dims = {1, 1};
  p.objective = {{0, 0, 0, Complex(1, 0)}, {1, 0, 0, Complex(2, 0)}};
  p.constraints.push_back({{{0, 0, 0, Complex(1, 0)}, {1, 0, 0, Complex(1, 0)}}, 3.0});
  const SdpSolution s = solve_sdp(p);
  EXPECT_EQ(s.status, SdpStatus::kOptimal);
  EXPECT_NEAR(s.primal_value, 3.0, 1e-8);
  EXPECT_NEAR(s.x[1](0, 0).real(), 0.0, 1e-7);
}

TEST(SolveSdp, IterationLimitIsReported) {
  SdpProblem p;
  p.block_dims = {1};
  p.objective = {{0, 0, 0, Complex(1, 0)}};
  p.constraints.push_back({{{0, 0, 0, Complex(1, 0)}}, 2.0});
  SdpOptions o;
  o.max_iter = 1;
  const SdpSolution s = solve_sdp(p, o);
  EXPECT_EQ(s.status, SdpStatus::kMaxIter);
  EXPECT_EQ(s.iterations, 1);
}

TEST(SolveSdp, InfeasibleProblem) {
  // x >= 0 and x = -1.
  SdpProblem p;
  p.block_dims = {1};
  p.objective = {{0, 0, 0, Complex(1, 0)}};
  p.constraints.push_back({{{0, 0, 0, Complex(1, 0)}}, -1.0});
  const SdpSolution s = solve_sdp(p);
  EXPECT_NE(s.status, SdpStatus::kOptimal);
}

TEST(SdpProblem, ValidationRejectsMalformedEntries) {
  SdpProblem p;
  p.block_dims = {2};
  p.constraints.push_back({{{0, 1, 0, Complex(1, 0)}}, 0.0});
  EXPECT_THROW(p.validate(), InvalidInput);
  p.constraints[0].entries[0] = {0, 0, 0, Complex(1, 1)};
  EXPECT_THROW(p.validate(), InvalidInput);
  p.constraints[0].entries[0] = {1, 0, 0, Complex(1, 0)};
  EXPECT_THROW(p.validate(), InvalidInput);
  p.constraints[0].entries[0] = {0, 0, 1, Complex(1, 0)};
  EXPECT_NO_THROW(p.validate());
}

TEST(SdpProblem, DumpListsBlocksAndConstraints) {
  SdpProblem p;
  p.block_dims = {2, 1};
  p.objective = {{1, 0, 0, Complex(1, 0)}};
  p.constraints.push_back({{{0, 0, 1, Complex(0, 0.5)}}, 0.25});
  const std::string s = p.dump();
  EXPECT_NE(s.find("provenance generic"), std::string::npos);
  EXPECT_NE(s.find("block 0 2"), std::string::npos);
  EXPECT_NE(s.find("constraint 0 rhs 0.25 entries 1"), std::string::npos);
  EXPECT_NE(s.find("  0 0 1 0 0.5"), std::string::npos);
}

TEST(SdpStatus, Names) {
  EXPECT_EQ(to_string(SdpStatus::kOptimal), "optimal");
  EXPECT_EQ(to_string(SdpStatus::kInfeasible), "infeasible");
  EXPECT_EQ(to_string(SdpStatus::kMaxIter), "max-iter");
}

}  // namespace
}  // namespace incompat
