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

// End-to-end acceptance run: one PASS/FAIL line per criterion. Pass
// criterion numbers as arguments to run a subset.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "incompat/analysis.hpp"
#include "incompat/bounds.hpp"
#include "incompat/error.hpp"
#include "incompat/galois.hpp"
#include "incompat/joint.hpp"
#include "incompat/mub.hpp"
#include "incompat/reference.hpp"
#include "incompat/sdp.hpp"

namespace {

using namespace incompat;

const double kPi = std::acos(-1.0);

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Tracks the worst deviation and every failing item.
struct Tally {
  int checked = 0;
  double worst = 0.0;
  std::vector<std::string> failures;

  void near(const std::string& what, double got, double want, double tol) {
    ++checked;
    const double dev = std::abs(got - want);
    worst = std::max(worst, dev);
    if (!(dev <= tol)) {
      char buf[160];
      std::snprintf(buf, sizeof buf, "%s: got %.10g want %.10g", what.c_str(),
                    got, want);
      failures.push_back(buf);
    }
  }
  void require(const std::string& what, bool ok) {
    ++checked;
    if (!ok) failures.push_back(what);
  }
  Outcome outcome(const std::string& summary) const {
    Outcome o;
    o.pass = failures.empty();
    char buf[96];
    std::snprintf(buf, sizeof buf, "%d checks, max deviation %.2e", checked,
                  worst);
    o.detail = summary + ", " + buf;
    for (size_t i = 0; i < failures.size() && i < 5; ++i) {
      o.detail += "; " + failures[i];
    }
    return o;
  }
};

std::vector<int> first(int k) {
  std::vector<int> v(k);
  std::iota(v.begin(), v.end(), 0);
  return v;
}

MeasurementSet mub_subset(int d, const std::vector<int>& s) {
  return to_measurements(standard_mubs(d), s);
}

std::string cell(int d, int k) {
  return "d=" + std::to_string(d) + " k=" + std::to_string(k);
}

Outcome closed_form_upper_bounds() {
  Tally t;
  const double s3 = std::sqrt(3.0), s5 = std::sqrt(5.0);
  const double k2[] = {1 / std::sqrt(2.0), (1 + s3) / 4, 2.0 / 3.0,
                       (3 + s5) / 8, (4 + std::sqrt(6.0)) / 10,
                       (5 + std::sqrt(7.0)) / 12};
  for (int d = 2; d <= 7; ++d) {
    t.near(cell(d, 2), eta_up_rank1(mub_subset(d, first(2))).value, k2[d - 2],
           1e-9);
  }
  t.near(cell(2, 3), eta_up_rank1(mub_subset(2, first(3))).value, 1 / s3, 1e-9);
  t.near(cell(3, 3), eta_up_rank1(mub_subset(3, first(3))).value,
         std::cos(kPi / 18) / s3, 1e-9);
  t.near(cell(5, 3) + " {0,1,3}", eta_up_rank1(mub_subset(5, {0, 1, 3})).value,
         (1 + s5) / 6, 1e-9);
  t.near(cell(5, 3) + " {0,1,2}", eta_up_rank1(mub_subset(5, {0, 1, 2})).value,
         (13 - s5 + std::sqrt(30 * (5 + s5))) / 48, 1e-9);
  t.near(cell(3, 4), eta_up_rank1(mub_subset(3, first(4))).value,
         (1 + 3 * s5) / 16, 1e-9);
  t.near(cell(4, 4), eta_up_rank1(mub_subset(4, first(4))).value, 0.5, 1e-9);
  t.near(cell(4, 5), eta_up_rank1(mub_subset(4, first(5))).value,
         (3 + 2 * s3) / 15, 1e-9);
  return t.outcome("shaded cells with analytic forms");
}

Outcome sdp_values() {
  Tally t;
  struct Case {
    int d;
    std::vector<int> subset;
    double want;
  };
  const Case cases[] = {{4, first(3), 0.5469},
                        {5, first(4), 0.4615},
                        {7, first(3), 0.5101},
                        {6, first(3), 0.5204},
                        {7, {0, 1, 2, 3}, 0.4436}};
  for (const auto& c : cases) {
    const MeasurementSet m = mub_subset(c.d, c.subset);
    const SdpSolution s = solve_sdp(build_primal(m));
    t.require(cell(c.d, c.subset.size()) + " optimal",
              s.status == SdpStatus::kOptimal);
    t.near(cell(c.d, c.subset.size()), eta_primal(s), c.want, 5e-4);
  }
  return t.outcome("unshaded cells");
}

Outcome certificate_tightness() {
  Tally t;
  for (int d = 2; d <= 5; ++d) {
    for (int k : {d, d + 1}) {
      const MeasurementSet m = mub_subset(d, first(k));
      const ParentCheck c = check_parent(parent_guess(m), m);
      t.require(cell(d, k) + " parent check: " + c.diagnostic, c.ok);
      t.near(cell(d, k), c.eta, eta_up_rank1(m).value, 1e-7);
    }
  }
  const MeasurementSet m9 = mub_subset(9, {0, 1, 2});
  bool guess_failed = false;
  try {
    guess_failed = !check_parent(parent_guess(m9), m9).ok;
  } catch (const InvalidParent&) {
    guess_failed = true;
  }
  t.require("d=9 {0,1,2} guess should fail", guess_failed);
  const SdpSolution s = solve_sdp(build_primal(m9));
  t.near("d=9 {0,1,2} SDP vs eta_up", eta_primal(s), eta_up_rank1(m9).value,
         5e-4);
  return t.outcome("tightness for k = d, d+1 and the d=9 triple");
}

Outcome lower_bound_table() {
  Tally t;
  for (const auto& e : reference::lower_bound_table()) {
    t.near(cell(e.d, e.k), eta_low_recursive(e.k, e.d).value, e.value, 1e-4);
  }
  for (int d = 2; d <= 7; ++d) {
    const BoundReport b = eta_low_recursive(3, d);
    t.near("alpha2 " + cell(d, 3), b.alphas.at(0), 1.0, 1e-9);
    t.near("alpha3 " + cell(d, 3), b.alphas.at(1), alpha3_closed_form(d), 1e-9);
  }
  return t.outcome(std::to_string(reference::lower_bound_table().size()) +
                   " lower-bound cells and optimal alphas");
}

Outcome quartic_bounds() {
  Tally t;
  const BoundReport six = eta_up_charpoly_k4(6);
  t.near("d=6 lambda", *six.lambda, 2.183, 1e-3);
  t.near("d=6 eta_up", six.value, 0.4550, 1e-3);
  t.near("d=10 eta_up", eta_up_charpoly_k4(10).value, 0.4213, 1e-3);
  t.near("d=6 eta_low", eta_low_recursive(4, 6).value, 0.4175, 1e-4);
  t.near("d=10 eta_low", eta_low_recursive(4, 10).value, 0.3864, 1e-4);
  return t.outcome("four bases without a complete set");
}

Outcome analytic_values() {
  Tally t;
  int certified = 0;
  for (const auto& e : reference::analytic_table()) {
    const RobustnessReport r = robustness(mub_subset(e.d, e.subset));
    const std::string what =
        cell(e.d, e.subset.size()) + " " + e.closed_form + " (" + r.method + ")";
    if (!r.eta) {
      t.require(what + " not computed", false);
      continue;
    }
    const bool cert = r.method == "certificate";
    certified += cert;
    t.near(what, *r.eta, e.value, cert ? 1e-9 : 5e-4);
  }
  return t.outcome(std::to_string(certified) + " by certificate");
}

Outcome sequence_closed_forms() {
  Tally t;
  std::mt19937_64 rng(2026);
  for (int trial = 0; trial < 20; ++trial) {
    const int d = std::uniform_int_distribution<int>(2, 5)(rng);
    const int k = std::uniform_int_distribution<int>(2, d + 1)(rng);
    std::vector<int> pool = first(d + 1);
    std::shuffle(pool.begin(), pool.end(), rng);
    pool.resize(k);
    std::sort(pool.begin(), pool.end());
    const MeasurementSet m = mub_subset(d, pool);
    for (int n = 1; n <= 4; ++n) {
      const ParentCheck c = check_parent(parent_sequence(m, n), m);
      t.require(cell(d, k) + " n=" + std::to_string(n) + ": " + c.diagnostic,
                c.ok);
      t.near(cell(d, k) + " n=" + std::to_string(n), c.eta,
             parent_sequence_eta(n, k, d), 1e-8);
    }
  }
  return t.outcome("20 random instances, n = 1..4");
}

Outcome inequivalence_counts() {
  Tally t;
  for (int d = 2; d <= 13; ++d) {
    if (!galois::prime_power(d)) continue;
    for (int k = 3; k <= std::min(4, d + 1); ++k) {
      const auto ref = reference::inequivalence_count(d, k);
      if (!ref) continue;
      const SubsetScan s = scan_subsets(d, k);
      t.require(cell(d, k) + " count " + std::to_string(s.distinct) +
                    " want " + std::to_string(*ref),
                s.distinct == *ref);
    }
  }
  return t.outcome("every counted cell with d <= 13, k <= 4");
}

Bloch random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Bloch v{g(rng), g(rng), g(rng)};
  const double n = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
  return {v[0] / n, v[1] / n, v[2] / n};
}

double dot(const Bloch& a, const Bloch& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

Outcome qubit_optimality() {
  Tally t;
  std::mt19937_64 rng(99);
  const double b2 = 1 / std::sqrt(2.0), b3 = 1 / std::sqrt(3.0);
  double min2 = 1.0, min3 = 1.0;
  int near_min = 0;
  for (int i = 0; i < 100000; ++i) {
    const Bloch a = random_unit(rng), b = random_unit(rng), c = random_unit(rng);
    const double v2 = qubit_eta2(a, b), v3 = qubit_eta3(a, b, c);
    min2 = std::min(min2, v2);
    min3 = std::min(min3, v3);
    // excess e confines the frame to sqrt(8 sqrt2 e) (pairs) and
    // sqrt(18 sqrt3 e) (triples)
    if (v2 < b2 + 1e-7) {
      ++near_min;
      const double dev = std::abs(std::acos(dot(a, b)) - kPi / 2);
      t.require("pair near minimum is not orthogonal",
                dev <= 1.01 * std::sqrt(8 * std::sqrt(2.0) * (v2 - b2)) + 1e-9);
    }
    if (v3 < b3 + 1e-7) {
      ++near_min;
      const double dev = std::max(
          {std::abs(dot(a, b)), std::abs(dot(b, c)), std::abs(dot(a, c))});
      t.require("triple near minimum is not orthonormal",
                dev <= 1.01 * std::sqrt(18 * std::sqrt(3.0) * (v3 - b3)) + 1e-9);
    }
  }
  t.require("pair minimum below 1/sqrt2", min2 >= b2 - 1e-9);
  t.require("triple minimum below 1/sqrt3", min3 >= b3 - 1e-9);
  t.near("orthonormal pair", qubit_eta2({1, 0, 0}, {0, 1, 0}), b2, 1e-15);
  t.near("orthonormal triple", qubit_eta3({1, 0, 0}, {0, 1, 0}, {0, 0, 1}), b3,
         1e-15);
  char buf[96];
  std::snprintf(buf, sizeof buf,
                "1e5 pairs and triples, minima %.9f %.9f, %d near the bound",
                min2, min3, near_min);
  return t.outcome(buf);
}

Outcome property_suite() {
  Tally t;
  for (int d = 2; d <= 32; ++d) {
    if (!galois::prime_power(d)) continue;
    const MubSet m = build_mub(d);
    const UnbiasedReport u = verify_unbiased(m);
    t.require("unbiased d=" + std::to_string(d),
              u.passed && u.max_deviation <= 1e-10);
    t.require("d+1 bases d=" + std::to_string(d),
              static_cast<int>(m.bases.size()) == d + 1);
    if (d <= 16) {
      const MeasurementSet ms = to_measurements(m);
      double worst = 0.0;
      for (int x = 0; x < ms.k(); ++x) {
        Matrix sum = Matrix::Zero(d, d);
        for (int a = 0; a < ms.outcomes(x); ++a) sum += ms.op(x, a).matrix();
        worst = std::max(
            worst, (sum - Matrix::Identity(d, d)).cwiseAbs().maxCoeff());
      }
      t.require("completeness d=" + std::to_string(d), worst <= 1e-10);
    }
  }
  for (auto [d, k] : {std::pair{2, 2}, {2, 3}, {3, 2}, {3, 3}, {4, 2}, {4, 3},
                      {5, 2}, {5, 3}}) {
    const MeasurementSet m = mub_subset(d, first(k));
    const SdpSolution p = solve_sdp(build_primal(m));
    const SdpSolution q = solve_sdp(build_dual(m));
    const double eta = eta_primal(p);
    t.require(cell(d, k) + " weak duality",
              p.primal_value - p.dual_value >= -1e-8 &&
                  q.primal_value - q.dual_value >= -1e-8);
    t.near(cell(d, k) + " primal vs dual builder", eta, eta_dual(q), 1e-6);
    t.require(cell(d, k) + " sandwich",
              eta_low_recursive(k, d).value <= eta + 1e-7 &&
                  eta <= eta_up_rank1(m).value + 1e-7 &&
                  eta <= eta_up_simple(k, d).value + 1e-7);
  }
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  for (int d : {2, 3, 4, 5}) {
    const MeasurementSet m = to_measurements(build_mub(d));
    Vector psi(d * d);
    for (int i = 0; i < d * d; ++i) psi(i) = Complex(g(rng), g(rng));
    psi /= psi.norm();
    for (double eta : {0.0, 0.5, 1.0}) {
      t.near("steering d=" + std::to_string(d),
             steering_identity_check(psi, m, eta), 0.0, 1e-12);
    }
  }
  return t.outcome("unbiasedness to d=32, completeness, duality, steering");
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria =
      {{"closed-form upper bounds", closed_form_upper_bounds},
       {"SDP values", sdp_values},
       {"certificate tightness", certificate_tightness},
       {"lower-bound table", lower_bound_table},
       {"quartic bounds", quartic_bounds},
       {"analytic values", analytic_values},
       {"parent sequence closed forms", sequence_closed_forms},
       {"inequivalent-set counts", inequivalence_counts},
       {"qubit optimality", qubit_optimality},
       {"property suite", property_suite}};
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));

  int failed = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!only.empty() && !only.count(id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    std::printf("[%s] criterion %d %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL",
                id, criteria[i].first, o.detail.c_str(), secs);
    std::fflush(stdout);
    failed += !o.pass;
  }
  return failed == 0 ? 0 : 1;
}
