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

#include "incompat/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <thread>

#include "incompat/error.hpp"
#include "incompat/galois.hpp"
#include "json_util.hpp"

namespace incompat {
namespace {

using detail::sig12;

double binomial(int n, int k) {
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return c;
}

std::vector<std::vector<int>> all_subsets(int n, int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> s(k);
  for (int i = 0; i < k; ++i) s[i] = i;
  while (true) {
    out.push_back(s);
    int i = k - 1;
    while (i >= 0 && s[i] == n - k + i) --i;
    if (i < 0) break;
    ++s[i];
    for (int t = i + 1; t < k; ++t) s[t] = s[t - 1] + 1;
  }
  return out;
}

std::string fmt12(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string tol_key(double t) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", t);
  return buf;
}

double norm3(const Bloch& a) {
  return std::sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2]);
}

Bloch combo(const Bloch& a, double s, const Bloch& b, double t, const Bloch& c,
            double u) {
  return {s * a[0] + t * b[0] + u * c[0], s * a[1] + t * b[1] + u * c[1],
          s * a[2] + t * b[2] + u * c[2]};
}

void check_bloch(const Bloch& a) {
  const double n = norm3(a);
  if (!std::isfinite(n) || n == 0.0) {
    throw InvalidInput("Bloch vector must be nonzero and finite");
  }
  if (n > 1.0 + 1e-12) throw InvalidInput("Bloch vector longer than 1");
}

// c 1 + v . sigma
Matrix qubit_op(double c, const Bloch& v) {
  Matrix m(2, 2);
  m(0, 0) = c + v[2];
  m(1, 1) = c - v[2];
  m(0, 1) = Complex(v[0], -v[1]);
  m(1, 0) = Complex(v[0], v[1]);
  return m;
}

// Psi as a d x d matrix, Alice's index on rows.
Matrix reshape(const Vector& psi, int d) {
  if (d < 1 || psi.size() != static_cast<Eigen::Index>(d) * d) {
    throw InvalidInput("state must have dimension d^2");
  }
  if (std::abs(psi.norm() - 1.0) > 1e-9) {
    throw InvalidInput("state is not normalized");
  }
  Matrix m(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) m(i, j) = psi(i * d + j);
  }
  return m;
}

}  // namespace

int count_clusters(std::vector<double> values, double tol) {
  if (values.empty()) return 0;
  std::sort(values.begin(), values.end());
  int n = 1;
  for (size_t i = 1; i < values.size(); ++i) {
    if (values[i] - values[i - 1] > tol) ++n;
  }
  return n;
}

MubSet standard_mubs(int d) {
  if (d == 6) return tensor_product(build_mub(2), build_mub(3));
  return build_mub(d);
}

SubsetScan scan_subsets(int d, int k, const ScanOptions& opts) {
  if (!galois::prime_power(d)) {
    throw InvalidInput("d = " + std::to_string(d) + " is not a prime power");
  }
  if (k < 1 || k > d + 1) {
    throw InvalidInput("k must lie in [1, d + 1]");
  }
  if (!(opts.group_tol > 0.0)) throw InvalidInput("group_tol must be positive");

  SubsetScan out;
  out.d = d;
  out.k = k;
  out.group_tol = opts.group_tol;

  auto subsets = all_subsets(d + 1, k);
  const double per_subset = std::pow(static_cast<double>(d), k);
  const double cost = binomial(d + 1, k) * per_subset;
  if (cost > opts.budget) {
    if (!opts.allow_partial) {
      throw BudgetExceeded("C(d+1,k) d^k = " + fmt12(cost) +
                           " exceeds the scan budget " + fmt12(opts.budget));
    }
    const auto keep = static_cast<size_t>(opts.budget / per_subset);
    subsets.resize(std::min(keep, subsets.size()));
    out.complete = false;
  }

  const MubSet mubs = build_mub(d);
  out.records.resize(subsets.size());
  LambdaOptions lo = opts.robustness.lambda;
  lo.jobs = 1;

  std::atomic<size_t> next{0};
  std::vector<std::exception_ptr> errors(subsets.size());
  auto worker = [&] {
    for (size_t i = next++; i < subsets.size(); i = next++) {
      try {
        SubsetRecord& r = out.records[i];
        r.indices = subsets[i];
        const MeasurementSet m = to_measurements(mubs, subsets[i]);
        r.eta_up = eta_up_rank1(m, lo).value;
        if (opts.compute_exact) {
          RobustnessOptions ro = opts.robustness;
          ro.lambda.jobs = 1;
          r.eta_star = robustness(m, ro).eta;
        }
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int jobs = std::max(1, opts.jobs);
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  std::vector<size_t> order(out.records.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return out.records[a].eta_up < out.records[b].eta_up;
  });
  int id = -1;
  double prev = 0.0;
  for (size_t i : order) {
    const double v = out.records[i].eta_up;
    if (id < 0 || v - prev > opts.group_tol) {
      ++id;
      out.cluster_values.push_back(v);
    }
    out.records[i].cluster_id = id;
    prev = v;
  }
  out.distinct = id + 1;

  std::vector<double> values;
  for (const auto& r : out.records) values.push_back(r.eta_up);
  for (double t : {1e-5, opts.group_tol, 1e-7}) {
    out.sensitivity[t] = count_clusters(values, t);
  }
  return out;
}

std::string scan_to_csv(const SubsetScan& s) {
  std::ostringstream os;
  os << "indices,eta_up,eta_star,cluster_id\n";
  for (const auto& r : s.records) {
    for (size_t i = 0; i < r.indices.size(); ++i) {
      os << (i ? ";" : "") << r.indices[i];
    }
    os << ',' << fmt12(r.eta_up) << ',';
    if (r.eta_star) os << fmt12(*r.eta_star);
    os << ',' << r.cluster_id << '\n';
  }
  return os.str();
}

std::string scan_to_json(const SubsetScan& s) {
  nlohmann::ordered_json j;
  j["d"] = s.d;
  j["k"] = s.k;
  j["group_tol"] = s.group_tol;
  j["distinct"] = s.distinct;
  j["complete"] = s.complete;
  j["subsets_scanned"] = s.records.size();
  std::vector<int> sizes(s.cluster_values.size(), 0);
  for (const auto& r : s.records) ++sizes[r.cluster_id];
  nlohmann::ordered_json clusters = nlohmann::ordered_json::array();
  for (size_t c = 0; c < s.cluster_values.size(); ++c) {
    std::vector<int> rep;
    for (const auto& r : s.records) {
      if (r.cluster_id == static_cast<int>(c)) {
        rep = r.indices;
        break;
      }
    }
    clusters.push_back({{"eta_up", sig12(s.cluster_values[c])},
                        {"size", sizes[c]},
                        {"representative", rep}});
  }
  j["clusters"] = std::move(clusters);
  nlohmann::ordered_json sens = nlohmann::ordered_json::object();
  for (auto it = s.sensitivity.rbegin(); it != s.sensitivity.rend(); ++it) {
    sens[tol_key(it->first)] = it->second;
  }
  j["sensitivity"] = std::move(sens);
  nlohmann::ordered_json recs = nlohmann::ordered_json::array();
  for (const auto& r : s.records) {
    recs.push_back(
        {{"indices", r.indices},
         {"eta_up", sig12(r.eta_up)},
         {"eta_star",
          r.eta_star ? nlohmann::ordered_json(sig12(*r.eta_star)) : nullptr},
         {"cluster_id", r.cluster_id}});
  }
  j["records"] = std::move(recs);
  return j.dump();
}

double qubit_eta2(const Bloch& a1, const Bloch& a2) {
  check_bloch(a1);
  check_bloch(a2);
  const Bloch zero{0, 0, 0};
  return 2.0 / (norm3(combo(a1, 1, a2, 1, zero, 0)) +
                norm3(combo(a1, 1, a2, -1, zero, 0)));
}

double qubit_eta3(const Bloch& a1, const Bloch& a2, const Bloch& a3) {
  check_bloch(a1);
  check_bloch(a2);
  check_bloch(a3);
  const double sum = norm3(combo(a1, 1, a2, 1, a3, 1)) +
                     norm3(combo(a1, 1, a2, -1, a3, -1)) +
                     norm3(combo(a1, -1, a2, 1, a3, -1)) +
                     norm3(combo(a1, -1, a2, -1, a3, 1));
  return 4.0 / sum;
}

std::vector<Matrix> qubit_parent(const std::vector<Bloch>& a, double eta) {
  if (a.size() != 2 && a.size() != 3) {
    throw InvalidInput("qubit parent needs 2 or 3 Bloch vectors");
  }
  for (const auto& v : a) check_bloch(v);
  const Bloch zero{0, 0, 0};
  std::vector<Matrix> g;
  if (a.size() == 2) {
    const double z = 1.0 - eta * norm3(combo(a[0], 1, a[1], -1, zero, 0));
    for (int bits = 0; bits < 4; ++bits) {
      const double m1 = (bits & 1) ? -1.0 : 1.0;
      const double m2 = (bits & 2) ? -1.0 : 1.0;
      const Bloch v = combo(a[0], eta * m1, a[1], eta * m2, zero, 0);
      g.push_back(qubit_op(1.0 + m1 * m2 * z, v) / 4.0);
    }
    return g;
  }
  const double n1 = norm3(combo(a[0], 1, a[1], -1, a[2], -1));
  const double n2 = norm3(combo(a[0], -1, a[1], 1, a[2], -1));
  const double n3 = norm3(combo(a[0], -1, a[1], -1, a[2], 1));
  const double z1 = 1.0 - eta * (n2 + n3) / 2.0;
  const double z2 = 1.0 - eta * (n1 + n3) / 2.0;
  const double z3 = 1.0 - eta * (n1 + n2) / 2.0;
  for (int bits = 0; bits < 8; ++bits) {
    const double m1 = (bits & 1) ? -1.0 : 1.0;
    const double m2 = (bits & 2) ? -1.0 : 1.0;
    const double m3 = (bits & 4) ? -1.0 : 1.0;
    const double c = 1.0 + m2 * m3 * z1 + m3 * m1 * z2 + m1 * m2 * z3;
    const Bloch v = combo(a[0], eta * m1, a[1], eta * m2, a[2], eta * m3);
    g.push_back(qubit_op(c, v) / 8.0);
  }
  return g;
}

bool qubit_parent_positivity(const std::vector<Bloch>& a, double eta) {
  for (const Matrix& g : qubit_parent(a, eta)) {
    if (min_eigenvalue(HermitianOperator(g)) < -1e-10) return false;
  }
  return true;
}

double Assemblage::no_signalling_deviation(const Matrix& reduced) const {
  double worst = 0.0;
  for (const auto& row : sigma) {
    Matrix sum = Matrix::Zero(reduced.rows(), reduced.cols());
    for (const Matrix& s : row) sum += s;
    worst = std::max(worst, (sum - reduced).cwiseAbs().maxCoeff());
  }
  return worst;
}

Matrix reduced_state_b(const Vector& psi, int d) {
  const Matrix m = reshape(psi, d);
  return m.transpose() * m.conjugate();
}

Assemblage assemblage_noisy_measurements(const Vector& psi,
                                         const MeasurementSet& m, double eta) {
  const int d = m.dim();
  const Matrix mat = reshape(psi, d);
  const MeasurementSet noisy = m.noisy(eta);
  Assemblage out;
  for (int x = 0; x < m.k(); ++x) {
    std::vector<Matrix> row;
    for (int a = 0; a < m.outcomes(x); ++a) {
      const Matrix& op = noisy.op(x, a).matrix();
      row.push_back(mat.transpose() * op.transpose() * mat.conjugate());
    }
    out.sigma.push_back(std::move(row));
  }
  return out;
}

Assemblage assemblage_noisy_state(const Vector& psi, const MeasurementSet& m,
                                  double eta) {
  const int d = m.dim();
  const Matrix rho_b = reduced_state_b(psi, d);
  Matrix rho = eta * (psi * psi.adjoint());
  for (int i = 0; i < d; ++i) {
    rho.block(i * d, i * d, d, d) += (1.0 - eta) / d * rho_b;
  }
  Assemblage out;
  for (int x = 0; x < m.k(); ++x) {
    std::vector<Matrix> row;
    for (int a = 0; a < m.outcomes(x); ++a) {
      const Matrix& op = m.op(x, a).matrix();
      Matrix s = Matrix::Zero(d, d);
      // tr_A[(A (x) 1) rho]_{j j'} = sum_{i i'} A_{i i'} rho_{(i' j), (i j')}
      for (int i = 0; i < d; ++i) {
        for (int ip = 0; ip < d; ++ip) {
          s += op(i, ip) * rho.block(ip * d, i * d, d, d);
        }
      }
      row.push_back(std::move(s));
    }
    out.sigma.push_back(std::move(row));
  }
  return out;
}

double steering_identity_check(const Vector& psi, const MeasurementSet& m,
                               double eta) {
  const Assemblage lhs = assemblage_noisy_measurements(psi, m, eta);
  const Assemblage rhs = assemblage_noisy_state(psi, m, eta);
  double worst = 0.0;
  for (size_t x = 0; x < lhs.sigma.size(); ++x) {
    for (size_t a = 0; a < lhs.sigma[x].size(); ++a) {
      worst = std::max(
          worst, (lhs.sigma[x][a] - rhs.sigma[x][a]).cwiseAbs().maxCoeff());
    }
  }
  return worst;
}

SteeringReport steering_bound(int d, int k, const RobustnessOptions& opts) {
  const MubSet mubs = standard_mubs(d);
  if (k < 1 || k > static_cast<int>(mubs.bases.size())) {
    throw InvalidInput("k out of range for the available bases");
  }
  std::vector<int> subset(k);
  for (int i = 0; i < k; ++i) subset[i] = i;
  SteeringReport r;
  r.d = d;
  r.k = k;
  r.robustness = robustness(to_measurements(mubs, subset), opts);
  if (r.robustness.eta) {
    r.statement = "w* = eta* = " + fmt12(*r.robustness.eta) +
                  ": the state w |psi><psi| + (1 - w) 1/d (x) tr_A |psi><psi| "
                  "is steerable with these measurements iff w > w*";
  } else {
    r.statement = "w* lies in [" + fmt12(r.robustness.lower) + ", " +
                  fmt12(r.robustness.upper) + "]";
  }
  return r;
}

std::string to_json(const SteeringReport& r, bool with_timings) {
  nlohmann::ordered_json j;
  j["d"] = r.d;
  j["k"] = r.k;
  j["w_star"] = r.robustness.eta
                    ? nlohmann::ordered_json(sig12(*r.robustness.eta))
                    : nullptr;
  j["statement"] = r.statement;
  j["robustness"] =
      nlohmann::ordered_json::parse(to_json(r.robustness, with_timings));
  return j.dump();
}

}  // namespace incompat
