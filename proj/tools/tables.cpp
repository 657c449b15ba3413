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

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <functional>
#include <numeric>
#include <thread>

#include "commands.hpp"
#include "incompat/analysis.hpp"
#include "incompat/error.hpp"
#include "incompat/galois.hpp"
#include "incompat/reference.hpp"

namespace incompat::cli {
namespace {

constexpr double kClosedFormTol = 1e-9;
constexpr double kNumericTol = 5e-4;
constexpr double kLowTol = 1e-4;

// Runs cell(i) for i < n on `jobs` threads; rows come back in index order.
std::vector<Json> map_cells(int n, int jobs,
                            const std::function<Json(int)>& cell) {
  std::vector<Json> rows(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i = next++; i < n; i = next++) {
      try {
        rows[i] = cell(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return rows;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

std::string kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::kInvalidInput: return "invalid-input";
    case ErrorKind::kBudgetExceeded: return "skipped";
    case ErrorKind::kNumericalFailure: return "numerical-failure";
  }
  return "error";
}

RunConfig cell_config(const RunConfig& c) {
  RunConfig inner = c;
  inner.jobs = 1;
  return inner;
}

// Reference entry of the cell closest to a computed eta_up.
std::optional<reference::RobustnessEntry> closest_entry(int d, int k,
                                                        double eta_up) {
  std::optional<reference::RobustnessEntry> best;
  double gap = 1e300;
  for (const auto& e : reference::robustness_cell(d, k)) {
    const auto v = e.eta_up ? e.eta_up : e.eta_star;
    const double g = v ? std::abs(*v - eta_up) : 1e299;
    if (g < gap) {
      gap = g;
      best = e;
    }
  }
  return best;
}

struct Grade {
  Json match = nullptr;  // null when there is nothing to compare
  double deviation = 0.0;
};

void grade(Grade& g, std::optional<double> computed, std::optional<double> ref,
           double tol) {
  if (!computed || !ref) return;
  const double dev = std::abs(*computed - *ref);
  g.deviation = std::max(g.deviation, dev);
  const bool ok = dev <= tol && (g.match.is_null() || g.match.get<bool>());
  g.match = ok;
}

std::vector<Json> robustness_cell_rows(const RunConfig& c, int d, int k) {
  std::vector<Json> rows;
  const auto t0 = std::chrono::steady_clock::now();
  auto base = [&](Json row) {
    row["d"] = d;
    row["k"] = k;
    return row;
  };
  if (d == 6 && k > 3) {
    Json row = base({});
    row["subset"] = nullptr;
    row["cluster_size"] = nullptr;
    std::optional<double> up;
    if (k == 4) up = eta_up_charpoly_k4(6).value;
    row["eta_up"] = num_or_null(up);
    row["eta_star"] = nullptr;
    row["method"] = k == 4 ? "charpoly-bound" : "none";
    const auto ref = reference::robustness_cell(d, k);
    row["ref_eta_star"] =
        ref.empty() ? Json(nullptr) : num_or_null(ref[0].eta_star);
    row["ref_eta_up"] = ref.empty() ? Json(nullptr) : num_or_null(ref[0].eta_up);
    row["ref_form"] = "";
    Grade g;
    if (!ref.empty()) grade(g, up, ref[0].eta_up, 1e-3);
    row["match"] = g.match;
    row["deviation"] = num(g.deviation);
    row["status"] = "no-construction";
    if (c.timings) row["seconds"] = seconds_since(t0);
    rows.push_back(row);
    return rows;
  }

  const MubSet mubs = standard_mubs(d);
  std::vector<std::pair<std::vector<int>, int>> reps;  // subset, class size
  std::vector<double> ups;
  if (d == 6) {
    std::vector<int> s(k);
    std::iota(s.begin(), s.end(), 0);
    reps.push_back({s, 1});
    ups.push_back(
        eta_up_rank1(to_measurements(mubs, s), lambda_options(cell_config(c)))
            .value);
  } else {
    ScanOptions so;
    so.group_tol = c.group_tol;
    so.budget = c.scan_budget;
    so.robustness.lambda = lambda_options(cell_config(c));
    const SubsetScan scan = scan_subsets(d, k, so);
    for (int cl = 0; cl < scan.distinct; ++cl) {
      int size = 0;
      const std::vector<int>* first = nullptr;
      for (const auto& rec : scan.records) {
        if (rec.cluster_id != cl) continue;
        if (!first) first = &rec.indices;
        ++size;
      }
      reps.push_back({*first, size});
      ups.push_back(scan.cluster_values[cl]);
    }
  }

  for (size_t i = 0; i < reps.size(); ++i) {
    const auto t1 = std::chrono::steady_clock::now();
    Json row = base({});
    row["subset"] = reps[i].first;
    row["cluster_size"] = reps[i].second;
    row["eta_up"] = num(ups[i]);
    std::optional<double> eta;
    std::string status = "ok";
    try {
      RobustnessOptions ro = robustness_options(cell_config(c));
      const RobustnessReport rep =
          robustness(to_measurements(mubs, reps[i].first), ro);
      eta = rep.eta;
      row["method"] = rep.method;
      if (!eta) status = "skipped";
    } catch (const Error& e) {
      row["method"] = "error";
      status = kind_name(e.kind());
    }
    row["eta_star"] = num_or_null(eta);
    const auto ref = closest_entry(d, k, ups[i]);
    Grade g;
    if (ref) {
      const double tol =
          ref->closed_form.empty() ? kNumericTol : kClosedFormTol;
      row["ref_eta_star"] = num_or_null(ref->eta_star);
      row["ref_eta_up"] = num_or_null(ref->eta_up);
      row["ref_form"] = ref->closed_form;
      grade(g, ups[i], ref->eta_up, tol);
      grade(g, eta, ref->eta_star, tol);
    } else {
      row["ref_eta_star"] = nullptr;
      row["ref_eta_up"] = nullptr;
      row["ref_form"] = "";
    }
    row["match"] = g.match;
    row["deviation"] = num(g.deviation);
    row["status"] = status;
    if (c.timings) row["seconds"] = seconds_since(t1);
    rows.push_back(row);
  }
  return rows;
}

Json table_robustness(const RunConfig& c) {
  const int dmax = c.dmax > 0 ? c.dmax : 7;
  const int kmax = c.kmax > 0 ? c.kmax : 8;
  std::vector<std::pair<int, int>> cells;
  for (int d = 2; d <= dmax; ++d) {
    if (d != 6 && !galois::prime_power(d)) continue;
    const int top = d == 6 ? 7 : d + 1;
    for (int k = 2; k <= std::min(top, kmax); ++k) cells.push_back({d, k});
  }
  const auto per_cell =
      map_cells(static_cast<int>(cells.size()), c.jobs, [&](int i) {
        Json rows = Json::array();
        for (auto& r : robustness_cell_rows(c, cells[i].first, cells[i].second))
          rows.push_back(r);
        return rows;
      });
  Json rows = Json::array();
  for (const auto& cell : per_cell) {
    for (const auto& r : cell) rows.push_back(r);
  }
  return rows;
}

Json table_counts(const RunConfig& c) {
  const int dmax = c.dmax > 0 ? c.dmax : 13;
  const int kmax = c.kmax > 0 ? c.kmax : 4;
  std::vector<std::pair<int, int>> cells;
  for (int d = 2; d <= dmax; ++d) {
    if (!galois::prime_power(d)) continue;
    for (int k = 3; k <= std::min(kmax, d + 1); ++k) cells.push_back({d, k});
  }
  const auto rows = map_cells(
      static_cast<int>(cells.size()), c.jobs, [&](int i) {
        const auto [d, k] = cells[i];
        const auto t0 = std::chrono::steady_clock::now();
        Json row;
        row["d"] = d;
        row["k"] = k;
        const auto ref = reference::inequivalence_count(d, k);
        try {
          ScanOptions so;
          so.group_tol = c.group_tol;
          so.budget = c.scan_budget;
          so.robustness.lambda = lambda_options(cell_config(c));
          const SubsetScan s = scan_subsets(d, k, so);
          row["subsets"] = s.records.size();
          row["count"] = s.distinct;
          row["count_1e-5"] = s.sensitivity.at(1e-5);
          row["count_1e-7"] = s.sensitivity.at(1e-7);
          row["ref"] = ref ? Json(*ref) : Json(nullptr);
          row["match"] = ref ? Json(*ref == s.distinct) : Json(nullptr);
          row["status"] = "ok";
        } catch (const Error& e) {
          row["subsets"] = nullptr;
          row["count"] = nullptr;
          row["count_1e-5"] = nullptr;
          row["count_1e-7"] = nullptr;
          row["ref"] = ref ? Json(*ref) : Json(nullptr);
          row["match"] = nullptr;
          row["status"] = kind_name(e.kind());
        }
        if (c.timings) row["seconds"] = seconds_since(t0);
        return row;
      });
  return Json(rows);
}

Json table_low(const RunConfig& c) {
  const int dmax = c.dmax > 0 ? c.dmax : 7;
  const int kmax = c.kmax > 0 ? c.kmax : 8;
  Json rows = Json::array();
  for (const auto& e : reference::lower_bound_table()) {
    if (e.d > dmax || e.k > kmax) continue;
    const BoundReport b = eta_low_recursive(e.k, e.d);
    Json row;
    row["d"] = e.d;
    row["k"] = e.k;
    row["eta_low"] = num(b.value);
    Json alphas = Json::array();
    for (double a : b.alphas) alphas.push_back(num(a));
    row["alphas"] = alphas;
    row["ref"] = e.value;
    row["deviation"] = num(std::abs(b.value - e.value));
    row["match"] = std::abs(b.value - e.value) <= kLowTol;
    row["status"] = "ok";
    rows.push_back(row);
  }
  std::stable_sort(rows.begin(), rows.end(), [](const Json& a, const Json& b) {
    return std::pair(a["d"].get<int>(), a["k"].get<int>()) <
           std::pair(b["d"].get<int>(), b["k"].get<int>());
  });
  return rows;
}

Json table_analytic(const RunConfig& c) {
  const int dmax = c.dmax > 0 ? c.dmax : 9;
  const int kmax = c.kmax > 0 ? c.kmax : 9;
  std::vector<reference::AnalyticEntry> entries;
  for (const auto& e : reference::analytic_table()) {
    if (e.d <= dmax && static_cast<int>(e.subset.size()) <= kmax) {
      entries.push_back(e);
    }
  }
  const auto rows = map_cells(
      static_cast<int>(entries.size()), c.jobs, [&](int i) {
        const auto& e = entries[i];
        const auto t0 = std::chrono::steady_clock::now();
        Json row;
        row["d"] = e.d;
        row["k"] = e.subset.size();
        row["subset"] = e.subset;
        row["form"] = e.closed_form;
        row["ref"] = num(e.value);
        try {
          const RobustnessReport rep =
              robustness(to_measurements(standard_mubs(e.d), e.subset),
                         robustness_options(cell_config(c)));
          row["eta_star"] = num_or_null(rep.eta);
          row["method"] = rep.method;
          if (rep.eta) {
            const double tol =
                rep.method == "certificate" ? kClosedFormTol : kNumericTol;
            const double dev = std::abs(*rep.eta - e.value);
            row["deviation"] = num(dev);
            row["tolerance"] = tol;
            row["match"] = dev <= tol;
            row["status"] = "ok";
          } else {
            row["deviation"] = nullptr;
            row["tolerance"] = nullptr;
            row["match"] = nullptr;
            row["status"] = "skipped";
          }
        } catch (const Error& err) {
          row["eta_star"] = nullptr;
          row["method"] = "error";
          row["deviation"] = nullptr;
          row["tolerance"] = nullptr;
          row["match"] = nullptr;
          row["status"] = kind_name(err.kind());
        }
        if (c.timings) row["seconds"] = seconds_since(t0);
        return row;
      });
  return Json(rows);
}

}  // namespace

Result cmd_table(const RunConfig& c) {
  Result r;
  Json rows;
  if (c.which == "1") {
    rows = table_robustness(c);
  } else if (c.which == "2") {
    rows = table_counts(c);
  } else if (c.which == "low") {
    rows = table_low(c);
  } else if (c.which == "analytic") {
    rows = table_analytic(c);
  } else {
    throw InvalidInput("unknown table '" + c.which +
                       "' (expected 1, 2, low or analytic)");
  }
  int matched = 0, mismatched = 0, skipped = 0;
  for (const auto& row : rows) {
    if (row["match"].is_boolean()) {
      (row["match"].get<bool>() ? matched : mismatched)++;
    }
    if (row["status"] != "ok") ++skipped;
  }
  r.body["table"] = c.which;
  r.body["matched"] = matched;
  r.body["mismatched"] = mismatched;
  r.body["not_ok"] = skipped;
  r.body["rows"] = rows;
  if (mismatched > 0) r.exit_code = 4;
  return r;
}

}  // namespace incompat::cli
