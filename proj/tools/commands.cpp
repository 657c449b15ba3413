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

#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include "incompat/analysis.hpp"
#include "incompat/bounds.hpp"
#include "incompat/error.hpp"
#include "incompat/galois.hpp"
#include "incompat/mub.hpp"

namespace incompat::cli {
namespace {

std::string fmt12(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

Json parse(const std::string& s) { return Json::parse(s); }

std::vector<int> chosen_subset(const RunConfig& c, int available) {
  if (!c.subset.empty()) {
    if (static_cast<int>(c.subset.size()) != c.k) {
      throw InvalidInput("--subset lists " + std::to_string(c.subset.size()) +
                         " bases but k = " + std::to_string(c.k));
    }
    return c.subset;
  }
  if (c.k < 1 || c.k > available) {
    throw InvalidInput("k = " + std::to_string(c.k) + " but only " +
                       std::to_string(available) + " bases are available");
  }
  std::vector<int> s(c.k);
  std::iota(s.begin(), s.end(), 0);
  return s;
}

MubSet mubs_for(int d) {
  if (d < 2) throw InvalidInput("d must be at least 2");
  if (d != 6 && !galois::prime_power(d)) {
    throw InvalidInput("d = " + std::to_string(d) +
                       " is not a prime power: complete sets of MUB are only "
                       "constructed for prime-power dimensions");
  }
  return standard_mubs(d);
}

std::string csv_cell(const Json& v) {
  if (v.is_null()) return "";
  if (v.is_number_float()) return fmt12(v.get<double>());
  if (v.is_string()) {
    std::string s = v.get<std::string>();
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
    return q + "\"";
  }
  if (v.is_array()) {
    std::string s;
    for (size_t i = 0; i < v.size(); ++i) s += (i ? ";" : "") + csv_cell(v[i]);
    return s;
  }
  if (v.is_object()) return csv_cell(Json(v.dump()));
  return v.dump();
}

Bloch parse_bloch(const std::string& text) {
  Bloch b{};
  std::stringstream ss(text);
  std::string part;
  int i = 0;
  while (std::getline(ss, part, ',')) {
    if (i == 3) throw InvalidInput("Bloch vector needs 3 components");
    try {
      b[i++] = std::stod(part);
    } catch (const std::exception&) {
      throw InvalidInput("cannot parse '" + part + "' as a number");
    }
  }
  if (i != 3) throw InvalidInput("Bloch vector needs 3 components");
  return b;
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

}  // namespace

double num(double v) {
  if (!std::isfinite(v)) return v;
  return std::strtod(fmt12(v).c_str(), nullptr);
}

Json num_or_null(const std::optional<double>& v) {
  return v ? Json(num(*v)) : Json(nullptr);
}

LambdaOptions lambda_options(const RunConfig& c) {
  LambdaOptions o;
  o.tie_tol = c.tie_tol;
  o.budget = c.tuple_budget;
  o.jobs = c.jobs;
  return o;
}

RobustnessOptions robustness_options(const RunConfig& c) {
  RobustnessOptions o;
  o.lambda = lambda_options(c);
  o.sdp.gap_tol = c.gap_tol;
  o.feasibility_sdp.gap_tol = c.gap_tol;
  o.block_budget = c.block_budget;
  return o;
}

Json config_json(const RunConfig& c) {
  Json j;
  j["command"] = c.command;
  if (!c.which.empty()) j["which"] = c.which;
  j["d"] = c.d;
  j["k"] = c.k;
  j["subset"] = c.subset;
  j["tie_tol"] = c.tie_tol;
  j["gap_tol"] = c.gap_tol;
  j["group_tol"] = c.group_tol;
  j["tuple_budget"] = c.tuple_budget;
  j["block_budget"] = c.block_budget;
  j["scan_budget"] = c.scan_budget;
  j["dmax"] = c.dmax;
  j["kmax"] = c.kmax;
  j["exact"] = c.exact;
  j["eta"] = c.eta;
  j["vectors"] = c.vectors;
  j["samples"] = c.samples;
  j["seed"] = c.seed;
  j["output"] = c.output;
  j["json_export"] = c.json_export;
  j["format"] = c.format;
  j["jobs"] = c.jobs;
  j["timings"] = c.timings;
  return j;
}

std::string render(const RunConfig& c, const Result& r) {
  if (c.format == "json") {
    Json out;
    out["tool"] = "incompat";
    out["version"] = INCOMPAT_VERSION;
    out["config"] = config_json(c);
    out["result"] = r.body;
    return out.dump(2) + "\n";
  }
  std::ostringstream os;
  os << "# incompat " << INCOMPAT_VERSION << "\n";
  os << "# config " << config_json(c).dump() << "\n";
  if (!r.csv.empty()) {
    os << r.csv;
    return os.str();
  }
  if (r.body.contains("rows") && r.body["rows"].is_array() &&
      !r.body["rows"].empty()) {
    for (const auto& [key, v] : r.body.items()) {
      if (key != "rows") os << "# " << key << " " << v.dump() << "\n";
    }
    const Json& rows = r.body["rows"];
    std::vector<std::string> cols;
    for (const auto& row : rows) {
      for (const auto& [key, v] : row.items()) {
        if (std::find(cols.begin(), cols.end(), key) == cols.end()) {
          cols.push_back(key);
        }
      }
    }
    for (size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
    os << "\n";
    for (const auto& row : rows) {
      for (size_t i = 0; i < cols.size(); ++i) {
        os << (i ? "," : "")
           << (row.contains(cols[i]) ? csv_cell(row[cols[i]]) : "");
      }
      os << "\n";
    }
    return os.str();
  }
  os << "key,value\n";
  for (const auto& [key, v] : r.body.items()) {
    os << key << "," << csv_cell(v) << "\n";
  }
  return os.str();
}

Result cmd_mub(const RunConfig& c) {
  if (c.d == 6) {
    throw InvalidInput(
        "d = 6 is not a prime power: complete sets of MUB are only "
        "constructed for prime-power dimensions");
  }
  const MubSet m = mubs_for(c.d);
  const UnbiasedReport u = verify_unbiased(m);
  Result r;
  Json& j = r.body;
  j["d"] = m.dim;
  j["bases"] = m.bases.size();
  j["convention"] = m.metadata.convention;
  j["p"] = m.metadata.p;
  j["r"] = m.metadata.r;
  j["modulus"] = m.metadata.modulus;
  j["unbiased"] = {{"passed", u.passed},
                   {"max_deviation", num(u.max_deviation)},
                   {"max_gram_deviation", num(u.max_gram_deviation)}};
  if (!c.json_export.empty()) {
    const std::string text = mub_to_json(m);
    {
      std::ofstream f(c.json_export);
      if (!f) throw InvalidInput("cannot write " + c.json_export);
      f << text;
    }
    std::ifstream f(c.json_export);
    std::stringstream buf;
    buf << f.rdbuf();
    const MubSet back = mub_from_json(buf.str());
    double diff = 0.0;
    for (size_t i = 0; i < m.bases.size(); ++i) {
      diff = std::max(diff, (m.bases[i].vectors - back.bases[i].vectors)
                                .cwiseAbs()
                                .maxCoeff());
    }
    j["export"] = {{"path", c.json_export},
                   {"round_trip_max_deviation", num(diff)}};
  }
  if (!u.passed) r.exit_code = 4;
  return r;
}

Result cmd_bounds(const RunConfig& c) {
  if (c.d < 2 || c.k < 1) throw InvalidInput("need d >= 2 and k >= 1");
  Result r;
  Json rows = Json::array();
  auto add = [&](const BoundReport& b) {
    Json row = parse(to_json(b));
    rows.push_back(row);
  };
  const bool constructible =
      c.d == 6 ? c.k <= 3 : galois::prime_power(c.d) && c.k <= c.d + 1;
  if (constructible) {
    const MubSet m = mubs_for(c.d);
    std::vector<int> subset = chosen_subset(c, static_cast<int>(m.bases.size()));
    add(eta_up_rank1(to_measurements(m, subset), lambda_options(c)));
  }
  add(eta_up_simple(c.k, c.d));
  if (c.k >= 2) add(eta_low_recursive(c.k, c.d));
  if (c.k == 4) {
    add(eta_up_charpoly_k4(c.d, CharpolyVariant::kPublished));
    add(eta_up_charpoly_k4(c.d, CharpolyVariant::kExact));
  }
  r.body["d"] = c.d;
  r.body["k"] = c.k;
  r.body["measurements_constructed"] = constructible;
  r.body["rows"] = rows;
  return r;
}

Result cmd_robustness(const RunConfig& c) {
  const MubSet m = mubs_for(c.d);
  const std::vector<int> subset =
      chosen_subset(c, static_cast<int>(m.bases.size()));
  const RobustnessReport rep =
      robustness(to_measurements(m, subset), robustness_options(c));
  Result r;
  r.body = parse(to_json(rep, c.timings));
  r.body["subset"] = subset;
  if (!rep.eta) r.exit_code = 3;
  return r;
}

Result cmd_scan(const RunConfig& c) {
  ScanOptions o;
  o.compute_exact = c.exact;
  o.group_tol = c.group_tol;
  o.budget = c.scan_budget;
  o.jobs = c.jobs;
  o.robustness = robustness_options(c);
  o.robustness.lambda.jobs = 1;
  const SubsetScan s = scan_subsets(c.d, c.k, o);
  Result r;
  r.body = parse(scan_to_json(s));
  r.csv = scan_to_csv(s);
  return r;
}

Result cmd_qubit(const RunConfig& c) {
  Result r;
  Json& j = r.body;
  if (!c.vectors.empty()) {
    std::vector<Bloch> a;
    std::stringstream ss(c.vectors);
    std::string part;
    while (std::getline(ss, part, ';')) a.push_back(parse_bloch(part));
    if (a.size() != 2 && a.size() != 3) {
      throw InvalidInput("--vectors takes 2 or 3 Bloch vectors");
    }
    const double star =
        a.size() == 2 ? qubit_eta2(a[0], a[1]) : qubit_eta3(a[0], a[1], a[2]);
    const double eta = c.eta >= 0 ? c.eta : star;
    j["n"] = a.size();
    j["eta_star"] = num(star);
    j["eta"] = num(eta);
    j["parent_positive"] = qubit_parent_positivity(a, eta);
    double lo = 1.0;
    for (const Matrix& g : qubit_parent(a, eta)) {
      lo = std::min(lo, min_eigenvalue(HermitianOperator(g)));
    }
    j["min_eigenvalue"] = num(lo);
    return r;
  }
  if (c.samples == 0) throw InvalidInput("--samples must be positive");
  std::mt19937_64 rng(c.seed);
  const double b2 = 1 / std::sqrt(2.0), b3 = 1 / std::sqrt(3.0);
  double min2 = 2.0, min3 = 2.0, dev2 = 0.0, dev3 = 0.0;
  std::uint64_t below2 = 0, below3 = 0;
  for (std::uint64_t i = 0; i < c.samples; ++i) {
    const Bloch a = random_unit(rng), b = random_unit(rng), e = random_unit(rng);
    const double v2 = qubit_eta2(a, b);
    const double v3 = qubit_eta3(a, b, e);
    if (v2 < b2 - 1e-9) ++below2;
    if (v3 < b3 - 1e-9) ++below3;
    if (v2 < min2) {
      min2 = v2;
      dev2 = std::abs(std::acos(std::clamp(dot(a, b), -1.0, 1.0)) -
                      std::acos(0.0));
    }
    if (v3 < min3) {
      min3 = v3;
      dev3 = std::max({std::abs(dot(a, b)), std::abs(dot(b, e)),
                       std::abs(dot(a, e))});
    }
  }
  j["samples"] = c.samples;
  j["seed"] = c.seed;
  j["pairs"] = {{"bound", num(b2)},
                {"min", num(min2)},
                {"violations", below2},
                {"angle_deviation_at_min", num(dev2)}};
  j["triples"] = {{"bound", num(b3)},
                  {"min", num(min3)},
                  {"violations", below3},
                  {"max_overlap_at_min", num(dev3)}};
  if (below2 || below3) r.exit_code = 4;
  return r;
}

Result cmd_steering(const RunConfig& c) {
  const MubSet m = mubs_for(c.d);
  const std::vector<int> subset =
      chosen_subset(c, static_cast<int>(m.bases.size()));
  const MeasurementSet ms = to_measurements(m, subset);
  const double eta = c.eta >= 0 ? c.eta : 0.5;
  const int d = c.d;
  Vector psi = Vector::Zero(d * d);
  for (int i = 0; i < d; ++i) psi(i * d + i) = 1.0 / std::sqrt(d);
  std::mt19937_64 rng(c.seed);
  std::normal_distribution<double> g;
  Vector rnd(d * d);
  for (int i = 0; i < d * d; ++i) rnd(i) = Complex(g(rng), g(rng));
  rnd /= rnd.norm();

  Result r;
  Json& j = r.body;
  j["d"] = d;
  j["k"] = c.k;
  j["subset"] = subset;
  j["eta"] = num(eta);
  double worst = 0.0;
  Json states = Json::array();
  for (auto [name, state] :
       {std::pair<const char*, const Vector*>{"maximally-entangled", &psi},
        {"random", &rnd}}) {
    const double dev = steering_identity_check(*state, ms, eta);
    const double ns = assemblage_noisy_state(*state, ms, eta)
                          .no_signalling_deviation(reduced_state_b(*state, d));
    worst = std::max({worst, dev, ns});
    states.push_back({{"state", name},
                      {"identity_deviation", num(dev)},
                      {"no_signalling_deviation", num(ns)}});
  }
  j["states"] = states;
  j["passed"] = worst <= 1e-12;

  RobustnessReport rep = robustness(ms, robustness_options(c));
  j["w_star"] = num_or_null(rep.eta);
  j["method"] = rep.method;
  j["lower"] = num(rep.lower);
  j["upper"] = num(rep.upper);
  j["statement"] =
      rep.eta ? "the noisy state with weight w on |psi> is steerable with "
                "these measurements iff w > w* = eta*"
              : "eta* not computed within budget; w* lies in [lower, upper]";
  if (worst > 1e-12) r.exit_code = 4;
  return r;
}

}  // namespace incompat::cli
