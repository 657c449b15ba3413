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

#include "incompat/reference.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace incompat::reference {
namespace {

using std::numbers::pi;

const double kS2 = std::sqrt(2.0);
const double kS3 = std::sqrt(3.0);
const double kS5 = std::sqrt(5.0);

RobustnessEntry exact(int d, int k, double v, const char* form) {
  return {d, k, v, v, true, form};
}

RobustnessEntry tight(int d, int k, double v) {
  return {d, k, v, v, true, ""};
}

RobustnessEntry pair(int d, int k, std::optional<double> star,
                     std::optional<double> up) {
  return {d, k, star, up, false, ""};
}

}  // namespace

const std::vector<RobustnessEntry>& robustness_table() {
  static const std::vector<RobustnessEntry> t = {
      exact(2, 2, 1 / kS2, "1/sqrt(2)"),
      exact(2, 3, 1 / kS3, "1/sqrt(3)"),
      exact(3, 2, (1 + kS3) / 4, "(1+sqrt(3))/4"),
      exact(3, 3, std::cos(pi / 18) / kS3, "cos(pi/18)/sqrt(3)"),
      exact(3, 4, (1 + 3 * kS5) / 16, "(1+3sqrt(5))/16"),
      exact(4, 2, 2.0 / 3.0, "2/3"),
      pair(4, 3, 0.5469, 0.5556),
      exact(4, 4, 0.5, "1/2"),
      exact(4, 5, (3 + 2 * kS3) / 15, "(3+2sqrt(3))/15"),
      exact(5, 2, (3 + kS5) / 8, "(3+sqrt(5))/8"),
      exact(5, 3, (1 + kS5) / 6, "(1+sqrt(5))/6"),
      exact(5, 3, (13 - kS5 + std::sqrt(30 * (5 + kS5))) / 48,
            "(13-sqrt(5)+sqrt(30(5+sqrt(5))))/48"),
      pair(5, 4, 0.4615, 0.4616),
      tight(5, 5, 0.4179),
      tight(5, 6, 0.3863),
      exact(6, 2, (4 + std::sqrt(6.0)) / 10, "(4+sqrt(6))/10"),
      pair(6, 3, 0.5204, 0.5254),
      pair(6, 4, std::nullopt, 0.4550),
      pair(6, 5, std::nullopt, std::nullopt),
      pair(6, 6, std::nullopt, std::nullopt),
      pair(6, 7, std::nullopt, std::nullopt),
      exact(7, 2, (5 + std::sqrt(7.0)) / 12, "(5+sqrt(7))/12"),
      pair(7, 3, 0.5101, 0.5154),
      pair(7, 4, 0.4436, 0.4488),
      tight(7, 4, 0.4516),
      pair(7, 5, 0.4049, 0.4120),
      pair(7, 6, 0.3754, 0.3867),
      tight(7, 7, 0.3685),
      tight(7, 8, 0.3318),
  };
  return t;
}

std::vector<RobustnessEntry> robustness_cell(int d, int k) {
  std::vector<RobustnessEntry> out;
  for (const auto& e : robustness_table()) {
    if (e.d == d && e.k == k) out.push_back(e);
  }
  return out;
}

const std::vector<AnalyticEntry>& analytic_table() {
  static const std::vector<AnalyticEntry> t = {
      {3, {0, 1, 2}, std::cos(pi / 18) / kS3, "cos(pi/18)/sqrt(3)", true},
      {3, {0, 1, 2, 3}, (1 + 3 * kS5) / 16, "(1+3sqrt(5))/16", true},
      {4, {0, 1, 2, 3}, 0.5, "1/2", true},
      {4, {0, 1, 2, 3, 4}, (3 + 2 * kS3) / 15, "(3+2sqrt(3))/15", true},
      {5, {0, 1, 3}, (1 + kS5) / 6, "(1+sqrt(5))/6", true},
      {5, {0, 1, 2}, (13 - kS5 + std::sqrt(30 * (5 + kS5))) / 48,
       "(13-sqrt(5)+sqrt(30(5+sqrt(5))))/48", true},
      {7, {0, 1, 2, 3, 4, 5, 6}, 0.368488114549788,
       "largest root of 56X^3-28X^2+1", true},
      {8, {0, 1, 2, 3, 4, 5, 6, 7, 8}, (3 + 2 * kS3) / 21, "(3+2sqrt(3))/21",
       true},
      {9, {0, 1, 2}, 0.5, "1/2", false},
      {9, {0, 1, 3}, (1 + std::cos(pi / 9)) / 4, "(1+cos(pi/9))/4", true},
      {9, {0, 1, 3, 4}, (8 + 3 * kS3) / 32, "(8+3sqrt(3))/32", true},
      {9, {0, 1, 2, 3, 4, 5}, (3 + std::sqrt(7.0)) / 16, "(3+sqrt(7))/16",
       true},
  };
  return t;
}

const std::vector<LowEntry>& lower_bound_table() {
  static const std::vector<LowEntry> t = {
      {2, 2, 0.7071}, {3, 2, 0.6830}, {4, 2, 0.6667}, {5, 2, 0.6545},
      {6, 2, 0.6449}, {7, 2, 0.6371}, {2, 3, 0.5774}, {3, 3, 0.5468},
      {4, 3, 0.5263}, {5, 3, 0.5113}, {6, 3, 0.4996}, {7, 3, 0.4902},
      {3, 4, 0.4672}, {4, 4, 0.4455}, {5, 4, 0.4297}, {6, 4, 0.4175},
      {7, 4, 0.4076}, {4, 5, 0.3918}, {5, 5, 0.3758}, {6, 5, 0.3636},
      {7, 5, 0.3537}, {5, 6, 0.3371}, {6, 6, 0.3250}, {7, 6, 0.3153},
      {6, 7, 0.2958}, {7, 7, 0.2863}, {7, 8, 0.2634},
  };
  return t;
}

const std::vector<CountEntry>& inequivalence_table() {
  static const std::vector<CountEntry> t = [] {
    const int dims[] = {5, 7, 9, 11, 13, 16, 17, 19, 23, 25, 27, 29, 31};
    // rows k = 3..8; -1 marks a value that was not computed
    const int rows[6][13] = {
        {2, 1, 2, 1, 2, 1, 2, 1, 1, 2, 1, 2, 1},
        {1, 2, 3, 2, 4, 1, 4, 4, 4, 3, 2, 6, 6},
        {1, 1, 3, 2, 5, 1, 8, 5, 6, 6, 2, 19, 11},
        {1, 1, 3, 4, 7, 1, 15, 13, 22, 9, 6, 67, 50},
        {0, 1, 2, 2, 10, 1, 20, 18, 32, 38, 9, 145, 92},
        {0, 1, 1, 2, 7, 2, 23, 22, 35, -1, -1, -1, -1},
    };
    std::vector<CountEntry> out;
    for (int d : {4, 8, 32}) {
      for (int k = 3; k <= std::min(8, d + 1); ++k) out.push_back({d, k, 1});
    }
    for (int r = 0; r < 6; ++r) {
      for (int c = 0; c < 13; ++c) {
        const int v = rows[r][c];
        if (v == 0) continue;
        out.push_back({dims[c], r + 3,
                       v < 0 ? std::nullopt : std::optional<int>(v)});
      }
    }
    return out;
  }();
  return t;
}

std::optional<int> inequivalence_count(int d, int k) {
  for (const auto& e : inequivalence_table()) {
    if (e.d == d && e.k == k) return e.count;
  }
  return std::nullopt;
}

const std::vector<QuadrupleBound>& quadruple_bounds() {
  static const std::vector<QuadrupleBound> t = {
      {6, 2.183, 0.4550, 0.4175},
      {10, std::nullopt, 0.4213, 0.3864},
  };
  return t;
}

}  // namespace incompat::reference
