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

#include <cmath>
#include <set>

#include "incompat/error.hpp"
#include "json.hpp"

namespace incompat {

namespace {

using galois::FieldElement;
using galois::RingElement;

// Permutation induced by u on the columns of basis b, or empty if u does not
// map every basis vector onto a multiple of another one.
std::vector<int> outcome_permutation(const Matrix& u, const Matrix& b) {
  const Matrix m = b.adjoint() * u * b;
  const int d = static_cast<int>(b.cols());
  std::vector<int> perm(d, -1);
  std::vector<bool> hit(d, false);
  for (int a = 0; a < d; ++a) {
    for (int row = 0; row < d; ++row) {
      if (std::abs(std::abs(m(row, a)) - 1.0) < 1e-8) {
        perm[a] = row;
        break;
      }
    }
    if (perm[a] < 0 || hit[perm[a]]) return {};
    hit[perm[a]] = true;
  }
  return perm;
}

void attach_symmetries(MubSet& m, const std::vector<Matrix>& candidates) {
  m.symmetries.clear();
  for (const Matrix& u : candidates) {
    OutcomeSymmetry s;
    s.unitary = u;
    bool ok = true;
    for (const Basis& b : m.bases) {
      auto perm = outcome_permutation(u, b.vectors);
      if (perm.empty()) {
        ok = false;
        break;
      }
      s.perms.push_back(std::move(perm));
    }
    if (ok) m.symmetries.push_back(std::move(s));
  }
}

// X(b) Z(c) for all b, c given the shift table and the phase table.
std::vector<Matrix> monomials(const std::vector<std::vector<int>>& shift,
                              const std::vector<std::vector<Complex>>& phase) {
  const int d = static_cast<int>(shift.size());
  std::vector<Matrix> out;
  for (int b = 0; b < d; ++b) {
    for (int c = 0; c < d; ++c) {
      Matrix u = Matrix::Zero(d, d);
      for (int l = 0; l < d; ++l) u(shift[b][l], l) = phase[c][l];
      out.push_back(std::move(u));
    }
  }
  return out;
}

std::vector<Matrix> odd_displacements(const galois::FiniteField& f) {
  const auto els = f.elements();
  const int d = f.order();
  const Complex omega = root_of_unity(f.characteristic());
  std::vector<std::vector<int>> shift(d, std::vector<int>(d));
  std::vector<std::vector<Complex>> phase(d, std::vector<Complex>(d));
  for (int b = 0; b < d; ++b) {
    for (int l = 0; l < d; ++l) {
      shift[b][l] = (els[l] + els[b]).index();
      phase[b][l] = std::pow(omega, (els[b] * els[l]).trace());
    }
  }
  return monomials(shift, phase);
}

std::vector<Matrix> even_displacements(const galois::GaloisRing& ring) {
  const auto& t = ring.teichmuller();
  const int d = static_cast<int>(t.size());
  std::vector<std::vector<int>> shift(d, std::vector<int>(d));
  std::vector<std::vector<Complex>> phase(d, std::vector<Complex>(d));
  auto position = [&](const RingElement& e) {
    for (int i = 0; i < d; ++i) {
      if (t[i] == e) return i;
    }
    throw NumericalFailure("element is not in the Teichmuller set");
  };
  for (int b = 0; b < d; ++b) {
    for (int l = 0; l < d; ++l) {
      shift[b][l] = position(galois::teichmuller_decompose(t[l] + t[b]).unit_part);
      phase[b][l] = ((t[b] * t[l]).trace() % 2 == 0) ? 1.0 : -1.0;
    }
  }
  return monomials(shift, phase);
}

Basis computational(int d) {
  return {Matrix::Identity(d, d), "computational"};
}

std::vector<Matrix> candidates_for(const MubMetadata& meta, int d) {
  if (meta.convention == "odd-field") {
    return odd_displacements(galois::field_construct(meta.p, meta.r, d));
  }
  if (meta.convention == "even-galois-ring") {
    return even_displacements(galois::ring_construct(meta.r, d));
  }
  return {};
}

}  // namespace

MubSet build_mub_odd(int p, int r, int size_budget) {
  if (p == 2) throw InvalidInput("build_mub_odd requires an odd prime");
  const galois::FiniteField f = galois::field_construct(p, r, size_budget);
  const int d = f.order();
  const auto els = f.elements();
  std::vector<std::vector<int>> tr(d, std::vector<int>(d));
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) tr[i][j] = (els[i] * els[j]).trace();
  }
  std::vector<int> square(d);
  for (int l = 0; l < d; ++l) square[l] = (els[l] * els[l]).index();

  const Complex omega = root_of_unity(p);
  std::vector<Complex> powers(p);
  for (int e = 0; e < p; ++e) powers[e] = std::pow(omega, e);
  const double norm = 1.0 / std::sqrt(static_cast<double>(d));

  MubSet m;
  m.dim = d;
  m.metadata = {p, r, f.modulus(), "odd-field"};
  for (int x = 0; x < d; ++x) {
    Matrix b(d, d);
    for (int a = 0; a < d; ++a) {
      for (int l = 0; l < d; ++l) {
        b(l, a) = norm * powers[(tr[x][square[l]] + tr[a][l]) % p];
      }
    }
    m.bases.push_back({std::move(b), "x=" + std::to_string(x)});
  }
  m.bases.push_back(computational(d));
  attach_symmetries(m, odd_displacements(f));
  return m;
}

MubSet build_mub_even(int r, int size_budget) {
  const galois::GaloisRing ring = galois::ring_construct(r, size_budget);
  const auto& t = ring.teichmuller();
  const int d = static_cast<int>(t.size());
  const RingElement two = ring.from_int(2);
  const Complex powers[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  const double norm = 1.0 / std::sqrt(static_cast<double>(d));

  MubSet m;
  m.dim = d;
  m.metadata = {2, r, ring.modulus(), "even-galois-ring"};
  for (int x = 0; x < d; ++x) {
    Matrix b(d, d);
    for (int a = 0; a < d; ++a) {
      const RingElement shifted = t[x] + two * t[a];
      for (int l = 0; l < d; ++l) {
        b(l, a) = norm * powers[(shifted * t[l]).trace()];
      }
    }
    m.bases.push_back({std::move(b), "x=" + std::to_string(x)});
  }
  m.bases.push_back(computational(d));
  attach_symmetries(m, even_displacements(ring));
  return m;
}

MubSet build_mub(int d, int size_budget) {
  const auto pp = galois::prime_power(d);
  if (!pp) {
    throw InvalidInput("dimension " + std::to_string(d) +
                       " is not a prime power; complete MUB constructions are "
                       "only known for prime-power dimensions");
  }
  if (d > size_budget) {
    throw BudgetExceeded("dimension " + std::to_string(d) +
                         " exceeds size budget " + std::to_string(size_budget));
  }
  return pp->first == 2 ? build_mub_even(pp->second, size_budget)
                        : build_mub_odd(pp->first, pp->second, size_budget);
}

MubSet pauli_triple() {
  const double s = 1.0 / std::sqrt(2.0);
  const Complex i(0.0, 1.0);
  Matrix x(2, 2), y(2, 2);
  x << s, s, s, -s;
  y << s, s, s * i, -s * i;
  MubSet m;
  m.dim = 2;
  m.metadata = {2, 1, {}, "pauli"};
  m.bases = {computational(2), {x, "x"}, {y, "y"}};
  Matrix pz(2, 2), px(2, 2);
  pz << 1, 0, 0, -1;
  px << 0, 1, 1, 0;
  attach_symmetries(m, {Matrix::Identity(2, 2), pz, px, px * pz});
  return m;
}

MubSet tensor_product(const MubSet& a, const MubSet& b) {
  MubSet m;
  m.dim = a.dim * b.dim;
  m.metadata = {0, 0, {}, "product(" + a.metadata.convention + "," +
                              b.metadata.convention + ")"};
  const size_t n = std::min(a.bases.size(), b.bases.size());
  for (size_t i = 0; i < n; ++i) {
    const Matrix& u = a.bases[i].vectors;
    const Matrix& v = b.bases[i].vectors;
    Matrix w(m.dim, m.dim);
    for (int r1 = 0; r1 < a.dim; ++r1) {
      for (int c1 = 0; c1 < a.dim; ++c1) {
        w.block(r1 * b.dim, c1 * b.dim, b.dim, b.dim) = u(r1, c1) * v;
      }
    }
    m.bases.push_back(
        {std::move(w), a.bases[i].label + "|" + b.bases[i].label});
  }
  std::vector<Matrix> candidates;
  for (const auto& sa : a.symmetries) {
    for (const auto& sb : b.symmetries) {
      Matrix w(m.dim, m.dim);
      for (int r1 = 0; r1 < a.dim; ++r1) {
        for (int c1 = 0; c1 < a.dim; ++c1) {
          w.block(r1 * b.dim, c1 * b.dim, b.dim, b.dim) =
              sa.unitary(r1, c1) * sb.unitary;
        }
      }
      candidates.push_back(std::move(w));
    }
  }
  attach_symmetries(m, candidates);
  return m;
}

UnbiasedReport verify_unbiased(const MubSet& m, double tol) {
  UnbiasedReport rep;
  const double target = 1.0 / std::sqrt(static_cast<double>(m.dim));
  const Matrix id = Matrix::Identity(m.dim, m.dim);
  for (size_t x = 0; x < m.bases.size(); ++x) {
    const Matrix& bx = m.bases[x].vectors;
    rep.max_gram_deviation = std::max(
        rep.max_gram_deviation, (bx.adjoint() * bx - id).cwiseAbs().maxCoeff());
    for (size_t y = x + 1; y < m.bases.size(); ++y) {
      const Matrix overlaps = bx.adjoint() * m.bases[y].vectors;
      const double dev = (overlaps.cwiseAbs().array() - target).abs().maxCoeff();
      if (rep.worst_x < 0 || dev > rep.max_deviation) {
        rep.max_deviation = dev;
        rep.worst_x = static_cast<int>(x);
        rep.worst_y = static_cast<int>(y);
      }
    }
  }
  rep.passed = rep.max_deviation <= tol && rep.max_gram_deviation <= tol;
  return rep;
}

MeasurementSet to_measurements(const MubSet& m, std::span<const int> subset) {
  if (subset.empty()) throw InvalidInput("subset is empty");
  std::set<int> seen;
  std::vector<Matrix> bases;
  for (int idx : subset) {
    if (idx < 0 || idx >= static_cast<int>(m.bases.size())) {
      throw InvalidInput("basis index " + std::to_string(idx) +
                         " out of range");
    }
    if (!seen.insert(idx).second) {
      throw InvalidInput("duplicate basis index " + std::to_string(idx));
    }
    bases.push_back(m.bases[idx].vectors);
  }
  MeasurementSet out = MeasurementSet::from_bases(bases);
  std::vector<OutcomeSymmetry> sym;
  for (const auto& s : m.symmetries) {
    OutcomeSymmetry r{s.unitary, {}};
    for (int idx : subset) r.perms.push_back(s.perms[idx]);
    sym.push_back(std::move(r));
  }
  out.set_symmetries(std::move(sym));
  return out;
}

MeasurementSet to_measurements(const MubSet& m) {
  std::vector<int> all(m.bases.size());
  for (size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
  return to_measurements(m, all);
}

std::string mub_to_json(const MubSet& m) {
  nlohmann::json j;
  j["dim"] = m.dim;
  j["p"] = m.metadata.p;
  j["r"] = m.metadata.r;
  j["modulus"] = m.metadata.modulus;
  j["convention"] = m.metadata.convention;
  nlohmann::json bases = nlohmann::json::array();
  for (const Basis& b : m.bases) {
    nlohmann::json vectors = nlohmann::json::array();
    for (int a = 0; a < b.vectors.cols(); ++a) {
      nlohmann::json v = nlohmann::json::array();
      for (int l = 0; l < b.vectors.rows(); ++l) {
        v.push_back({{"re", b.vectors(l, a).real()},
                     {"im", b.vectors(l, a).imag()}});
      }
      vectors.push_back(std::move(v));
    }
    bases.push_back({{"label", b.label}, {"vectors", std::move(vectors)}});
  }
  j["bases"] = std::move(bases);
  return j.dump(1);
}

MubSet mub_from_json(const std::string& text, double tol) {
  MubSet m;
  try {
    const nlohmann::json j = nlohmann::json::parse(text);
    m.dim = j.at("dim").get<int>();
    m.metadata.p = j.at("p").get<int>();
    m.metadata.r = j.at("r").get<int>();
    m.metadata.modulus = j.at("modulus").get<std::vector<int>>();
    m.metadata.convention = j.at("convention").get<std::string>();
    for (const auto& jb : j.at("bases")) {
      const auto& vectors = jb.at("vectors");
      if (static_cast<int>(vectors.size()) != m.dim) {
        throw InvalidInput("basis has wrong number of vectors");
      }
      Matrix b(m.dim, m.dim);
      for (int a = 0; a < m.dim; ++a) {
        if (static_cast<int>(vectors[a].size()) != m.dim) {
          throw InvalidInput("vector has wrong length");
        }
        for (int l = 0; l < m.dim; ++l) {
          b(l, a) = {vectors[a][l].at("re").get<double>(),
                     vectors[a][l].at("im").get<double>()};
        }
      }
      m.bases.push_back({std::move(b), jb.value("label", std::string())});
    }
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("malformed MUB JSON: ") + e.what());
  }
  const UnbiasedReport rep = verify_unbiased(m, tol);
  if (!rep.passed) {
    throw InvalidInput("imported bases are not mutually unbiased (deviation " +
                       std::to_string(rep.max_deviation) + ")");
  }
  attach_symmetries(m, candidates_for(m.metadata, m.dim));
  return m;
}

}  // namespace incompat
