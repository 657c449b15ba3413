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

// Exact arithmetic in GF(p^r) and in the Galois ring GR(4, r).
//
// Both structures are quotients Z_n[X]/(f) with f monic of degree r; elements
// are dense coefficient vectors stored low-degree first. Element enumeration
// (and therefore every basis/vector index built on top of it) is lexicographic
// over coefficient vectors with the constant coefficient most significant.

#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace incompat::galois {

inline constexpr int kDefaultSizeBudget = 64;

bool is_prime(int n);

/// (p, r) with d == p^r, or nullopt when d is not a prime power.
std::optional<std::pair<int, int>> prime_power(int d);

namespace detail {

struct QuotientRing {
  int coeff_modulus = 0;       // p for fields, 4 for GR(4, r)
  int degree = 0;              // r
  std::vector<int> modulus;    // monic, size degree + 1

  std::vector<int> reduce(std::vector<int> poly) const;
  std::vector<int> add(std::span<const int> a, std::span<const int> b) const;
  std::vector<int> sub(std::span<const int> a, std::span<const int> b) const;
  std::vector<int> mul(std::span<const int> a, std::span<const int> b) const;
  std::vector<int> pow(std::span<const int> a, std::uint64_t n) const;
  int size() const;
  int index_of(std::span<const int> a) const;
  std::vector<int> coeffs_of(int index) const;
};

}  // namespace detail

class FiniteField;
class GaloisRing;
class RingElement;
struct TeichmullerParts;

class FieldElement {
 public:
  std::span<const int> coeffs() const { return coeffs_; }
  int index() const;
  bool is_zero() const;

  FieldElement operator+(const FieldElement& other) const;
  FieldElement operator-(const FieldElement& other) const;
  FieldElement operator-() const;
  FieldElement operator*(const FieldElement& other) const;
  FieldElement pow(std::uint64_t n) const;
  /// Throws InvalidInput for zero.
  FieldElement inverse() const;

  /// Absolute trace a + a^p + ... + a^{p^{r-1}}, read off in {0, ..., p-1}.
  int trace() const;

  bool operator==(const FieldElement& other) const;

 private:
  friend class FiniteField;
  FieldElement(std::shared_ptr<const detail::QuotientRing> ring,
               std::vector<int> coeffs);
  void check_same_parent(const FieldElement& other) const;

  std::shared_ptr<const detail::QuotientRing> ring_;
  std::vector<int> coeffs_;
};

class FiniteField {
 public:
  int characteristic() const { return ring_->coeff_modulus; }
  int degree() const { return ring_->degree; }
  int order() const { return ring_->size(); }
  const std::vector<int>& modulus() const { return ring_->modulus; }

  FieldElement zero() const;
  FieldElement one() const;
  /// Element of the prime subfield.
  FieldElement from_int(int value) const;
  FieldElement from_coeffs(std::vector<int> coeffs) const;
  FieldElement element(int index) const;
  std::vector<FieldElement> elements() const;

 private:
  friend FiniteField field_construct(int p, int r, int size_budget);
  explicit FiniteField(std::shared_ptr<const detail::QuotientRing> ring)
      : ring_(std::move(ring)) {}

  std::shared_ptr<const detail::QuotientRing> ring_;
};

/// GF(p^r) with the lexicographically smallest monic irreducible modulus.
/// Throws InvalidInput for non-prime p or r < 1, BudgetExceeded when
/// p^r > size_budget.
FiniteField field_construct(int p, int r,
                            int size_budget = kDefaultSizeBudget);

/// Trial division against every monic polynomial of degree <= r/2.
bool is_irreducible(std::span<const int> poly, int p);

class RingElement {
 public:
  std::span<const int> coeffs() const { return coeffs_; }
  int index() const;
  bool is_zero() const;

  RingElement operator+(const RingElement& other) const;
  RingElement operator-(const RingElement& other) const;
  RingElement operator-() const;
  RingElement operator*(const RingElement& other) const;
  RingElement pow(std::uint64_t n) const;

  /// Generalized Frobenius t + 2u -> t^2 + 2u^2.
  RingElement frobenius() const;
  /// Sum of the r Frobenius images; a value in Z_4.
  int trace() const;

  bool operator==(const RingElement& other) const;

 private:
  friend class GaloisRing;
  friend TeichmullerParts teichmuller_decompose(const RingElement& a);
  RingElement(std::shared_ptr<const detail::QuotientRing> ring,
              std::vector<int> coeffs);
  void check_same_parent(const RingElement& other) const;

  std::shared_ptr<const detail::QuotientRing> ring_;
  std::vector<int> coeffs_;
};

struct TeichmullerParts {
  RingElement unit_part;  // t
  RingElement two_part;   // u, with a == t + 2u
};

/// Unique decomposition a = t + 2u with t, u in the Teichmuller set.
TeichmullerParts teichmuller_decompose(const RingElement& a);

class GaloisRing {
 public:
  int degree() const { return ring_->degree; }
  int order() const { return ring_->size(); }
  const std::vector<int>& modulus() const { return ring_->modulus; }
  /// Field modulus over Z_2 that the ring modulus lifts.
  const std::vector<int>& residue_modulus() const { return residue_modulus_; }

  RingElement zero() const;
  RingElement one() const;
  RingElement from_int(int value) const;
  RingElement from_coeffs(std::vector<int> coeffs) const;
  RingElement element(int index) const;
  std::vector<RingElement> elements() const;

  /// Teichmuller set T_r, sorted in element-enumeration order (0 first).
  const std::vector<RingElement>& teichmuller() const { return teichmuller_; }
  /// Generator of T_r \ {0}, of multiplicative order 2^r - 1.
  const RingElement& teichmuller_generator() const { return generator_; }

 private:
  friend GaloisRing ring_construct(int r, int size_budget);
  GaloisRing(std::shared_ptr<const detail::QuotientRing> ring,
             std::vector<int> residue_modulus);

  std::shared_ptr<const detail::QuotientRing> ring_;
  std::vector<int> residue_modulus_;
  std::vector<RingElement> teichmuller_;
  RingElement generator_;
};

/// GR(4, r) whose modulus lifts field_construct(2, r)'s modulus.
GaloisRing ring_construct(int r, int size_budget = kDefaultSizeBudget);

/// Multiplicative order of a unit, or 0 if a is not a unit.
int multiplicative_order(const RingElement& a);

}  // namespace incompat::galois
