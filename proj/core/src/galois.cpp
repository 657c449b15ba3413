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

#include "incompat/galois.hpp"

#include <algorithm>
#include <string>

#include "incompat/error.hpp"

namespace incompat::galois {

namespace {

int mod(int value, int n) {
  const int r = value % n;
  return r < 0 ? r + n : r;
}

int int_pow(int base, int exp) {
  int result = 1;
  for (int i = 0; i < exp; ++i) result *= base;
  return result;
}

// Remainder of poly modulo a monic divisor over Z_n (both low-degree first).
std::vector<int> poly_rem(std::vector<int> poly, std::span<const int> divisor,
                          int n) {
  const int deg = static_cast<int>(divisor.size()) - 1;
  for (int top = static_cast<int>(poly.size()) - 1; top >= deg; --top) {
    const int c = poly[top];
    if (c == 0) continue;
    for (int t = 0; t <= deg; ++t) {
      poly[top - deg + t] = mod(poly[top - deg + t] - c * divisor[t], n);
    }
  }
  poly.resize(std::max(deg, 0));
  return poly;
}

std::vector<int> poly_mul_raw(std::span<const int> a, std::span<const int> b,
                              int n) {
  std::vector<int> out(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (size_t j = 0; j < b.size(); ++j) {
      out[i + j] = mod(out[i + j] + a[i] * b[j], n);
    }
  }
  return out;
}

// Odometer over coefficient vectors, least significant (highest degree) first.
bool next_coeffs(std::vector<int>& coeffs, int n) {
  for (int i = static_cast<int>(coeffs.size()) - 1; i >= 0; --i) {
    if (++coeffs[i] < n) return true;
    coeffs[i] = 0;
  }
  return false;
}

}  // namespace

bool is_prime(int n) {
  if (n < 2) return false;
  for (int f = 2; f * f <= n; ++f) {
    if (n % f == 0) return false;
  }
  return true;
}

std::optional<std::pair<int, int>> prime_power(int d) {
  if (d < 2) return std::nullopt;
  int p = 2;
  while (d % p != 0) ++p;
  int r = 0;
  int rest = d;
  while (rest % p == 0) {
    rest /= p;
    ++r;
  }
  if (rest != 1) return std::nullopt;
  return std::make_pair(p, r);
}

bool is_irreducible(std::span<const int> poly, int p) {
  const int r = static_cast<int>(poly.size()) - 1;
  if (r < 1) return false;
  for (int deg = 1; deg <= r / 2; ++deg) {
    std::vector<int> low(deg, 0);
    do {
      std::vector<int> divisor = low;
      divisor.push_back(1);
      const auto rem =
          poly_rem(std::vector<int>(poly.begin(), poly.end()), divisor, p);
      if (std::all_of(rem.begin(), rem.end(), [](int c) { return c == 0; })) {
        return false;
      }
    } while (next_coeffs(low, p));
  }
  return true;
}

namespace detail {

std::vector<int> QuotientRing::reduce(std::vector<int> poly) const {
  for (int& c : poly) c = mod(c, coeff_modulus);
  if (static_cast<int>(poly.size()) < degree) poly.resize(degree, 0);
  return poly_rem(std::move(poly), modulus, coeff_modulus);
}

std::vector<int> QuotientRing::add(std::span<const int> a,
                                   std::span<const int> b) const {
  std::vector<int> out(degree);
  for (int i = 0; i < degree; ++i) out[i] = mod(a[i] + b[i], coeff_modulus);
  return out;
}

std::vector<int> QuotientRing::sub(std::span<const int> a,
                                   std::span<const int> b) const {
  std::vector<int> out(degree);
  for (int i = 0; i < degree; ++i) out[i] = mod(a[i] - b[i], coeff_modulus);
  return out;
}

std::vector<int> QuotientRing::mul(std::span<const int> a,
                                   std::span<const int> b) const {
  return reduce(poly_mul_raw(a, b, coeff_modulus));
}

std::vector<int> QuotientRing::pow(std::span<const int> a,
                                   std::uint64_t n) const {
  std::vector<int> result(degree, 0);
  result[0] = 1 % coeff_modulus;
  std::vector<int> base(a.begin(), a.end());
  while (n > 0) {
    if (n & 1U) result = mul(result, base);
    base = mul(base, base);
    n >>= 1U;
  }
  return result;
}

int QuotientRing::size() const { return int_pow(coeff_modulus, degree); }

int QuotientRing::index_of(std::span<const int> a) const {
  int index = 0;
  for (int i = 0; i < degree; ++i) index = index * coeff_modulus + a[i];
  return index;
}

std::vector<int> QuotientRing::coeffs_of(int index) const {
  std::vector<int> out(degree, 0);
  for (int i = degree - 1; i >= 0; --i) {
    out[i] = index % coeff_modulus;
    index /= coeff_modulus;
  }
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// GF(p^r)

FieldElement::FieldElement(std::shared_ptr<const detail::QuotientRing> ring,
                           std::vector<int> coeffs)
    : ring_(std::move(ring)), coeffs_(std::move(coeffs)) {}

void FieldElement::check_same_parent(const FieldElement& other) const {
  if (ring_ != other.ring_ && ring_->modulus != other.ring_->modulus) {
    throw InvalidInput("field elements belong to different fields");
  }
}

int FieldElement::index() const { return ring_->index_of(coeffs_); }

bool FieldElement::is_zero() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(),
                     [](int c) { return c == 0; });
}

FieldElement FieldElement::operator+(const FieldElement& other) const {
  check_same_parent(other);
  return {ring_, ring_->add(coeffs_, other.coeffs_)};
}

FieldElement FieldElement::operator-(const FieldElement& other) const {
  check_same_parent(other);
  return {ring_, ring_->sub(coeffs_, other.coeffs_)};
}

FieldElement FieldElement::operator-() const {
  return {ring_, ring_->sub(std::vector<int>(coeffs_.size(), 0), coeffs_)};
}

FieldElement FieldElement::operator*(const FieldElement& other) const {
  check_same_parent(other);
  return {ring_, ring_->mul(coeffs_, other.coeffs_)};
}

FieldElement FieldElement::pow(std::uint64_t n) const {
  return {ring_, ring_->pow(coeffs_, n)};
}

FieldElement FieldElement::inverse() const {
  if (is_zero()) throw InvalidInput("zero has no multiplicative inverse");
  // a^{q-2} in a field of order q.
  return pow(static_cast<std::uint64_t>(ring_->size()) - 2);
}

int FieldElement::trace() const {
  const int p = ring_->coeff_modulus;
  std::vector<int> sum(ring_->degree, 0);
  std::vector<int> term = coeffs_;
  for (int i = 0; i < ring_->degree; ++i) {
    sum = ring_->add(sum, term);
    term = ring_->pow(term, static_cast<std::uint64_t>(p));
  }
  for (int i = 1; i < ring_->degree; ++i) {
    if (sum[i] != 0) {
      throw NumericalFailure("field trace left the prime subfield");
    }
  }
  return sum[0];
}

bool FieldElement::operator==(const FieldElement& other) const {
  return ring_->modulus == other.ring_->modulus && coeffs_ == other.coeffs_;
}

FieldElement FiniteField::zero() const {
  return {ring_, std::vector<int>(ring_->degree, 0)};
}

FieldElement FiniteField::one() const { return from_int(1); }

FieldElement FiniteField::from_int(int value) const {
  std::vector<int> coeffs(ring_->degree, 0);
  coeffs[0] = mod(value, ring_->coeff_modulus);
  return {ring_, std::move(coeffs)};
}

FieldElement FiniteField::from_coeffs(std::vector<int> coeffs) const {
  return {ring_, ring_->reduce(std::move(coeffs))};
}

FieldElement FiniteField::element(int index) const {
  if (index < 0 || index >= order()) {
    throw InvalidInput("field element index out of range");
  }
  return {ring_, ring_->coeffs_of(index)};
}

std::vector<FieldElement> FiniteField::elements() const {
  std::vector<FieldElement> out;
  out.reserve(order());
  for (int i = 0; i < order(); ++i) out.push_back(element(i));
  return out;
}

FiniteField field_construct(int p, int r, int size_budget) {
  if (!is_prime(p)) {
    throw InvalidInput("field characteristic " + std::to_string(p) +
                       " is not prime");
  }
  if (r < 1) throw InvalidInput("field extension degree must be >= 1");
  long long size = 1;
  for (int i = 0; i < r; ++i) {
    size *= p;
    if (size > size_budget) {
      throw BudgetExceeded("GF(" + std::to_string(p) + "^" +
                           std::to_string(r) + ") exceeds size budget " +
                           std::to_string(size_budget));
    }
  }
  // Lexicographically smallest monic irreducible, constant term compared first.
  std::vector<int> low(r, 0);
  do {
    std::vector<int> candidate = low;
    candidate.push_back(1);
    if (is_irreducible(candidate, p)) {
      auto ring = std::make_shared<detail::QuotientRing>();
      ring->coeff_modulus = p;
      ring->degree = r;
      ring->modulus = std::move(candidate);
      return FiniteField(std::move(ring));
    }
  } while (next_coeffs(low, p));
  throw NumericalFailure("no irreducible polynomial found");
}

// ---------------------------------------------------------------------------
// GR(4, r)

RingElement::RingElement(std::shared_ptr<const detail::QuotientRing> ring,
                         std::vector<int> coeffs)
    : ring_(std::move(ring)), coeffs_(std::move(coeffs)) {}

void RingElement::check_same_parent(const RingElement& other) const {
  if (ring_ != other.ring_ && ring_->modulus != other.ring_->modulus) {
    throw InvalidInput("ring elements belong to different rings");
  }
}

int RingElement::index() const { return ring_->index_of(coeffs_); }

bool RingElement::is_zero() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(),
                     [](int c) { return c == 0; });
}

RingElement RingElement::operator+(const RingElement& other) const {
  check_same_parent(other);
  return {ring_, ring_->add(coeffs_, other.coeffs_)};
}

RingElement RingElement::operator-(const RingElement& other) const {
  check_same_parent(other);
  return {ring_, ring_->sub(coeffs_, other.coeffs_)};
}

RingElement RingElement::operator-() const {
  return {ring_, ring_->sub(std::vector<int>(coeffs_.size(), 0), coeffs_)};
}

RingElement RingElement::operator*(const RingElement& other) const {
  check_same_parent(other);
  return {ring_, ring_->mul(coeffs_, other.coeffs_)};
}

RingElement RingElement::pow(std::uint64_t n) const {
  return {ring_, ring_->pow(coeffs_, n)};
}

bool RingElement::operator==(const RingElement& other) const {
  return ring_->modulus == other.ring_->modulus && coeffs_ == other.coeffs_;
}

TeichmullerParts teichmuller_decompose(const RingElement& a) {
  // (t + 2u)^2 = t^2 mod 4, and t^{2^r} = t on T_r, so t = a^{2^r}.
  const std::uint64_t q = std::uint64_t{1} << a.coeffs().size();
  RingElement t = a.pow(q);
  RingElement diff = a - t;
  std::vector<int> half(diff.coeffs().begin(), diff.coeffs().end());
  for (int& c : half) {
    if (c % 2 != 0) {
      throw NumericalFailure("2-adic decomposition failed: odd remainder");
    }
    c /= 2;
  }
  RingElement v = RingElement(t.ring_, std::move(half));
  RingElement u = v.pow(q);
  return {std::move(t), std::move(u)};
}

RingElement RingElement::frobenius() const {
  auto [t, u] = teichmuller_decompose(*this);
  RingElement two = RingElement(ring_, ring_->reduce({2}));
  return t * t + two * (u * u);
}

int RingElement::trace() const {
  RingElement sum(ring_, std::vector<int>(ring_->degree, 0));
  RingElement term = *this;
  for (int i = 0; i < ring_->degree; ++i) {
    sum = sum + term;
    term = term.frobenius();
  }
  for (int i = 1; i < ring_->degree; ++i) {
    if (sum.coeffs_[i] != 0) {
      throw NumericalFailure("ring trace left Z_4");
    }
  }
  return sum.coeffs_[0];
}

int multiplicative_order(const RingElement& a) {
  const int size = static_cast<int>(
      std::uint64_t{1} << (2 * a.coeffs().size()));  // 4^r
  RingElement power = a;
  for (int n = 1; n <= size; ++n) {
    const auto c = power.coeffs();
    if (c[0] == 1 && std::all_of(c.begin() + 1, c.end(),
                                 [](int x) { return x == 0; })) {
      return n;
    }
    power = power * a;
  }
  return 0;
}

GaloisRing::GaloisRing(std::shared_ptr<const detail::QuotientRing> ring,
                       std::vector<int> residue_modulus)
    : ring_(std::move(ring)),
      residue_modulus_(std::move(residue_modulus)),
      generator_(ring_, std::vector<int>(ring_->degree, 0)) {
  const int r = ring_->degree;
  const int unit_order = (1 << r) - 1;
  // The class of X when it has full order, otherwise the first element of
  // T_r that does (r = 1 with modulus X is the only case in budget).
  std::vector<int> x_coeffs(r, 0);
  if (r > 1) {
    x_coeffs[1] = 1;
  } else {
    x_coeffs[0] = ring_->reduce({0, 1})[0];
  }
  RingElement candidate(ring_, ring_->reduce(x_coeffs));
  if (multiplicative_order(candidate) != unit_order) {
    bool found = false;
    for (int i = 0; i < ring_->size() && !found; ++i) {
      RingElement t =
          RingElement(ring_, ring_->coeffs_of(i)).pow(std::uint64_t{1} << r);
      if (multiplicative_order(t) == unit_order) {
        candidate = t;
        found = true;
      }
    }
    if (!found) throw NumericalFailure("no Teichmuller generator found");
  }
  generator_ = candidate;
  teichmuller_.push_back(zero());
  RingElement power = one();
  for (int i = 0; i < unit_order; ++i) {
    teichmuller_.push_back(power);
    power = power * generator_;
  }
  std::sort(teichmuller_.begin(), teichmuller_.end(),
            [](const RingElement& a, const RingElement& b) {
              return a.index() < b.index();
            });
}

RingElement GaloisRing::zero() const {
  return {ring_, std::vector<int>(ring_->degree, 0)};
}

RingElement GaloisRing::one() const { return from_int(1); }

RingElement GaloisRing::from_int(int value) const {
  std::vector<int> coeffs(ring_->degree, 0);
  coeffs[0] = mod(value, 4);
  return {ring_, std::move(coeffs)};
}

RingElement GaloisRing::from_coeffs(std::vector<int> coeffs) const {
  return {ring_, ring_->reduce(std::move(coeffs))};
}

RingElement GaloisRing::element(int index) const {
  if (index < 0 || index >= order()) {
    throw InvalidInput("ring element index out of range");
  }
  return {ring_, ring_->coeffs_of(index)};
}

std::vector<RingElement> GaloisRing::elements() const {
  std::vector<RingElement> out;
  out.reserve(order());
  for (int i = 0; i < order(); ++i) out.push_back(element(i));
  return out;
}

GaloisRing ring_construct(int r, int size_budget) {
  const FiniteField residue = field_construct(2, r, size_budget);
  const std::vector<int>& f = residue.modulus();
  // Graeffe root squaring: with f = e + o split by parity of degree,
  // h(X^2) = e(X)^2 - o(X)^2 has the Teichmuller lifts of f's roots as roots.
  std::vector<int> even(f.size(), 0);
  std::vector<int> odd(f.size(), 0);
  for (size_t i = 0; i < f.size(); ++i) (i % 2 == 0 ? even : odd)[i] = f[i];
  const auto ee = poly_mul_raw(even, even, 4);
  const auto oo = poly_mul_raw(odd, odd, 4);
  std::vector<int> lifted(r + 1, 0);
  for (int i = 0; i <= r; ++i) lifted[i] = mod(ee[2 * i] - oo[2 * i], 4);
  if (lifted[r] != 1) {
    for (int& c : lifted) c = mod(-c, 4);
  }
  for (int i = 0; i <= r; ++i) {
    if (lifted[i] % 2 != f[i]) {
      throw NumericalFailure("Hensel lift does not reduce to field modulus");
    }
  }
  auto ring = std::make_shared<detail::QuotientRing>();
  ring->coeff_modulus = 4;
  ring->degree = r;
  ring->modulus = std::move(lifted);
  return GaloisRing(std::move(ring), f);
}

}  // namespace incompat::galois
