// Copyright 2026 The bellsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string_view>

namespace bellsim::clifford {

// Basis order: 1, f1, f2, f3, f1f2, f1f3, f2f3, f1f2f3.
// Generators anticommute and square to -1.
inline constexpr std::size_t kDimension = 8;
inline constexpr std::size_t kPseudoscalarIndex = 7;

inline constexpr std::array<std::string_view, kDimension> kBasisNames = {
    "1", "f1", "f2", "f3", "f1f2", "f1f3", "f2f3", "f1f2f3"};

struct BasisProduct {
  int sign;           // -1 or +1
  std::size_t index;  // 0..7
};

using BasisTable = std::array<std::array<BasisProduct, kDimension>, kDimension>;

namespace detail {

// Bitmask of generators present in each basis blade (bit k <=> f_{k+1}).
inline constexpr std::array<unsigned, kDimension> kBladeMask = {0b000, 0b001, 0b010, 0b100,
                                                                 0b011, 0b101, 0b110, 0b111};

constexpr std::size_t index_of_mask(unsigned mask) {
  for (std::size_t k = 0; k < kDimension; ++k) {
    if (kBladeMask[k] == mask) return k;
  }
  return kDimension;
}

constexpr int popcount3(unsigned m) { return static_cast<int>((m & 1U) + ((m >> 1) & 1U) + ((m >> 2) & 1U)); }

// Sign of blade(lhs) * blade(rhs) for generators with f_i^2 = -1.
constexpr int blade_sign(unsigned lhs, unsigned rhs) {
  // Transpositions needed to sort the concatenated word ascending.
  int swaps = 0;
  for (unsigned shifted = lhs >> 1; shifted != 0; shifted >>= 1) {
    swaps += popcount3(shifted & rhs);
  }
  const int squares = popcount3(lhs & rhs);
  return ((swaps + squares) % 2 == 0) ? 1 : -1;
}

}  // namespace detail

constexpr BasisTable make_basis_table() {
  BasisTable table{};
  for (std::size_t r = 0; r < kDimension; ++r) {
    for (std::size_t c = 0; c < kDimension; ++c) {
      const unsigned lhs = detail::kBladeMask[r];
      const unsigned rhs = detail::kBladeMask[c];
      table[r][c] = BasisProduct{detail::blade_sign(lhs, rhs), detail::index_of_mask(lhs ^ rhs)};
    }
  }
  return table;
}

inline constexpr BasisTable kBasisTable = make_basis_table();

/// Element of Cl(0,3) with coefficients over the fixed basis.
///
/// `Scalar` is `std::int64_t` for the exact theorem-check path and `double`
/// for sampled checks. Every operation is ring arithmetic on coefficients,
/// so an integer instantiation never rounds.
template <typename Scalar>
class Multivector {
 public:
  using Coefficients = std::array<Scalar, kDimension>;

  constexpr Multivector() : coeffs_{} {}
  constexpr explicit Multivector(const Coefficients& coeffs) : coeffs_(coeffs) {}

  static constexpr Multivector scalar(Scalar value) {
    Multivector m;
    m.coeffs_[0] = value;
    return m;
  }

  static constexpr Multivector basis(std::size_t index, Scalar value = Scalar{1}) {
    Multivector m;
    m.coeffs_[index] = value;
    return m;
  }

  [[nodiscard]] constexpr const Coefficients& coeffs() const { return coeffs_; }
  [[nodiscard]] constexpr Scalar operator[](std::size_t k) const { return coeffs_[k]; }

  [[nodiscard]] constexpr bool is_zero() const {
    for (const Scalar& c : coeffs_) {
      if (c != Scalar{0}) return false;
    }
    return true;
  }

  /// Sum of squared coefficients; exact for integer scalars.
  [[nodiscard]] constexpr Scalar norm_squared() const {
    Scalar sum{0};
    for (const Scalar& c : coeffs_) sum += c * c;
    return sum;
  }

  constexpr Multivector& operator+=(const Multivector& o) {
    for (std::size_t k = 0; k < kDimension; ++k) coeffs_[k] += o.coeffs_[k];
    return *this;
  }
  constexpr Multivector& operator-=(const Multivector& o) {
    for (std::size_t k = 0; k < kDimension; ++k) coeffs_[k] -= o.coeffs_[k];
    return *this;
  }
  constexpr Multivector& operator*=(Scalar s) {
    for (Scalar& c : coeffs_) c *= s;
    return *this;
  }

  friend constexpr Multivector operator+(Multivector a, const Multivector& b) { return a += b; }
  friend constexpr Multivector operator-(Multivector a, const Multivector& b) { return a -= b; }
  friend constexpr Multivector operator-(Multivector a) { return a *= Scalar{-1}; }
  friend constexpr Multivector operator*(Multivector a, Scalar s) { return a *= s; }
  friend constexpr Multivector operator*(Scalar s, Multivector a) { return a *= s; }

  /// Algebra product via the basis table.
  friend constexpr Multivector operator*(const Multivector& a, const Multivector& b) {
    Multivector out;
    for (std::size_t r = 0; r < kDimension; ++r) {
      if (a.coeffs_[r] == Scalar{0}) continue;
      for (std::size_t c = 0; c < kDimension; ++c) {
        const BasisProduct p = kBasisTable[r][c];
        const Scalar term = a.coeffs_[r] * b.coeffs_[c];
        if (p.sign > 0) {
          out.coeffs_[p.index] += term;
        } else {
          out.coeffs_[p.index] -= term;
        }
      }
    }
    return out;
  }

  friend constexpr bool operator==(const Multivector&, const Multivector&) = default;

 private:
  Coefficients coeffs_;
};

using ExactMultivector = Multivector<std::int64_t>;
using RealMultivector = Multivector<double>;

template <typename Scalar>
constexpr Multivector<Scalar> mv_product(const Multivector<Scalar>& a, const Multivector<Scalar>& b) {
  return a * b;
}

/// Euclidean norm of the coefficient vector.
template <typename Scalar>
double mv_norm(const Multivector<Scalar>& a) {
  return std::sqrt(static_cast<double>(a.norm_squared()));
}

template <typename Scalar = std::int64_t>
constexpr Multivector<Scalar> pseudoscalar() {
  return Multivector<Scalar>::basis(kPseudoscalarIndex);
}

template <typename Scalar>
struct ZeroDivisorPair {
  Multivector<Scalar> left;   // M - 1
  Multivector<Scalar> right;  // M + 1
};

/// (M - 1, M + 1): both nonzero, product zero because M^2 = 1.
template <typename Scalar = std::int64_t>
constexpr ZeroDivisorPair<Scalar> zero_divisor_witness() {
  const auto one = Multivector<Scalar>::scalar(Scalar{1});
  const auto m = pseudoscalar<Scalar>();
  return {m - one, m + one};
}

/// ||ab|| - ||a|| ||b||. Nonzero means the norm is not multiplicative.
/// ||a|| ||b|| is taken as sqrt(||a||^2 ||b||^2) so integer inputs with
/// square-rootable products give an exact result.
template <typename Scalar>
double norm_multiplicativity_residual(const Multivector<Scalar>& a, const Multivector<Scalar>& b) {
  const double product_of_squares = static_cast<double>(a.norm_squared()) * static_cast<double>(b.norm_squared());
  return mv_norm(a * b) - std::sqrt(product_of_squares);
}

/// Maps a 3-vector to the unit-free bivector v1 f2f3 - v2 f1f3 + v3 f1f2.
/// The even part of Cl(0,3) is the quaternions, and for such bivectors
/// the scalar part of B(a) B(b) is -a.b.
RealMultivector bivector_of(double x, double y, double z);

struct AssociativityReport {
  std::int64_t exhaustive_residual = 0;  // sum of squared coefficient errors over 512 basis triples
  std::size_t basis_triples = 0;
  std::size_t samples = 0;
  double max_sampled_residual = 0.0;          // max ||(ab)c - a(bc)||
  double max_scaled_sampled_residual = 0.0;   // same, divided by ||a|| ||b|| ||c||
};

/// Exhaustive basis-triple sweep in exact arithmetic plus `samples` random
/// double-precision triples drawn from `seed`.
AssociativityReport associativity_check(std::size_t samples, std::uint64_t seed);

/// True when M x = x M for every basis element.
bool pseudoscalar_is_central();

}  // namespace bellsim::clifford
