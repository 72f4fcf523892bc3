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

#include "bellsim/clifford.hpp"

#include <gtest/gtest.h>

#include <array>
#include <cmath>

#include "bellsim/rng.hpp"

namespace bellsim::clifford {
namespace {

// Independent oracle: Cl(0,3) is isomorphic to H + H with f_k -> (q_k, -q_k),
// q = (i, j, k). Products are checked against quaternion arithmetic.
using Quat = std::array<double, 4>;  // w, x, y, z

Quat qmul(const Quat& a, const Quat& b) {
  return {a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3],
          a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2],
          a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1],
          a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0]};
}

struct QuatPair {
  Quat left{};
  Quat right{};
};

QuatPair pmul(const QuatPair& a, const QuatPair& b) { return {qmul(a.left, b.left), qmul(a.right, b.right)}; }

QuatPair generator(int k) {
  QuatPair g;
  g.left[k] = 1.0;
  g.right[k] = -1.0;
  return g;
}

QuatPair represent_basis(std::size_t index) {
  static const std::array<std::array<int, 3>, kDimension> words = {{
      {0, 0, 0}, {1, 0, 0}, {2, 0, 0}, {3, 0, 0}, {1, 2, 0}, {1, 3, 0}, {2, 3, 0}, {1, 2, 3}}};
  QuatPair out{{1, 0, 0, 0}, {1, 0, 0, 0}};
  for (int g : words[index]) {
    if (g != 0) out = pmul(out, generator(g));
  }
  return out;
}

QuatPair represent(const RealMultivector& m) {
  QuatPair out;
  for (std::size_t k = 0; k < kDimension; ++k) {
    const QuatPair b = represent_basis(k);
    for (int c = 0; c < 4; ++c) {
      out.left[c] += m[k] * b.left[c];
      out.right[c] += m[k] * b.right[c];
    }
  }
  return out;
}

double distance(const QuatPair& a, const QuatPair& b) {
  double s = 0.0;
  for (int c = 0; c < 4; ++c) s += std::pow(a.left[c] - b.left[c], 2) + std::pow(a.right[c] - b.right[c], 2);
  return std::sqrt(s);
}

RealMultivector random_mv(Rng& rng) {
  RealMultivector::Coefficients c{};
  for (double& v : c) v = rng.uniform(-2.0, 2.0);
  return RealMultivector(c);
}

TEST(BasisTable, MatchesQuaternionPairRepresentation) {
  for (std::size_t r = 0; r < kDimension; ++r) {
    for (std::size_t c = 0; c < kDimension; ++c) {
      const BasisProduct p = kBasisTable[r][c];
      const QuatPair expected = pmul(represent_basis(r), represent_basis(c));
      QuatPair got = represent_basis(p.index);
      for (auto* q : {&got.left, &got.right}) {
        for (double& v : *q) v *= p.sign;
      }
      EXPECT_LT(distance(expected, got), 1e-15) << kBasisNames[r] << " * " << kBasisNames[c];
    }
  }
}

TEST(BasisTable, UnitLawAndClosure) {
  for (std::size_t k = 0; k < kDimension; ++k) {
    EXPECT_EQ(kBasisTable[0][k].index, k);
    EXPECT_EQ(kBasisTable[0][k].sign, 1);
    EXPECT_EQ(kBasisTable[k][0].index, k);
    EXPECT_EQ(kBasisTable[k][0].sign, 1);
    for (std::size_t c = 0; c < kDimension; ++c) {
      EXPECT_LT(kBasisTable[k][c].index, kDimension);
      EXPECT_TRUE(kBasisTable[k][c].sign == 1 || kBasisTable[k][c].sign == -1);
    }
  }
}

TEST(BasisTable, GeneratorRelations) {
  for (std::size_t g = 1; g <= 3; ++g) {
    EXPECT_EQ(ExactMultivector::basis(g) * ExactMultivector::basis(g), ExactMultivector::scalar(-1));
    for (std::size_t h = 1; h <= 3; ++h) {
      if (g == h) continue;
      EXPECT_EQ(ExactMultivector::basis(g) * ExactMultivector::basis(h),
                -(ExactMultivector::basis(h) * ExactMultivector::basis(g)));
    }
  }
}

TEST(MvProduct, Examples) {
  Rng rng(1);
  const RealMultivector x = random_mv(rng);
  EXPECT_EQ(mv_product(RealMultivector::scalar(1.0), x), x);
  EXPECT_EQ(mv_product(x, RealMultivector::scalar(1.0)), x);
  EXPECT_EQ(mv_product(ExactMultivector::basis(1), ExactMultivector::basis(1)), ExactMultivector::scalar(-1));
  EXPECT_EQ(mv_product(pseudoscalar(), pseudoscalar()), ExactMultivector::scalar(1));
}

TEST(MvProduct, AgreesWithRepresentationOnRandomElements) {
  Rng rng(2);
  for (int t = 0; t < 200; ++t) {
    const RealMultivector a = random_mv(rng);
    const RealMultivector b = random_mv(rng);
    EXPECT_LT(distance(represent(a * b), pmul(represent(a), represent(b))), 1e-12);
  }
}

TEST(MvProduct, Bilinear) {
  Rng rng(3);
  for (int t = 0; t < 200; ++t) {
    const RealMultivector a = random_mv(rng);
    const RealMultivector b = random_mv(rng);
    const RealMultivector c = random_mv(rng);
    const double s = rng.uniform(-3.0, 3.0);
    EXPECT_LT(mv_norm((a * s + b) * c - (s * (a * c) + b * c)), 1e-12);
    EXPECT_LT(mv_norm(c * (a * s + b) - (s * (c * a) + c * b)), 1e-12);
  }
}

TEST(MvNorm, Examples) {
  EXPECT_EQ(mv_norm(ExactMultivector{}), 0.0);
  EXPECT_EQ(mv_norm(ExactMultivector::basis(2)), 1.0);
  const auto one_plus_m = ExactMultivector::scalar(1) + pseudoscalar();
  // Oracle: sqrt of the summed squares of (1, 0, ..., 0, 1).
  EXPECT_DOUBLE_EQ(mv_norm(one_plus_m), std::sqrt(1.0 * 1.0 + 1.0 * 1.0));
  EXPECT_EQ(one_plus_m.norm_squared(), 2);
}

TEST(MvNorm, ZeroOnlyAtZero) {
  for (std::size_t k = 0; k < kDimension; ++k) {
    EXPECT_GT(mv_norm(ExactMultivector::basis(k)), 0.0);
  }
  EXPECT_TRUE(ExactMultivector{}.is_zero());
}

TEST(Pseudoscalar, Definition) {
  const ExactMultivector m = pseudoscalar();
  const ExactMultivector::Coefficients expected{0, 0, 0, 0, 0, 0, 0, 1};
  EXPECT_EQ(m.coeffs(), expected);
  EXPECT_EQ(m, ExactMultivector::basis(1) * ExactMultivector::basis(2) * ExactMultivector::basis(3));
  EXPECT_EQ(m * m, ExactMultivector::scalar(1));
  EXPECT_EQ(mv_norm(m), 1.0);
}

TEST(Pseudoscalar, IsCentral) {
  EXPECT_TRUE(pseudoscalar_is_central());
  Rng rng(4);
  const auto m = pseudoscalar<double>();
  for (int t = 0; t < 50; ++t) {
    const RealMultivector x = random_mv(rng);
    EXPECT_LT(mv_norm(m * x - x * m), 1e-14);
  }
}

TEST(ZeroDivisorWitness, ProductIsExactlyZero) {
  const auto w = zero_divisor_witness();
  EXPECT_EQ(w.left, pseudoscalar() - ExactMultivector::scalar(1));
  EXPECT_EQ(w.right, pseudoscalar() + ExactMultivector::scalar(1));
  EXPECT_FALSE(w.left.is_zero());
  EXPECT_FALSE(w.right.is_zero());
  EXPECT_TRUE((w.left * w.right).is_zero());
  EXPECT_TRUE((w.right * w.left).is_zero());
}

TEST(ZeroDivisorWitness, Norms) {
  const auto w = zero_divisor_witness();
  // Coefficient vectors (-1, 0, ..., 0, 1) and (1, 0, ..., 0, 1).
  EXPECT_EQ(w.left.norm_squared(), 2);
  EXPECT_EQ(w.right.norm_squared(), 2);
  EXPECT_DOUBLE_EQ(mv_norm(w.left), std::sqrt(2.0));
  EXPECT_DOUBLE_EQ(mv_norm(w.right), std::sqrt(2.0));
  EXPECT_EQ(mv_norm(w.left * w.right), 0.0);
}

TEST(NormMultiplicativityResidual, Examples) {
  Rng rng(5);
  const RealMultivector x = random_mv(rng);
  EXPECT_NEAR(norm_multiplicativity_residual(RealMultivector::scalar(1.0), x), 0.0, 1e-15);
  const auto w = zero_divisor_witness();
  EXPECT_EQ(norm_multiplicativity_residual(w.left, w.right), -2.0);
  EXPECT_EQ(norm_multiplicativity_residual(ExactMultivector::basis(1), ExactMultivector::basis(2)), 0.0);
}

TEST(NormMultiplicativityResidual, BasisProductsAreIsometric) {
  for (std::size_t r = 0; r < kDimension; ++r) {
    for (std::size_t c = 0; c < kDimension; ++c) {
      EXPECT_EQ(norm_multiplicativity_residual(ExactMultivector::basis(r), ExactMultivector::basis(c)), 0.0);
    }
  }
}

TEST(AssociativityCheck, ExhaustiveAndSampled) {
  const AssociativityReport r = associativity_check(1000, 42);
  EXPECT_EQ(r.basis_triples, 512U);
  EXPECT_EQ(r.exhaustive_residual, 0);
  EXPECT_EQ(r.samples, 1000U);
  EXPECT_LE(r.max_scaled_sampled_residual, 1e-12);
}

TEST(AssociativityCheck, UnitTriple) {
  const auto one = ExactMultivector::scalar(1);
  EXPECT_TRUE(((one * one) * one - one * (one * one)).is_zero());
  EXPECT_EQ(associativity_check(1, 0).samples, 1U);
}

TEST(Bivector, ScalarPartOfProductIsMinusDot) {
  Rng rng(6);
  for (int t = 0; t < 100; ++t) {
    const double ax = rng.uniform(-1, 1), ay = rng.uniform(-1, 1), az = rng.uniform(-1, 1);
    const double bx = rng.uniform(-1, 1), by = rng.uniform(-1, 1), bz = rng.uniform(-1, 1);
    const auto na = bivector_of(ax, ay, az);
    const auto nb = bivector_of(bx, by, bz);
    const double dot = ax * bx + ay * by + az * bz;
    EXPECT_NEAR((na * nb)[0], -dot, 1e-14);
    EXPECT_NEAR((nb * na)[0], -dot, 1e-14);
  }
}

}  // namespace
}  // namespace bellsim::clifford
