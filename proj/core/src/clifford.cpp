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

#include <algorithm>

#include "bellsim/rng.hpp"

namespace bellsim::clifford {

RealMultivector bivector_of(double x, double y, double z) {
  RealMultivector::Coefficients c{};
  c[6] = x;   // f2f3
  c[5] = -y;  // f1f3
  c[4] = z;   // f1f2
  return RealMultivector(c);
}

AssociativityReport associativity_check(std::size_t samples, std::uint64_t seed) {
  AssociativityReport report;

  for (std::size_t a = 0; a < kDimension; ++a) {
    for (std::size_t b = 0; b < kDimension; ++b) {
      for (std::size_t c = 0; c < kDimension; ++c) {
        const auto x = ExactMultivector::basis(a);
        const auto y = ExactMultivector::basis(b);
        const auto z = ExactMultivector::basis(c);
        report.exhaustive_residual += ((x * y) * z - x * (y * z)).norm_squared();
        ++report.basis_triples;
      }
    }
  }

  Rng rng(seed);
  auto draw = [&rng] {
    RealMultivector::Coefficients c{};
    for (double& v : c) v = rng.uniform(-1.0, 1.0);
    return RealMultivector(c);
  };
  for (std::size_t s = 0; s < samples; ++s) {
    const RealMultivector a = draw();
    const RealMultivector b = draw();
    const RealMultivector c = draw();
    const double residual = mv_norm((a * b) * c - a * (b * c));
    const double scale = mv_norm(a) * mv_norm(b) * mv_norm(c);
    report.max_sampled_residual = std::max(report.max_sampled_residual, residual);
    if (scale > 0.0) {
      report.max_scaled_sampled_residual = std::max(report.max_scaled_sampled_residual, residual / scale);
    }
    ++report.samples;
  }
  return report;
}

bool pseudoscalar_is_central() {
  const auto m = pseudoscalar<std::int64_t>();
  for (std::size_t k = 0; k < kDimension; ++k) {
    const auto x = ExactMultivector::basis(k);
    if (m * x != x * m) return false;
  }
  return true;
}

}  // namespace bellsim::clifford
