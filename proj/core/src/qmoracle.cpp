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

#include "bellsim/qmoracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "bellsim/rng.hpp"

namespace bellsim {

UnitVector3::UnitVector3(double x, double y, double z) {
  const double n = std::sqrt(x * x + y * y + z * z);
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw std::invalid_argument("UnitVector3: direction must be finite and nonzero");
  }
  // already unit within rounding: components kept bit-exact
  const double scale = std::abs(n - 1.0) <= 1e-15 ? 1.0 : n;
  x_ = x / scale;
  y_ = y / scale;
  z_ = z / scale;
}

UnitVector3 UnitVector3::from_xz_degrees(double degrees) {
  const double t = degrees * std::numbers::pi / 180.0;
  return {std::sin(t), 0.0, std::cos(t)};
}

UnitVector3 UnitVector3::random(Rng& rng) {
  const double z = rng.uniform(-1.0, 1.0);
  const double phi = rng.uniform(0.0, 2.0 * std::numbers::pi);
  const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
  if (r == 0.0) return {0.0, 0.0, z < 0.0 ? -1.0 : 1.0};
  return {r * std::cos(phi), r * std::sin(phi), z};
}

namespace qm {

namespace {

using Mat2 = std::array<Complex, 4>;

Mat2 spin_matrix(const UnitVector3& v) {
  // x sigma_x + y sigma_y + z sigma_z
  return {Complex(v.z(), 0.0), Complex(v.x(), -v.y()), Complex(v.x(), v.y()), Complex(-v.z(), 0.0)};
}

Matrix4 kron(const Mat2& a, const Mat2& b) {
  Matrix4 out;
  for (std::size_t ar = 0; ar < 2; ++ar) {
    for (std::size_t ac = 0; ac < 2; ++ac) {
      for (std::size_t br = 0; br < 2; ++br) {
        for (std::size_t bc = 0; bc < 2; ++bc) {
          out(2 * ar + br, 2 * ac + bc) = a[2 * ar + ac] * b[2 * br + bc];
        }
      }
    }
  }
  return out;
}

constexpr double kHermitianTolerance = 1e-12;

}  // namespace

Matrix4 Matrix4::identity() {
  Matrix4 m;
  for (std::size_t k = 0; k < 4; ++k) m(k, k) = 1.0;
  return m;
}

Matrix4& Matrix4::operator+=(const Matrix4& o) {
  for (std::size_t k = 0; k < m_.size(); ++k) m_[k] += o.m_[k];
  return *this;
}

Matrix4& Matrix4::operator*=(double s) {
  for (Complex& v : m_) v *= s;
  return *this;
}

Matrix4 operator-(Matrix4 a, const Matrix4& b) {
  for (std::size_t k = 0; k < a.m_.size(); ++k) a.m_[k] -= b.m_[k];
  return a;
}

Matrix4 operator*(const Matrix4& a, const Matrix4& b) {
  Matrix4 out;
  for (std::size_t r = 0; r < 4; ++r) {
    for (std::size_t c = 0; c < 4; ++c) {
      Complex sum = 0.0;
      for (std::size_t k = 0; k < 4; ++k) sum += a(r, k) * b(k, c);
      out(r, c) = sum;
    }
  }
  return out;
}

double Matrix4::hermitian_defect() const {
  double worst = 0.0;
  for (std::size_t r = 0; r < 4; ++r) {
    for (std::size_t c = 0; c < 4; ++c) {
      worst = std::max(worst, std::abs((*this)(r, c) - std::conj((*this)(c, r))));
    }
  }
  return worst;
}

double Matrix4::max_abs() const {
  double worst = 0.0;
  for (const Complex& v : m_) worst = std::max(worst, std::abs(v));
  return worst;
}

Observable::Observable(const Matrix4& matrix) : matrix_(matrix) {
  if (matrix.hermitian_defect() > kHermitianTolerance) {
    throw std::invalid_argument("Observable: matrix is not Hermitian");
  }
}

SingletState::SingletState() {
  const double h = 1.0 / std::numbers::sqrt2;
  amp_ = {Complex(0.0), Complex(h), Complex(-h), Complex(0.0)};
}

Observable spin_product(const UnitVector3& a, const UnitVector3& b) {
  return Observable(kron(spin_matrix(a), spin_matrix(b)));
}

double expectation(const Observable& obs, const SingletState& state) {
  const auto& psi = state.amplitudes();
  const Matrix4& m = obs.matrix();
  Complex sum = 0.0;
  for (std::size_t r = 0; r < 4; ++r) {
    Complex row = 0.0;
    for (std::size_t c = 0; c < 4; ++c) row += m(r, c) * psi[c];
    sum += std::conj(psi[r]) * row;
  }
  return sum.real();
}

double singlet_correlation(const UnitVector3& a, const UnitVector3& b) {
  return expectation(spin_product(a, b), SingletState{});
}

Observable chsh_operator(const UnitVector3& a1, const UnitVector3& a2, const UnitVector3& b1,
                         const UnitVector3& b2) {
  const Matrix4 sum = spin_product(a1, b1).matrix() + spin_product(a1, b2).matrix() +
                      spin_product(a2, b1).matrix() - spin_product(a2, b2).matrix();
  return Observable(sum);
}

double linearity_check(std::span<const Observable> observables, std::span<const double> weights,
                       const SingletState& state) {
  if (observables.size() != weights.size()) {
    throw std::invalid_argument("linearity_check: observables and weights differ in length");
  }
  Matrix4 combined;
  double separate = 0.0;
  for (std::size_t k = 0; k < observables.size(); ++k) {
    combined += weights[k] * observables[k].matrix();
    separate += weights[k] * expectation(observables[k], state);
  }
  return std::abs(expectation(Observable(combined), state) - separate);
}

EigenSystem hermitian_eigen(const Matrix4& matrix) {
  Matrix4 a = matrix;
  Matrix4 v = Matrix4::identity();
  const double scale = std::max(matrix.max_abs(), 1e-300);

  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < 4; ++p) {
      for (std::size_t q = p + 1; q < 4; ++q) off += std::norm(a(p, q));
    }
    if (std::sqrt(off) <= 1e-16 * scale) break;

    for (std::size_t p = 0; p < 4; ++p) {
      for (std::size_t q = p + 1; q < 4; ++q) {
        const double r = std::abs(a(p, q));
        if (r <= 1e-300) continue;
        // Phase q so that a_pq is real, then a real Jacobi rotation.
        const Complex phase = std::conj(a(p, q)) / r;
        const double theta = (a(q, q).real() - a(p, p).real()) / (2.0 * r);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const Complex upp = c;
        const Complex upq = s;
        const Complex uqp = -s * phase;
        const Complex uqq = c * phase;

        for (std::size_t k = 0; k < 4; ++k) {
          const Complex akp = a(k, p);
          const Complex akq = a(k, q);
          a(k, p) = akp * upp + akq * uqp;
          a(k, q) = akp * upq + akq * uqq;
          const Complex vkp = v(k, p);
          const Complex vkq = v(k, q);
          v(k, p) = vkp * upp + vkq * uqp;
          v(k, q) = vkp * upq + vkq * uqq;
        }
        for (std::size_t k = 0; k < 4; ++k) {
          const Complex apk = a(p, k);
          const Complex aqk = a(q, k);
          a(p, k) = std::conj(upp) * apk + std::conj(uqp) * aqk;
          a(q, k) = std::conj(upq) * apk + std::conj(uqq) * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
      }
    }
  }

  std::array<std::size_t, 4> order = {0, 1, 2, 3};
  std::sort(order.begin(), order.end(), [&a](std::size_t l, std::size_t r) { return a(l, l).real() < a(r, r).real(); });
  EigenSystem out;
  for (std::size_t k = 0; k < 4; ++k) {
    out.values[k] = a(order[k], order[k]).real();
    for (std::size_t row = 0; row < 4; ++row) out.vectors(row, k) = v(row, order[k]);
  }
  return out;
}

double operator_norm(const Observable& obs) {
  const EigenSystem eig = hermitian_eigen(obs.matrix());
  return std::max(std::abs(eig.values.front()), std::abs(eig.values.back()));
}

std::vector<CurvePoint> qm_curve(double start_degrees, double stop_degrees, double step_degrees) {
  if (!(step_degrees > 0.0) || start_degrees > stop_degrees) {
    throw std::invalid_argument("qm_curve: need step > 0 and start <= stop");
  }
  std::vector<CurvePoint> out;
  const auto count = static_cast<std::size_t>(std::floor((stop_degrees - start_degrees) / step_degrees + 1e-9)) + 1;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    const double angle = start_degrees + static_cast<double>(k) * step_degrees;
    out.push_back({angle, -std::cos(angle * std::numbers::pi / 180.0)});
  }
  return out;
}

}  // namespace qm
}  // namespace bellsim
