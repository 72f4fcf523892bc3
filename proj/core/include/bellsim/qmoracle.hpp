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
#include <complex>
#include <span>
#include <vector>

namespace bellsim {

class Rng;

/// Direction in 3D Euclidean space, normalized on construction.
class UnitVector3 {
 public:
  /// Throws std::invalid_argument on a zero or non-finite vector.
  UnitVector3(double x, double y, double z);

  /// Direction at `degrees` from +z toward +x in the xz-plane.
  static UnitVector3 from_xz_degrees(double degrees);
  /// Uniform on the sphere.
  static UnitVector3 random(Rng& rng);

  [[nodiscard]] double x() const { return x_; }
  [[nodiscard]] double y() const { return y_; }
  [[nodiscard]] double z() const { return z_; }
  [[nodiscard]] double dot(const UnitVector3& o) const { return x_ * o.x_ + y_ * o.y_ + z_ * o.z_; }

  friend bool operator==(const UnitVector3&, const UnitVector3&) = default;

 private:
  double x_, y_, z_;
};

namespace qm {

using Complex = std::complex<double>;

/// Dense row-major 4x4 complex matrix on two qubits.
class Matrix4 {
 public:
  Matrix4() : m_{} {}

  static Matrix4 identity();

  [[nodiscard]] Complex& operator()(std::size_t r, std::size_t c) { return m_[4 * r + c]; }
  [[nodiscard]] const Complex& operator()(std::size_t r, std::size_t c) const { return m_[4 * r + c]; }

  Matrix4& operator+=(const Matrix4& o);
  Matrix4& operator*=(double s);
  friend Matrix4 operator+(Matrix4 a, const Matrix4& b) { return a += b; }
  friend Matrix4 operator-(Matrix4 a, const Matrix4& b);
  friend Matrix4 operator*(double s, Matrix4 a) { return a *= s; }
  friend Matrix4 operator*(const Matrix4& a, const Matrix4& b);

  /// max |a_rc - conj(a_cr)|
  [[nodiscard]] double hermitian_defect() const;
  /// max |a_rc|
  [[nodiscard]] double max_abs() const;

 private:
  std::array<Complex, 16> m_;
};

/// Hermitian two-qubit observable.
class Observable {
 public:
  /// Throws std::invalid_argument when the matrix is not Hermitian to 1e-12.
  explicit Observable(const Matrix4& matrix);

  [[nodiscard]] const Matrix4& matrix() const { return matrix_; }

 private:
  Matrix4 matrix_;
};

/// (|01> - |10>) / sqrt(2) in the computational basis.
class SingletState {
 public:
  SingletState();
  [[nodiscard]] const std::array<Complex, 4>& amplitudes() const { return amp_; }

 private:
  std::array<Complex, 4> amp_;
};

/// (a.sigma) (x) (b.sigma)
Observable spin_product(const UnitVector3& a, const UnitVector3& b);

/// <psi|O|psi>; the imaginary part is zero for Hermitian O.
double expectation(const Observable& obs, const SingletState& state);

/// <psi| a.sigma (x) b.sigma |psi>. Equals -a.b.
double singlet_correlation(const UnitVector3& a, const UnitVector3& b);

/// A1B1 + A1B2 + A2B1 - A2B2.
Observable chsh_operator(const UnitVector3& a1, const UnitVector3& a2, const UnitVector3& b1,
                         const UnitVector3& b2);

/// |<sum w_k O_k> - sum w_k <O_k>|. Throws std::invalid_argument on length mismatch.
double linearity_check(std::span<const Observable> observables, std::span<const double> weights,
                       const SingletState& state);

struct EigenSystem {
  std::array<double, 4> values;  // ascending
  Matrix4 vectors;               // column k is the eigenvector of values[k]
};

/// Cyclic complex Jacobi iteration for a Hermitian 4x4 matrix.
EigenSystem hermitian_eigen(const Matrix4& matrix);

/// max |eigenvalue|
double operator_norm(const Observable& obs);

struct CurvePoint {
  double angle_degrees;
  double correlation;
};

/// -cos(theta) on [start, stop] with the given step. Throws std::invalid_argument
/// on a non-positive step or start > stop.
std::vector<CurvePoint> qm_curve(double start_degrees, double stop_degrees, double step_degrees);

}  // namespace qm
}  // namespace bellsim
