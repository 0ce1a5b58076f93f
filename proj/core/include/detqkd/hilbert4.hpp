// Copyright 2026 The detqkd Authors
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

// Linear algebra over the four-dimensional Hilbert space of one photon that
// carries a spatial qubit (R/L) and a polarization qubit (v/h).
//
// Canonical basis order is (Rv, Rh, Lv, Lh). Global phases are kept as given;
// compare states through |<u|v>| when physical equality is meant.

#include <array>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

#include "detqkd/random.hpp"

namespace detqkd {

using Amplitude = std::complex<double>;
using Amplitudes = std::array<Amplitude, 4>;
using Matrix4 = std::array<std::array<Amplitude, 4>, 4>;

inline constexpr std::size_t kDim = 4;
inline constexpr double kNormTolerance = 1e-12;
inline constexpr double kOrthonormalTolerance = 1e-10;
inline constexpr double kHermitianTolerance = 1e-12;

/// A unit-norm pure state with finite amplitudes.
class StateVector {
 public:
  /// |Rv>.
  StateVector() : amps_{Amplitude{1.0, 0.0}, {}, {}, {}} {}

  /// Throws std::invalid_argument unless the amplitudes are finite and
  /// their squared norm is within kNormTolerance of 1.
  static StateVector from_amplitudes(const Amplitudes& amps);
  /// Scales to unit norm. Throws on a zero or non-finite vector.
  static StateVector normalized(const Amplitudes& amps);
  /// j-th vector of the canonical basis.
  static StateVector canonical(std::size_t j);

  const Amplitudes& amplitudes() const { return amps_; }
  const Amplitude& operator[](std::size_t i) const { return amps_[i]; }

  /// Multiplies by a unit-modulus phase.
  StateVector with_phase(Amplitude phase) const;

 private:
  explicit StateVector(const Amplitudes& amps) : amps_(amps) {}
  Amplitudes amps_;
};

/// Four mutually orthonormal states, e.g. one of Bob's detector settings.
class MeasurementBasis {
 public:
  /// Throws std::invalid_argument when |<v_i|v_j> - delta_ij| exceeds
  /// kOrthonormalTolerance for any pair.
  MeasurementBasis(std::string label, const std::array<StateVector, 4>& vectors);

  static MeasurementBasis canonical(std::string label = "canonical");
  /// Basis whose j-th vector is column j of `columns`.
  static MeasurementBasis from_columns(std::string label, const Matrix4& columns);

  const std::string& label() const { return label_; }
  const std::array<StateVector, 4>& vectors() const { return vectors_; }
  const StateVector& operator[](std::size_t j) const { return vectors_[j]; }

  /// Largest |<v_i|v_j> - delta_ij| over all pairs.
  double orthonormality_error() const;

 private:
  std::string label_;
  std::array<StateVector, 4> vectors_;
};

/// Conjugate-symmetric 4x4 complex matrix.
class HermitianMatrix4 {
 public:
  HermitianMatrix4() = default;
  /// Throws std::invalid_argument if entries are not Hermitian within
  /// kHermitianTolerance. The stored matrix is symmetrized exactly.
  explicit HermitianMatrix4(const Matrix4& entries);

  static HermitianMatrix4 identity();
  static HermitianMatrix4 diagonal(const std::array<double, 4>& d);
  /// |psi><psi|
  static HermitianMatrix4 projector(const StateVector& psi);

  const Matrix4& entries() const { return m_; }
  const Amplitude& operator()(std::size_t i, std::size_t j) const { return m_[i][j]; }

  double trace() const;
  /// <psi|H|psi>, real for Hermitian H.
  double expectation(const StateVector& psi) const;

  HermitianMatrix4& operator+=(const HermitianMatrix4& rhs);
  HermitianMatrix4& operator-=(const HermitianMatrix4& rhs);
  HermitianMatrix4& operator*=(double s);

  friend HermitianMatrix4 operator+(HermitianMatrix4 a, const HermitianMatrix4& b) { return a += b; }
  friend HermitianMatrix4 operator-(HermitianMatrix4 a, const HermitianMatrix4& b) { return a -= b; }
  friend HermitianMatrix4 operator*(double s, HermitianMatrix4 a) { return a *= s; }

  /// Adds w |psi><psi| in place.
  void add_projector(const StateVector& psi, double weight);

 private:
  Matrix4 m_{};
};

struct EigenPair {
  double value;
  StateVector vector;
};

enum class Spatial { R, L, S, A };
enum class Polarization { v, h, s, a };

/// <u|v>, conjugating u.
Amplitude inner(const StateVector& u, const StateVector& v);
Amplitude inner(const Amplitudes& u, const Amplitudes& v);

/// Spatial qubit tensor polarization qubit; S/A and s/a are (first +/- second)/sqrt2.
StateVector product_state(Spatial spatial, Polarization polar);
/// Two-letter label such as "Rv", "Ss" or "Ah". Throws std::invalid_argument
/// on an unknown letter.
StateVector product_state(std::string_view label);

/// Born-rule probabilities |<basis_j|state>|^2, clamped to [0, 1].
std::array<double, 4> born_probabilities(const MeasurementBasis& basis, const StateVector& state);

/// Draws an outcome by inverse CDF over the fixed outcome order. Consumes
/// exactly one uniform from `rng`.
std::size_t sample_outcome(const MeasurementBasis& basis, const StateVector& state, RandomStream& rng);

/// Eigenpairs of a Hermitian matrix, ascending by eigenvalue, with
/// orthonormal eigenvectors. Cyclic complex Jacobi rotations.
std::array<EigenPair, 4> eigen_decompose(const HermitianMatrix4& h);

/// Sum of |eigenvalue|.
double trace_norm(const HermitianMatrix4& h);

Matrix4 multiply(const Matrix4& a, const Matrix4& b);
Matrix4 adjoint(const Matrix4& a);
Matrix4 identity_matrix();
/// Largest entrywise |a - b|.
double max_abs_difference(const Matrix4& a, const Matrix4& b);
/// Gram matrix G_ij = <v_i|v_j>.
Matrix4 gram(const MeasurementBasis& basis);

}  // namespace detqkd
