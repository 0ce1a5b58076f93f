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

#include "detqkd/hilbert4.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>

namespace detqkd {

namespace {

bool all_finite(const Amplitudes& a) {
  return std::all_of(a.begin(), a.end(),
                     [](const Amplitude& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

double squared_norm(const Amplitudes& a) {
  double s = 0.0;
  for (const auto& z : a) s += std::norm(z);
  return s;
}

std::array<Amplitude, 2> spatial_qubit(Spatial s) {
  const double r = std::numbers::sqrt2 / 2.0;
  switch (s) {
    case Spatial::R: return {1.0, 0.0};
    case Spatial::L: return {0.0, 1.0};
    case Spatial::S: return {r, r};
    case Spatial::A: return {r, -r};
  }
  throw std::invalid_argument("unknown spatial state");
}

std::array<Amplitude, 2> polarization_qubit(Polarization p) {
  const double r = std::numbers::sqrt2 / 2.0;
  switch (p) {
    case Polarization::v: return {1.0, 0.0};
    case Polarization::h: return {0.0, 1.0};
    case Polarization::s: return {r, r};
    case Polarization::a: return {r, -r};
  }
  throw std::invalid_argument("unknown polarization state");
}

}  // namespace

StateVector StateVector::from_amplitudes(const Amplitudes& amps) {
  if (!all_finite(amps)) throw std::invalid_argument("StateVector: non-finite amplitude");
  const double n = squared_norm(amps);
  if (std::abs(n - 1.0) > kNormTolerance) {
    throw std::invalid_argument("StateVector: squared norm " + std::to_string(n) + " is not 1");
  }
  return StateVector(amps);
}

StateVector StateVector::normalized(const Amplitudes& amps) {
  if (!all_finite(amps)) throw std::invalid_argument("StateVector: non-finite amplitude");
  const double n = std::sqrt(squared_norm(amps));
  if (n < 1e-300) throw std::invalid_argument("StateVector: cannot normalize the zero vector");
  Amplitudes out = amps;
  for (auto& z : out) z /= n;
  return StateVector(out);
}

StateVector StateVector::canonical(std::size_t j) {
  if (j >= kDim) throw std::invalid_argument("StateVector::canonical: index out of range");
  Amplitudes a{};
  a[j] = 1.0;
  return StateVector(a);
}

StateVector StateVector::with_phase(Amplitude phase) const {
  Amplitudes out = amps_;
  for (auto& z : out) z *= phase;
  return from_amplitudes(out);
}

MeasurementBasis::MeasurementBasis(std::string label, const std::array<StateVector, 4>& vectors)
    : label_(std::move(label)), vectors_(vectors) {
  const double err = orthonormality_error();
  if (err > kOrthonormalTolerance) {
    throw std::invalid_argument("MeasurementBasis '" + label_ + "' is not orthonormal (error " +
                                std::to_string(err) + ")");
  }
}

MeasurementBasis MeasurementBasis::canonical(std::string label) {
  return MeasurementBasis(std::move(label), {StateVector::canonical(0), StateVector::canonical(1),
                                             StateVector::canonical(2), StateVector::canonical(3)});
}

MeasurementBasis MeasurementBasis::from_columns(std::string label, const Matrix4& columns) {
  std::array<StateVector, 4> v;
  for (std::size_t j = 0; j < kDim; ++j) {
    Amplitudes a;
    for (std::size_t i = 0; i < kDim; ++i) a[i] = columns[i][j];
    v[j] = StateVector::from_amplitudes(a);
  }
  return MeasurementBasis(std::move(label), v);
}

double MeasurementBasis::orthonormality_error() const {
  const Matrix4 g = gram(*this);
  return max_abs_difference(g, identity_matrix());
}

HermitianMatrix4::HermitianMatrix4(const Matrix4& entries) {
  for (std::size_t i = 0; i < kDim; ++i) {
    for (std::size_t j = i; j < kDim; ++j) {
      const Amplitude a = entries[i][j];
      const Amplitude b = std::conj(entries[j][i]);
      if (!std::isfinite(a.real()) || !std::isfinite(a.imag()) || std::abs(a - b) > kHermitianTolerance) {
        throw std::invalid_argument("HermitianMatrix4: entries are not conjugate-symmetric");
      }
      const Amplitude mean = 0.5 * (a + b);
      m_[i][j] = i == j ? Amplitude{mean.real(), 0.0} : mean;
      m_[j][i] = std::conj(m_[i][j]);
    }
  }
}

HermitianMatrix4 HermitianMatrix4::identity() { return HermitianMatrix4(identity_matrix()); }

HermitianMatrix4 HermitianMatrix4::diagonal(const std::array<double, 4>& d) {
  Matrix4 m{};
  for (std::size_t i = 0; i < kDim; ++i) m[i][i] = d[i];
  return HermitianMatrix4(m);
}

HermitianMatrix4 HermitianMatrix4::projector(const StateVector& psi) {
  HermitianMatrix4 h;
  h.add_projector(psi, 1.0);
  return h;
}

double HermitianMatrix4::trace() const {
  double t = 0.0;
  for (std::size_t i = 0; i < kDim; ++i) t += m_[i][i].real();
  return t;
}

double HermitianMatrix4::expectation(const StateVector& psi) const {
  Amplitude acc{};
  for (std::size_t i = 0; i < kDim; ++i) {
    Amplitude row{};
    for (std::size_t j = 0; j < kDim; ++j) row += m_[i][j] * psi[j];
    acc += std::conj(psi[i]) * row;
  }
  return acc.real();
}

HermitianMatrix4& HermitianMatrix4::operator+=(const HermitianMatrix4& rhs) {
  for (std::size_t i = 0; i < kDim; ++i)
    for (std::size_t j = 0; j < kDim; ++j) m_[i][j] += rhs.m_[i][j];
  return *this;
}

HermitianMatrix4& HermitianMatrix4::operator-=(const HermitianMatrix4& rhs) {
  for (std::size_t i = 0; i < kDim; ++i)
    for (std::size_t j = 0; j < kDim; ++j) m_[i][j] -= rhs.m_[i][j];
  return *this;
}

HermitianMatrix4& HermitianMatrix4::operator*=(double s) {
  for (auto& row : m_)
    for (auto& z : row) z *= s;
  return *this;
}

void HermitianMatrix4::add_projector(const StateVector& psi, double weight) {
  for (std::size_t i = 0; i < kDim; ++i) {
    m_[i][i] += weight * std::norm(psi[i]);
    for (std::size_t j = i + 1; j < kDim; ++j) {
      const Amplitude z = weight * psi[i] * std::conj(psi[j]);
      m_[i][j] += z;
      m_[j][i] += std::conj(z);
    }
  }
}

Amplitude inner(const Amplitudes& u, const Amplitudes& v) {
  Amplitude acc{};
  for (std::size_t i = 0; i < kDim; ++i) acc += std::conj(u[i]) * v[i];
  return acc;
}

Amplitude inner(const StateVector& u, const StateVector& v) { return inner(u.amplitudes(), v.amplitudes()); }

StateVector product_state(Spatial spatial, Polarization polar) {
  const auto s = spatial_qubit(spatial);
  const auto p = polarization_qubit(polar);
  return StateVector::normalized({s[0] * p[0], s[0] * p[1], s[1] * p[0], s[1] * p[1]});
}

StateVector product_state(std::string_view label) {
  if (label.size() != 2) throw std::invalid_argument("product_state: expected two letters, got '" + std::string(label) + "'");
  Spatial s;
  switch (label[0]) {
    case 'R': s = Spatial::R; break;
    case 'L': s = Spatial::L; break;
    case 'S': s = Spatial::S; break;
    case 'A': s = Spatial::A; break;
    default: throw std::invalid_argument("product_state: unknown spatial letter '" + std::string(1, label[0]) + "'");
  }
  Polarization p;
  switch (label[1]) {
    case 'v': p = Polarization::v; break;
    case 'h': p = Polarization::h; break;
    case 's': p = Polarization::s; break;
    case 'a': p = Polarization::a; break;
    default: throw std::invalid_argument("product_state: unknown polarization letter '" + std::string(1, label[1]) + "'");
  }
  return product_state(s, p);
}

std::array<double, 4> born_probabilities(const MeasurementBasis& basis, const StateVector& state) {
  std::array<double, 4> p;
  for (std::size_t j = 0; j < kDim; ++j) p[j] = std::clamp(std::norm(inner(basis[j], state)), 0.0, 1.0);
  return p;
}

std::size_t sample_outcome(const MeasurementBasis& basis, const StateVector& state, RandomStream& rng) {
  const auto p = born_probabilities(basis, state);
  const double u = rng.uniform();
  double cumulative = 0.0;
  for (std::size_t j = 0; j < kDim; ++j) {
    cumulative += p[j];
    if (u < cumulative) return j;
  }
  // u landed above the rounded total; take the last outcome that can occur.
  for (std::size_t j = kDim; j-- > 0;) {
    if (p[j] > 0.0) return j;
  }
  return kDim - 1;
}

std::array<EigenPair, 4> eigen_decompose(const HermitianMatrix4& h) {
  Matrix4 a = h.entries();
  Matrix4 v = identity_matrix();

  double scale = 0.0;
  for (const auto& row : a)
    for (const auto& z : row) scale = std::max(scale, std::abs(z));

  constexpr int kMaxSweeps = 64;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < kDim; ++p)
      for (std::size_t q = p + 1; q < kDim; ++q) off += std::norm(a[p][q]);
    if (off <= 1e-36 * std::max(scale * scale, 1e-300)) break;

    for (std::size_t p = 0; p < kDim; ++p) {
      for (std::size_t q = p + 1; q < kDim; ++q) {
        const double mag = std::abs(a[p][q]);
        if (mag == 0.0) continue;

        // Rotate the phase of coordinate q so that a[p][q] becomes real.
        const Amplitude phase = std::conj(a[p][q]) / mag;  // e^{-i arg a_pq}
        for (std::size_t k = 0; k < kDim; ++k) {
          a[k][q] *= phase;
          v[k][q] *= phase;
        }
        for (std::size_t k = 0; k < kDim; ++k) a[q][k] *= std::conj(phase);
        a[p][q] = mag;
        a[q][p] = mag;

        const double app = a[p][p].real();
        const double aqq = a[q][q].real();
        const double theta = (aqq - app) / (2.0 * mag);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        for (std::size_t k = 0; k < kDim; ++k) {
          const Amplitude akp = a[k][p];
          const Amplitude akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < kDim; ++k) {
          const Amplitude apk = a[p][k];
          const Amplitude aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < kDim; ++k) {
          const Amplitude vkp = v[k][p];
          const Amplitude vkq = v[k][q];
          v[k][p] = c * vkp - s * vkq;
          v[k][q] = s * vkp + c * vkq;
        }
        a[p][q] = 0.0;
        a[q][p] = 0.0;
      }
    }
  }

  std::array<std::size_t, 4> order{0, 1, 2, 3};
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a[i][i].real() < a[j][j].real(); });

  std::array<EigenPair, 4> out;
  for (std::size_t n = 0; n < kDim; ++n) {
    const std::size_t col = order[n];
    Amplitudes vec;
    for (std::size_t i = 0; i < kDim; ++i) vec[i] = v[i][col];
    out[n] = EigenPair{a[col][col].real(), StateVector::normalized(vec)};
  }
  return out;
}

double trace_norm(const HermitianMatrix4& h) {
  double s = 0.0;
  for (const auto& e : eigen_decompose(h)) s += std::abs(e.value);
  return s;
}

Matrix4 multiply(const Matrix4& a, const Matrix4& b) {
  Matrix4 c{};
  for (std::size_t i = 0; i < kDim; ++i)
    for (std::size_t k = 0; k < kDim; ++k)
      for (std::size_t j = 0; j < kDim; ++j) c[i][j] += a[i][k] * b[k][j];
  return c;
}

Matrix4 adjoint(const Matrix4& a) {
  Matrix4 c;
  for (std::size_t i = 0; i < kDim; ++i)
    for (std::size_t j = 0; j < kDim; ++j) c[i][j] = std::conj(a[j][i]);
  return c;
}

Matrix4 identity_matrix() {
  Matrix4 m{};
  for (std::size_t i = 0; i < kDim; ++i) m[i][i] = 1.0;
  return m;
}

double max_abs_difference(const Matrix4& a, const Matrix4& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < kDim; ++i)
    for (std::size_t j = 0; j < kDim; ++j) d = std::max(d, std::abs(a[i][j] - b[i][j]));
  return d;
}

Matrix4 gram(const MeasurementBasis& basis) {
  Matrix4 g;
  for (std::size_t i = 0; i < kDim; ++i)
    for (std::size_t j = 0; j < kDim; ++j) g[i][j] = inner(basis[i], basis[j]);
  return g;
}

}  // namespace detqkd
