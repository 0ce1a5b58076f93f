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

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "detqkd/hilbert4.hpp"

namespace detqkd {

enum class Bit { plus, minus };

inline Bit flip(Bit b) { return b == Bit::plus ? Bit::minus : Bit::plus; }
/// "+" or "-".
std::string to_string(Bit b);
/// Accepts "+" and "-" (and the Unicode minus sign). Throws std::invalid_argument otherwise.
Bit parse_bit(std::string_view s);
std::vector<Bit> parse_bits(std::string_view s);
std::string to_string(const std::vector<Bit>& bits);

/// k too close to 0 or infinity: Bob's two bases become essentially identical.
class DegenerateParameter : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A detected state is orthogonal to both or neither member of a pair.
class AmbiguousInference : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kOrthogonalityTolerance = 1e-10;
inline constexpr double kMinK = 1e-6;
inline constexpr double kMaxK = 1e6;

struct StatePair {
  StateVector plus;
  StateVector minus;
  int type_id = 1;

  const StateVector& state(Bit b) const { return b == Bit::plus ? plus : minus; }
};

enum class BasisChoice { b, b_prime };

inline std::string_view to_string(BasisChoice c) { return c == BasisChoice::b ? "B" : "B'"; }

/// One of Bob's eight detectors.
struct Detector {
  BasisChoice basis;
  std::size_t index;  // 0-based
};

/// Alice's signal states together with Bob's two measurement bases.
struct Scheme {
  std::string name;
  std::optional<double> k;
  std::vector<StatePair> pairs;
  MeasurementBasis basis_b;
  MeasurementBasis basis_b_prime;

  /// Throws std::out_of_range for an unknown type id.
  const StatePair& pair(int type_id) const;
  const MeasurementBasis& basis(BasisChoice c) const { return c == BasisChoice::b ? basis_b : basis_b_prime; }
  const StateVector& detector_state(Detector d) const { return basis(d.basis)[d.index]; }
  int pair_count() const { return static_cast<int>(pairs.size()); }
};

/// Hermitian unitary K(k) relating Bob's bases, |B'_j> = sum_i |B_i> K_ij.
class KMatrix {
 public:
  /// Throws DegenerateParameter for |k| outside [kMinK, kMaxK] and
  /// std::invalid_argument for non-finite k.
  explicit KMatrix(double k);

  double k() const { return k_; }
  const Matrix4& entries() const { return m_; }

 private:
  double k_;
  Matrix4 m_;
};

/// Product-state scheme: pairs (Rs, La) and (Sv, Ah); B = (Rv, Rh, Lv, Lh),
/// B' = (Ss, As, Sa, Aa).
Scheme product_scheme();

/// Two-pair scheme parameterized by k. B is canonical, B' = B K(k).
Scheme k_scheme(double k);

/// Four-pair scheme: the two pairs of k_scheme(k) plus the same expressions
/// evaluated at -1/k, i.e. (k|B1> - |B2>, |B3> + k|B4>) and
/// (k|B1> - |B3>, |B2> + k|B4>), normalized. Pairs 3 and 4 carry Table 1's
/// sign pattern in B and its complement in B'.
Scheme k_scheme_four_pairs(double k);

/// Pairs 1-2 of k_scheme(k) followed by the same expansions over the B'
/// vectors. These coincide with pairs 1-2 for every k (K is its own
/// inverse), so the scheme behaves like the two-pair scheme. Kept to report
/// that gap.
Scheme k_scheme_substituted_pairs(double k);

/// (i/sqrt3) times the zero-diagonal sign matrix relating the bra rows of
/// the three-one bases, <B_i| = sum_j T_ij <B'_j|.
Matrix4 three_one_transform();

/// Scheme with B' canonical, B from three_one_transform(), and
/// |i+> = |B_i>, |i-> = |B'_i> for i = 1..4.
Scheme three_one_scheme();

/// Builds a scheme by name: "product", "k", "k4", "k4-substitution",
/// "three-one". k is required for the k-family and ignored otherwise.
/// Throws std::invalid_argument for an unknown name.
Scheme make_scheme(std::string_view name, std::optional<double> k);

/// The bit for which `detected` is possible: "+" if <detected|type-> = 0,
/// "-" if <detected|type+> = 0. Throws AmbiguousInference otherwise and
/// std::out_of_range for an unknown type id.
Bit infer_bit(const Scheme& scheme, const StateVector& detected, int type_id);
Bit infer_bit(const Scheme& scheme, Detector detected, int type_id);

/// False iff the inferred bit does not depend on the pair type.
bool needs_classical_info(const Scheme& scheme, const StateVector& detected);

/// Inferred bits indexed [type_id - 1][detector index] for one basis.
std::vector<std::vector<Bit>> inference_table(const Scheme& scheme, BasisChoice basis);

/// True when every detector of both bases is orthogonal to exactly one
/// member of every pair.
bool satisfies_determinism(const Scheme& scheme);

}  // namespace detqkd
