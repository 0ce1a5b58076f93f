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

#include "detqkd/schemes.hpp"

#include <cmath>
#include <sstream>
#include <string>

namespace detqkd {

namespace {

Amplitudes combine(const MeasurementBasis& basis, const std::array<double, 4>& coeffs) {
  Amplitudes out{};
  for (std::size_t j = 0; j < kDim; ++j)
    for (std::size_t i = 0; i < kDim; ++i) out[i] += coeffs[j] * basis[j][i];
  return out;
}

// The two pairs (|B1> + k|B2>, k|B3> - |B4>) and (|B1> + k|B3>, k|B2> - |B4>)
// expanded over `basis`.
std::vector<StatePair> k_pairs(const MeasurementBasis& basis, double k, int first_type_id) {
  return {
      StatePair{StateVector::normalized(combine(basis, {1.0, k, 0.0, 0.0})),
                StateVector::normalized(combine(basis, {0.0, 0.0, k, -1.0})), first_type_id},
      StatePair{StateVector::normalized(combine(basis, {1.0, 0.0, k, 0.0})),
                StateVector::normalized(combine(basis, {0.0, k, 0.0, -1.0})), first_type_id + 1},
  };
}

bool vanishes(const StateVector& a, const StateVector& b) { return std::abs(inner(a, b)) <= kOrthogonalityTolerance; }

}  // namespace

std::string to_string(Bit b) { return b == Bit::plus ? "+" : "-"; }

Bit parse_bit(std::string_view s) {
  if (s == "+") return Bit::plus;
  if (s == "-" || s == "−") return Bit::minus;
  throw std::invalid_argument("not a bit: '" + std::string(s) + "'");
}

std::vector<Bit> parse_bits(std::string_view s) {
  std::vector<Bit> out;
  std::size_t i = 0;
  while (i < s.size()) {
    if (s[i] == '+' || s[i] == '-') {
      out.push_back(parse_bit(s.substr(i, 1)));
      ++i;
    } else if (s.substr(i, 3) == "−") {
      out.push_back(Bit::minus);
      i += 3;
    } else if (s[i] == ' ' || s[i] == ',') {
      ++i;
    } else {
      throw std::invalid_argument("invalid character in bit string: '" + std::string(s) + "'");
    }
  }
  return out;
}

std::string to_string(const std::vector<Bit>& bits) {
  std::string s;
  s.reserve(bits.size());
  for (Bit b : bits) s += b == Bit::plus ? '+' : '-';
  return s;
}

const StatePair& Scheme::pair(int type_id) const {
  if (type_id < 1 || type_id > pair_count()) {
    throw std::out_of_range("scheme '" + name + "' has no pair of type " + std::to_string(type_id));
  }
  return pairs[static_cast<std::size_t>(type_id - 1)];
}

KMatrix::KMatrix(double k) : k_(k) {
  if (!std::isfinite(k)) throw std::invalid_argument("k must be finite");
  if (std::abs(k) < kMinK || std::abs(k) > kMaxK) {
    std::ostringstream os;
    os << "degenerate k = " << k << ": |k| must lie in [1e-6, 1e6], otherwise the two bases coincide";
    throw DegenerateParameter(os.str());
  }
  const double n = 1.0 + k * k;
  const double kk = k * k;
  const double raw[4][4] = {
      {1.0, k, k, kk},
      {k, kk, -1.0, -k},
      {k, -1.0, kk, -k},
      {kk, -k, -k, 1.0},
  };
  for (std::size_t i = 0; i < kDim; ++i)
    for (std::size_t j = 0; j < kDim; ++j) m_[i][j] = raw[i][j] / n;
}

Scheme product_scheme() {
  MeasurementBasis b("B", {product_state("Rv"), product_state("Rh"), product_state("Lv"), product_state("Lh")});
  MeasurementBasis bp("B'", {product_state("Ss"), product_state("As"), product_state("Sa"), product_state("Aa")});
  std::vector<StatePair> pairs{
      {product_state("Rs"), product_state("La"), 1},
      {product_state("Sv"), product_state("Ah"), 2},
  };
  return Scheme{"product", std::nullopt, std::move(pairs), std::move(b), std::move(bp)};
}

Scheme k_scheme(double k) {
  const KMatrix km(k);
  auto b = MeasurementBasis::canonical("B");
  auto bp = MeasurementBasis::from_columns("B'", km.entries());
  auto pairs = k_pairs(b, k, 1);
  return Scheme{"k", k, std::move(pairs), std::move(b), std::move(bp)};
}

Scheme k_scheme_four_pairs(double k) {
  Scheme s = k_scheme(k);
  s.name = "k4";
  for (auto& p : k_pairs(s.basis_b, -1.0 / k, 3)) s.pairs.push_back(std::move(p));
  return s;
}

Scheme k_scheme_substituted_pairs(double k) {
  Scheme s = k_scheme(k);
  s.name = "k4-substitution";
  for (auto& p : k_pairs(s.basis_b_prime, k, 3)) s.pairs.push_back(std::move(p));
  return s;
}

Matrix4 three_one_transform() {
  const double sign[4][4] = {
      {0, 1, 1, 1},
      {-1, 0, -1, 1},
      {-1, 1, 0, -1},
      {-1, -1, 1, 0},
  };
  const Amplitude factor{0.0, 1.0 / std::sqrt(3.0)};
  Matrix4 t;
  for (std::size_t i = 0; i < kDim; ++i)
    for (std::size_t j = 0; j < kDim; ++j) t[i][j] = factor * sign[i][j];
  return t;
}

Scheme three_one_scheme() {
  const Matrix4 t = three_one_transform();
  auto bp = MeasurementBasis::canonical("B'");
  // With B' canonical, the ket |B_i> has amplitudes conj(T_ij).
  std::array<StateVector, 4> rows;
  for (std::size_t i = 0; i < kDim; ++i) {
    Amplitudes a;
    for (std::size_t j = 0; j < kDim; ++j) a[j] = std::conj(t[i][j]);
    rows[i] = StateVector::from_amplitudes(a);
  }
  MeasurementBasis b("B", rows);
  std::vector<StatePair> pairs;
  for (std::size_t i = 0; i < kDim; ++i) pairs.push_back({b[i], bp[i], static_cast<int>(i) + 1});
  return Scheme{"three-one", std::nullopt, std::move(pairs), std::move(b), std::move(bp)};
}

Scheme make_scheme(std::string_view name, std::optional<double> k) {
  const auto need_k = [&]() {
    if (!k) throw std::invalid_argument("scheme '" + std::string(name) + "' requires a value for k");
    return *k;
  };
  if (name == "product") return product_scheme();
  if (name == "three-one") return three_one_scheme();
  if (name == "k") return k_scheme(need_k());
  if (name == "k4") return k_scheme_four_pairs(need_k());
  if (name == "k4-substitution") return k_scheme_substituted_pairs(need_k());
  throw std::invalid_argument("unknown scheme '" + std::string(name) +
                              "' (expected product, k, k4, k4-substitution or three-one)");
}

Bit infer_bit(const Scheme& scheme, const StateVector& detected, int type_id) {
  const StatePair& p = scheme.pair(type_id);
  const bool minus_vanishes = vanishes(detected, p.minus);
  const bool plus_vanishes = vanishes(detected, p.plus);
  if (minus_vanishes && !plus_vanishes) return Bit::plus;
  if (plus_vanishes && !minus_vanishes) return Bit::minus;
  throw AmbiguousInference("scheme '" + scheme.name + "': detected state is orthogonal to " +
                           (plus_vanishes ? "both" : "neither") + " members of pair " + std::to_string(type_id));
}

Bit infer_bit(const Scheme& scheme, Detector detected, int type_id) {
  return infer_bit(scheme, scheme.detector_state(detected), type_id);
}

bool needs_classical_info(const Scheme& scheme, const StateVector& detected) {
  const Bit first = infer_bit(scheme, detected, 1);
  for (int t = 2; t <= scheme.pair_count(); ++t) {
    if (infer_bit(scheme, detected, t) != first) return true;
  }
  return false;
}

std::vector<std::vector<Bit>> inference_table(const Scheme& scheme, BasisChoice basis) {
  std::vector<std::vector<Bit>> table;
  for (int t = 1; t <= scheme.pair_count(); ++t) {
    std::vector<Bit> row;
    for (std::size_t j = 0; j < kDim; ++j) row.push_back(infer_bit(scheme, Detector{basis, j}, t));
    table.push_back(std::move(row));
  }
  return table;
}

bool satisfies_determinism(const Scheme& scheme) {
  for (const auto& p : scheme.pairs) {
    for (BasisChoice c : {BasisChoice::b, BasisChoice::b_prime}) {
      for (const auto& d : scheme.basis(c).vectors()) {
        if (vanishes(d, p.plus) == vanishes(d, p.minus)) return false;
      }
    }
  }
  return true;
}

}  // namespace detqkd
