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

#include <cmath>
#include <limits>
#include <numbers>

#include "doctest.h"
#include "detqkd/schemes.hpp"
#include "oracles.hpp"

using namespace detqkd;

namespace {

const std::vector<double> kGrid{0.1, 0.25, 0.5, 1.0, 2.0, 4.0, 10.0, -0.5, -3.0};

Bit from_sign(int s) { return s > 0 ? Bit::plus : Bit::minus; }

oracle::Vec as_vec(const StateVector& s) { return s.amplitudes(); }

double complementarity_deviation(const Scheme& s, double target) {
  double d = 0.0;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) d = std::max(d, std::abs(std::norm(inner(s.basis_b[i], s.basis_b_prime[j])) - target));
  return d;
}

}  // namespace

TEST_SUITE("schemes") {

TEST_CASE("bit parsing") {
  CHECK(parse_bit("+") == Bit::plus);
  CHECK(parse_bit("-") == Bit::minus);
  CHECK(parse_bit("−") == Bit::minus);
  CHECK_THROWS_AS(parse_bit("x"), std::invalid_argument);
  CHECK(to_string(parse_bits("+ -, +−")) == "+-+-");
  CHECK(flip(Bit::plus) == Bit::minus);
}

TEST_CASE("product scheme orthogonality examples") {
  const Scheme s = product_scheme();
  CHECK(std::abs(inner(s.basis_b[2], s.pair(1).plus)) < 1e-15);
  CHECK(std::abs(inner(s.basis_b[2], s.pair(2).minus)) < 1e-15);
  CHECK(std::abs(inner(s.pair(1).plus, s.pair(1).minus)) < 1e-12);
  CHECK(std::abs(inner(s.pair(1).plus, s.pair(2).plus)) > 0.1);
  CHECK(complementarity_deviation(s, 0.25) < 1e-12);
}

TEST_CASE("k scheme at k = 1") {
  const Scheme s = k_scheme(1.0);
  CHECK(complementarity_deviation(s, 0.25) < 1e-12);
  const double r = 1.0 / std::sqrt(2.0);
  const auto& p = s.pair(1).plus;
  CHECK(std::abs(p[0] - r) < 1e-15);
  CHECK(std::abs(p[1] - r) < 1e-15);
  CHECK(std::abs(p[2]) == 0.0);
  CHECK(std::abs(p[3]) == 0.0);
}

TEST_CASE("complementarity holds only at |k| = 1") {
  CHECK(complementarity_deviation(k_scheme(-1.0), 0.25) < 1e-12);
  CHECK(complementarity_deviation(k_scheme(0.5), 0.25) > 0.01);
  CHECK(complementarity_deviation(k_scheme(2.0), 0.25) > 0.01);
}

TEST_CASE("K is Hermitian, unitary and squares to identity") {
  for (double k : kGrid) {
    CAPTURE(k);
    const auto& m = KMatrix(k).entries();
    CHECK(max_abs_difference(m, adjoint(m)) < 1e-12);
    CHECK(max_abs_difference(multiply(m, adjoint(m)), identity_matrix()) < 1e-12);
    CHECK(max_abs_difference(multiply(m, m), identity_matrix()) < 1e-12);
  }
}

TEST_CASE("K-scheme bases agree with the hand-written oracle") {
  for (double k : kGrid) {
    CAPTURE(k);
    const Scheme s = k_scheme(k);
    const auto ob = oracle::k_prime_basis(k);
    const auto os = oracle::k_signals(k);
    for (std::size_t j = 0; j < 4; ++j)
      for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(s.basis_b_prime[j][i] - ob[j][i]) < 1e-14);
    const StateVector* lib[4] = {&s.pair(1).plus, &s.pair(1).minus, &s.pair(2).plus, &s.pair(2).minus};
    // Up to a global phase.
    for (std::size_t n = 0; n < 4; ++n) CHECK(std::abs(oracle::braket(as_vec(*lib[n]), os[n])) == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("degenerate and invalid k") {
  CHECK_THROWS_AS(KMatrix(0.0), DegenerateParameter);
  CHECK_THROWS_AS(KMatrix(1e-9), DegenerateParameter);
  CHECK_THROWS_AS(KMatrix(1e9), DegenerateParameter);
  CHECK_THROWS_AS(KMatrix(-1e9), DegenerateParameter);
  CHECK_THROWS_AS(KMatrix(std::nan("")), std::invalid_argument);
  CHECK_THROWS_AS(KMatrix{std::numeric_limits<double>::infinity()}, std::invalid_argument);
  CHECK_NOTHROW(KMatrix(1e-6));
  CHECK_NOTHROW(KMatrix(1e6));
  CHECK_THROWS_AS(make_scheme("k", std::nullopt), std::invalid_argument);
  CHECK_THROWS_AS(make_scheme("hexagon", 1.0), std::invalid_argument);
  CHECK_THROWS_AS(k_scheme(1.0).pair(3), std::out_of_range);
}

TEST_CASE("determinism invariant for every scheme") {
  CHECK(satisfies_determinism(product_scheme()));
  CHECK(satisfies_determinism(three_one_scheme()));
  for (double k : {0.25, 0.5, 1.0, 2.0, 4.0, -2.0}) {
    CAPTURE(k);
    CHECK(satisfies_determinism(k_scheme(k)));
    CHECK(satisfies_determinism(k_scheme_four_pairs(k)));
    CHECK(satisfies_determinism(k_scheme_substituted_pairs(k)));
  }
}

TEST_CASE("pairs within a k scheme are neither identical nor orthogonal to each other") {
  for (double k : {0.25, 1.0, 4.0}) {
    const Scheme s = k_scheme(k);
    for (const auto& p : s.pairs) CHECK(std::abs(inner(p.plus, p.minus)) < 1e-12);
    const double o = std::abs(inner(s.pair(1).plus, s.pair(2).plus));
    CHECK(o > 1e-3);
    CHECK(o < 1.0 - 1e-3);
  }
}

TEST_CASE("substituted four-pair construction repeats pairs 1 and 2") {
  const Scheme s = k_scheme_substituted_pairs(1.0);
  REQUIRE(s.pair_count() == 4);
  const double r = 1.0 / std::sqrt(2.0);
  // (|B'1> + |B'2>)/sqrt2 expanded over B.
  const auto ob = oracle::k_prime_basis(1.0);
  oracle::Vec expected{};
  for (int i = 0; i < 4; ++i) expected[i] = r * (ob[0][i] + ob[1][i]);
  CHECK(std::abs(oracle::braket(s.pair(3).plus.amplitudes(), expected)) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(inner(s.pair(3).plus, s.pair(1).plus)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(inner(s.pair(4).plus, s.pair(2).plus)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("four-pair scheme has four distinct pairs") {
  for (double k : {0.5, 1.0, 2.0}) {
    const Scheme s = k_scheme_four_pairs(k);
    REQUIRE(s.pair_count() == 4);
    for (int a = 1; a <= 4; ++a)
      for (int b = a + 1; b <= 4; ++b) CHECK(std::abs(inner(s.pair(a).plus, s.pair(b).plus)) < 1.0 - 1e-6);
  }
}

TEST_CASE("three-one scheme structure") {
  const Scheme s = three_one_scheme();
  CHECK(std::abs(inner(s.basis_b[2], s.basis_b_prime[2])) < 1e-15);
  for (std::size_t j = 0; j < 4; ++j)
    if (j != 2) CHECK(std::abs(inner(s.basis_b[2], s.basis_b[j])) < 1e-15);
  CHECK(complementarity_deviation(s, 0.0) > 0.3);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) {
      const double p = std::norm(inner(s.basis_b[i], s.basis_b_prime[j]));
      CHECK(p == doctest::Approx(i == j ? 0.0 : 1.0 / 3.0).epsilon(1e-14));
    }
  for (const auto& p : s.pairs) CHECK(std::abs(inner(p.plus, p.minus)) < 1e-15);

  const auto& t = three_one_transform();
  CHECK(max_abs_difference(t, adjoint(t)) < 1e-12);
  CHECK(max_abs_difference(multiply(t, adjoint(t)), identity_matrix()) < 1e-12);
  CHECK(max_abs_difference(multiply(t, t), identity_matrix()) < 1e-12);
}

TEST_CASE("three-one bit ensembles are both complete") {
  const Scheme s = three_one_scheme();
  Matrix4 plus{}, minus{};
  for (const auto& p : s.pairs)
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j) {
        plus[i][j] += p.plus[i] * std::conj(p.plus[j]);
        minus[i][j] += p.minus[i] * std::conj(p.minus[j]);
      }
  CHECK(max_abs_difference(plus, identity_matrix()) < 1e-12);
  CHECK(max_abs_difference(minus, identity_matrix()) < 1e-12);
}

TEST_CASE("infer_bit examples") {
  const Scheme prod = product_scheme();
  CHECK(infer_bit(prod, prod.basis_b[2], 1) == Bit::minus);
  CHECK(infer_bit(prod, prod.basis_b[2], 2) == Bit::plus);

  const Scheme t = three_one_scheme();
  CHECK(infer_bit(t, Detector{BasisChoice::b, 2}, 3) == Bit::plus);
  for (int type : {1, 2, 4}) CHECK(infer_bit(t, Detector{BasisChoice::b, 2}, type) == Bit::minus);

  const Scheme k1 = k_scheme(1.0);
  CHECK(infer_bit(k1, k1.basis_b[0], 1) == Bit::plus);
  CHECK_THROWS_AS(infer_bit(k1, k1.basis_b[0], 5), std::out_of_range);
  // Sv overlaps both 1+ and 1- at k = 1.
  CHECK_THROWS_AS(infer_bit(k1, product_state("Sv"), 1), AmbiguousInference);
  CHECK(infer_bit(k1, product_state("Ss"), 1) == Bit::plus);
}

TEST_CASE("needs_classical_info examples") {
  const Scheme prod = product_scheme();
  CHECK_FALSE(needs_classical_info(prod, prod.basis_b[0]));
  CHECK(needs_classical_info(prod, prod.basis_b[1]));
  CHECK_FALSE(needs_classical_info(prod, prod.basis_b[3]));
  const Scheme t = three_one_scheme();
  CHECK(needs_classical_info(t, t.basis_b[2]));
}

TEST_CASE("inference tables match the published grids") {
  for (double k : {0.25, 0.5, 1.0, 2.0, 4.0}) {
    CAPTURE(k);
    const Scheme s = k_scheme(k);
    for (auto basis : {BasisChoice::b, BasisChoice::b_prime}) {
      const auto table = inference_table(s, basis);
      for (int type = 0; type < 2; ++type)
        for (int j = 0; j < 4; ++j) CHECK(table[type][j] == from_sign(oracle::kTable1[type][j]));
    }
  }
  const auto prod_b = inference_table(product_scheme(), BasisChoice::b);
  for (int type = 0; type < 2; ++type)
    for (int j = 0; j < 4; ++j) CHECK(prod_b[type][j] == from_sign(oracle::kTable1[type][j]));

  const Scheme t = three_one_scheme();
  const auto tb = inference_table(t, BasisChoice::b);
  const auto tbp = inference_table(t, BasisChoice::b_prime);
  for (int type = 0; type < 4; ++type)
    for (int j = 0; j < 4; ++j) {
      CHECK(tb[type][j] == from_sign(oracle::kTable2B[type][j]));
      CHECK(tbp[type][j] == from_sign(oracle::kTable2BPrime[type][j]));
    }
}

TEST_CASE("four-pair tables: Table 1 in B and its complement in B'") {
  const Scheme s = k_scheme_four_pairs(2.0);
  const auto b = inference_table(s, BasisChoice::b);
  const auto bp = inference_table(s, BasisChoice::b_prime);
  for (int type = 2; type < 4; ++type)
    for (int j = 0; j < 4; ++j) {
      CHECK(b[type][j] == from_sign(oracle::kTable1[type - 2][j]));
      CHECK(bp[type][j] == flip(from_sign(oracle::kTable1[type - 2][j])));
    }
}

TEST_CASE("make_scheme names") {
  CHECK(make_scheme("product", std::nullopt).name == "product");
  CHECK(make_scheme("three-one", std::nullopt).pair_count() == 4);
  CHECK(make_scheme("k", 2.0).k == 2.0);
  CHECK(make_scheme("k4", 2.0).pair_count() == 4);
  CHECK(make_scheme("k4-substitution", 2.0).pair_count() == 4);
}

}  // TEST_SUITE
