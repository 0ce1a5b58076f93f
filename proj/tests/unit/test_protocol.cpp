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

#include "doctest.h"
#include "detqkd/protocol.hpp"
#include "detqkd/serialization.hpp"
#include "oracles.hpp"

using namespace detqkd;

namespace {

std::vector<Scheme> every_scheme() {
  return {product_scheme(), k_scheme(0.5), k_scheme(1.0), k_scheme(2.0), k_scheme_four_pairs(1.0), three_one_scheme()};
}

std::vector<MessageKind> kinds(const SessionTranscript& t) {
  std::vector<MessageKind> out;
  for (const auto& m : t.messages) out.push_back(m.kind);
  return out;
}

InterceptResendStrategy measure_b_resend_detected(const Scheme& s) {
  const auto& b = s.basis_b;
  return {b, {b[0], b[1], b[2], b[3]}};
}

// Table 3 prefix, positions 1-based in the published table.
const std::vector<int> kTypes{1, 3, 4, 4, 1, 2, 1, 3, 3};
const std::vector<Bit> kBits{Bit::plus, Bit::plus, Bit::minus, Bit::minus, Bit::minus,
                             Bit::plus, Bit::minus, Bit::plus, Bit::minus};
const std::vector<bool> kControl{false, true, false, false, false, false, true, false, false};
const std::vector<Detector> kDetections{{BasisChoice::b, 0},       {BasisChoice::b_prime, 0}, {BasisChoice::b_prime, 3},
                                        {BasisChoice::b, 1},       {BasisChoice::b, 1},       {BasisChoice::b_prime, 3},
                                        {BasisChoice::b, 3},       {BasisChoice::b, 2},       {BasisChoice::b_prime, 2}};

}  // namespace

TEST_SUITE("protocol") {

TEST_CASE("transmit") {
  const Scheme s = k_scheme(1.0);
  RandomStream rng(1);
  const auto out = transmit({}, s.pair(1).plus, rng);
  REQUIRE(out.has_value());
  for (std::size_t i = 0; i < 4; ++i) CHECK((*out)[i] == s.pair(1).plus[i]);

  const ChannelConfig evan{measure_b_resend_detected(s), 0.0};
  for (std::size_t j = 0; j < 4; ++j) {
    const auto got = transmit(evan, s.basis_b[j], rng);
    REQUIRE(got.has_value());
    CHECK(std::abs(inner(*got, s.basis_b[j])) == doctest::Approx(1.0));
  }

  const ChannelConfig lossy{std::nullopt, 0.5};
  int lost = 0;
  constexpr int n = 20000;
  for (int i = 0; i < n; ++i)
    if (!transmit(lossy, s.pair(1).plus, rng)) ++lost;
  CHECK(std::abs(lost / static_cast<double>(n) - 0.5) < 3.0 * std::sqrt(0.25 / n));
}

TEST_CASE("consistency_check") {
  const Scheme s = k_scheme(1.0);
  CHECK_FALSE(consistency_check(s.pair(1).plus, s.basis_b_prime[2]));
  CHECK(consistency_check(s.pair(1).plus, s.basis_b[0]));
  for (std::size_t j = 0; j < 4; ++j) CHECK(consistency_check(s.basis_b[j], s.basis_b[j]));
}

TEST_CASE("honest QKD sessions agree on every bit") {
  for (const Scheme& s : every_scheme()) {
    CAPTURE(s.name);
    RandomStream rng(11);
    const auto t = run_qkd_session(s, 1000, 100, {}, rng);
    CHECK(t.verdict.kind == VerdictKind::key);
    CHECK(t.verdict.alice_bits.size() == 1000);
    CHECK(t.verdict.alice_bits == t.verdict.bob_bits);
    CHECK(t.stats.all_inconsistencies == 0);
    CHECK(t.stats.photons_checked == 100);
    CHECK(kinds(t) == std::vector<MessageKind>{MessageKind::check_request, MessageKind::check_report, MessageKind::reveal_types});
  }
}

TEST_CASE("determinism over 1e5 honest photons per scheme") {
  for (const Scheme& s : every_scheme()) {
    CAPTURE(s.name);
    RandomStream rng(5);
    const auto t = run_qkd_session(s, 100000, 0, {}, rng);
    CHECK(t.verdict.kind == VerdictKind::key);
    CHECK(t.verdict.bob_bits.size() == 100000);
    CHECK(t.verdict.alice_bits == t.verdict.bob_bits);
    // Both bases and all types are used.
    std::array<int, 2> bases{};
    std::vector<int> types(s.pairs.size());
    for (const auto& r : t.photons) {
      ++bases[r.detection->basis == BasisChoice::b ? 0 : 1];
      ++types[r.type_id - 1];
    }
    CHECK(bases[0] > 40000);
    CHECK(bases[1] > 40000);
    for (int c : types) CHECK(c > 100000 / static_cast<int>(types.size()) - 2000);
  }
}

TEST_CASE("check_count zero reveals immediately") {
  RandomStream rng(3);
  const auto t = run_qkd_session(k_scheme(1.0), 50, 0, {}, rng);
  CHECK(kinds(t) == std::vector<MessageKind>{MessageKind::reveal_types});
  CHECK(t.verdict.kind == VerdictKind::key);
}

TEST_CASE("invalid session parameters") {
  RandomStream rng(3);
  CHECK_THROWS_AS(run_qkd_session(k_scheme(1.0), 0, 10, {}, rng), ConfigError);
  CHECK_THROWS_AS(run_qkd_session(k_scheme(1.0), 10, 0, {std::nullopt, 1.0}, rng), ConfigError);
  CHECK_THROWS_AS(run_qkd_session(k_scheme(1.0), 10, 0, {std::nullopt, -0.1}, rng), ConfigError);
  CHECK_THROWS_AS(run_direct_comm_session({}, 0.1, {}, rng), ConfigError);
  CHECK_THROWS_AS(run_direct_comm_session({Bit::plus}, 0.0, {}, rng), ConfigError);
}

TEST_CASE("lossy QKD: lost photons are reported and skipped") {
  RandomStream rng(21);
  const auto t = run_qkd_session(k_scheme(2.0), 1000, 100, {std::nullopt, 0.3}, rng);
  REQUIRE(!t.messages.empty());
  CHECK(t.messages.front().kind == MessageKind::loss_report);
  CHECK(t.messages.front().payload.size() == t.stats.photons_lost);
  CHECK(t.stats.photons_lost > 250);
  CHECK(t.stats.photons_lost < 410);
  CHECK(t.verdict.kind == VerdictKind::key);
  CHECK(t.verdict.alice_bits == t.verdict.bob_bits);
  CHECK(t.verdict.bob_bits.size() == 1100 - t.stats.photons_lost - 100);
  for (const auto& r : t.photons) {
    if (r.lost) {
      CHECK_FALSE(r.detection.has_value());
      CHECK_FALSE(r.control);
      CHECK_FALSE(r.inferred.has_value());
    }
  }
}

TEST_CASE("eavesdropped QKD aborts and reveals nothing") {
  const Scheme s = k_scheme(1.0);
  RandomStream rng(8);
  const auto t = run_qkd_session(s, 1000, 100, {measure_b_resend_detected(s), 0.0}, rng);
  CHECK(t.verdict.kind == VerdictKind::abort);
  const auto k = kinds(t);
  CHECK(k.back() == MessageKind::abort);
  CHECK(std::find(k.begin(), k.end(), MessageKind::reveal_types) == k.end());
  for (const auto& r : t.photons) CHECK_FALSE(r.inferred.has_value());
  CHECK(t.stats.check_inconsistencies > 0);
  // Every aborted position is an inconsistent checked photon.
  for (const auto& p : t.messages.back().payload) {
    const auto& r = t.photons[p.get<std::size_t>()];
    CHECK(r.control);
    CHECK(r.inconsistent);
  }
}

TEST_CASE("naive Evan disturbance rate matches the oracle") {
  const Scheme s = k_scheme(1.0);
  RandomStream rng(12);
  const auto t = run_qkd_session(s, 100000, 0, {measure_b_resend_detected(s), 0.0}, rng);
  const double p = oracle::k_naive_error_rate(1.0);
  const double sigma = std::sqrt(p * (1.0 - p) / 100000.0);
  CHECK(std::abs(t.stats.all_inconsistency_rate() - p) <= 3.0 * sigma);
}

TEST_CASE("replay is byte-identical") {
  for (const Scheme& s : every_scheme()) {
    RandomStream a(99), b(99);
    const ChannelConfig channel{measure_b_resend_detected(s), 0.1};
    CHECK(to_json(run_qkd_session(s, 200, 20, channel, a)).dump() == to_json(run_qkd_session(s, 200, 20, channel, b)).dump());
  }
  RandomStream a(4), b(4), c(5);
  const std::vector<Bit> msg = parse_bits("++--+-+-");
  const auto ta = to_json(run_direct_comm_session(msg, 0.3, {}, a)).dump();
  CHECK(ta == to_json(run_direct_comm_session(msg, 0.3, {}, b)).dump());
  CHECK(ta != to_json(run_direct_comm_session(msg, 0.3, {}, c)).dump());
}

TEST_CASE("Table 3 replay") {
  const Scheme s = three_one_scheme();
  const DirectCommPlan plan{kTypes, kBits, kControl};
  RandomStream rng(0);
  const auto t = run_direct_comm_plan(s, plan, {}, rng, kDetections);

  // States sent: 1+, 3+, 4-, 4-, 1-, 2+, 1-, 3+, 3-.
  for (std::size_t i = 0; i < kTypes.size(); ++i) {
    CHECK(t.photons[i].type_id == kTypes[i]);
    CHECK(t.photons[i].bit == kBits[i]);
    CHECK_FALSE(t.photons[i].inconsistent);
  }
  CHECK(kinds(t) == std::vector<MessageKind>{MessageKind::control_positions, MessageKind::check_report, MessageKind::key_reveal});
  CHECK(t.messages[0].payload == Json::array({1, 6}));
  CHECK(t.verdict.kind == VerdictKind::message);
  CHECK(to_string(t.verdict.bob_bits) == "+---++-");

  // Independent reconstruction from the literal table.
  std::string expected;
  for (std::size_t i = 0; i < kTypes.size(); ++i) {
    if (kControl[i]) continue;
    const auto& d = kDetections[i];
    const int sign = d.basis == BasisChoice::b ? oracle::kTable2B[kTypes[i] - 1][d.index]
                                               : oracle::kTable2BPrime[kTypes[i] - 1][d.index];
    expected += sign > 0 ? '+' : '-';
  }
  CHECK(to_string(t.verdict.bob_bits) == expected);
}

TEST_CASE("direct communication without Evan is exact") {
  RandomStream msg_rng(1);
  std::vector<Bit> msg;
  for (int i = 0; i < 10000; ++i) msg.push_back(msg_rng.index(2) == 0 ? Bit::plus : Bit::minus);
  for (double f : {0.05, 0.5}) {
    RandomStream rng(2);
    const auto t = run_direct_comm_session(msg, f, {}, rng);
    CHECK(t.verdict.kind == VerdictKind::message);
    CHECK(t.verdict.bob_bits == msg);
    CHECK(t.verdict.alice_bits == msg);
    std::size_t controls = 0;
    for (const auto& r : t.photons) controls += r.control ? 1 : 0;
    CHECK(controls == t.photons.size() - msg.size());
    CHECK(t.stats.photons_checked == controls);
  }
}

TEST_CASE("direct communication: abort precedes any key reveal") {
  const Scheme s = three_one_scheme();
  const std::vector<Bit> msg = parse_bits("++--++--++--++--++--");
  int aborted = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    RandomStream rng(seed);
    const auto t = run_direct_comm_session(msg, 0.5, {measure_b_resend_detected(s), 0.0}, rng);
    const auto k = kinds(t);
    CHECK(k.front() == MessageKind::control_positions);
    if (t.verdict.kind == VerdictKind::abort) {
      ++aborted;
      CHECK(std::find(k.begin(), k.end(), MessageKind::key_reveal) == k.end());
      CHECK(t.verdict.bob_bits.empty());
    } else {
      CHECK(k.back() == MessageKind::key_reveal);
    }
  }
  CHECK(aborted > 25);
}

TEST_CASE("undetected eavesdropper probability") {
  CHECK(undetected_eavesdropper_probability(0.146447, 100) == doctest::Approx(1.3e-7).epsilon(0.05));
  CHECK(undetected_eavesdropper_probability(0.5, 0) == 1.0);
}

}  // TEST_SUITE
