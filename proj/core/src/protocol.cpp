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

#include "detqkd/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace detqkd {

namespace {

void check_channel(const ChannelConfig& channel) {
  if (!(channel.loss_probability >= 0.0 && channel.loss_probability < 1.0)) {
    throw ConfigError("loss_probability must lie in [0, 1)");
  }
}

Detector measure(const Scheme& scheme, const StateVector& received, RandomStream& bob) {
  const auto basis = bob.index(2) == 0 ? BasisChoice::b : BasisChoice::b_prime;
  return Detector{basis, sample_outcome(scheme.basis(basis), received, bob)};
}

Json detection_json(const PhotonRecord& r) {
  return Json{{"position", r.position},
              {"basis", std::string(to_string(r.detection->basis))},
              {"outcome", r.detection->index + 1}};
}

// Bob's side of a check: report outcomes for `positions`; Alice's side:
// positions whose reported outcome is impossible for what she sent.
std::vector<std::size_t> run_check(SessionTranscript& t, const std::vector<std::size_t>& positions) {
  Json report = Json::array();
  for (std::size_t p : positions) report.push_back(detection_json(t.photons[p]));
  t.messages.push_back({MessageKind::check_report, Party::bob, std::move(report)});

  std::vector<std::size_t> failed;
  for (std::size_t p : positions) {
    if (t.photons[p].inconsistent) failed.push_back(p);
  }
  t.stats.photons_checked = positions.size();
  t.stats.check_inconsistencies = failed.size();
  return failed;
}

void abort_session(SessionTranscript& t, const std::vector<std::size_t>& failed) {
  t.messages.push_back({MessageKind::abort, Party::alice, Json(failed)});
  t.verdict.kind = VerdictKind::abort;
  t.verdict.reason = std::to_string(failed.size()) + " of " + std::to_string(t.stats.photons_checked) +
                     " checked photons inconsistent with the states sent";
}

void report_losses(SessionTranscript& t) {
  std::vector<std::size_t> lost;
  for (const auto& r : t.photons) {
    if (r.lost) lost.push_back(r.position);
  }
  t.stats.photons_lost = lost.size();
  if (!lost.empty()) t.messages.push_back({MessageKind::loss_report, Party::bob, Json(lost)});
}

}  // namespace

std::string to_string(MessageKind kind) {
  switch (kind) {
    case MessageKind::loss_report: return "LOSS_REPORT";
    case MessageKind::check_request: return "CHECK_REQUEST";
    case MessageKind::check_report: return "CHECK_REPORT";
    case MessageKind::control_positions: return "CONTROL_POSITIONS";
    case MessageKind::reveal_types: return "REVEAL_TYPES";
    case MessageKind::key_reveal: return "KEY_REVEAL";
    case MessageKind::abort: return "ABORT";
  }
  return "?";
}

std::string to_string(Party party) { return party == Party::alice ? "alice" : "bob"; }

std::string to_string(VerdictKind kind) {
  switch (kind) {
    case VerdictKind::key: return "KEY";
    case VerdictKind::message: return "MESSAGE";
    case VerdictKind::abort: return "ABORT";
  }
  return "?";
}

double SessionStats::check_inconsistency_rate() const {
  return photons_checked == 0 ? 0.0 : static_cast<double>(check_inconsistencies) / static_cast<double>(photons_checked);
}

double SessionStats::all_inconsistency_rate() const {
  const std::size_t detected = photons_sent - photons_lost;
  return detected == 0 ? 0.0 : static_cast<double>(all_inconsistencies) / static_cast<double>(detected);
}

std::optional<StateVector> transmit(const ChannelConfig& channel, const StateVector& state, RandomStream& rng) {
  if (channel.loss_probability > 0.0 && rng.bernoulli(channel.loss_probability)) return std::nullopt;
  if (!channel.eavesdropper) return state;
  const auto& evan = *channel.eavesdropper;
  return evan.resend[sample_outcome(evan.measurement, state, rng)];
}

bool consistency_check(const StateVector& sent, const StateVector& detected) {
  return std::norm(inner(detected, sent)) > 1e-10;
}

SessionTranscript run_qkd_session(const Scheme& scheme, std::size_t key_bits, std::size_t check_count,
                                  const ChannelConfig& channel, RandomStream& rng) {
  if (key_bits < 1) throw ConfigError("key_bits must be at least 1");
  check_channel(channel);

  const std::uint64_t master = rng.next_u64();
  RandomStream alice = RandomStream::substream(master, 0);
  RandomStream wire = RandomStream::substream(master, 1);
  RandomStream bob = RandomStream::substream(master, 2);

  SessionTranscript t;
  t.protocol = "qkd";
  t.scheme = scheme.name;
  t.k = scheme.k;
  const std::size_t n = key_bits + check_count;
  t.stats.photons_sent = n;
  t.photons.reserve(n);

  std::vector<std::size_t> received;
  for (std::size_t i = 0; i < n; ++i) {
    PhotonRecord r;
    r.position = i;
    r.type_id = static_cast<int>(alice.index(scheme.pairs.size())) + 1;
    r.bit = alice.index(2) == 0 ? Bit::plus : Bit::minus;
    const StateVector& sent = scheme.pair(r.type_id).state(r.bit);
    if (const auto arrived = transmit(channel, sent, wire)) {
      r.detection = measure(scheme, *arrived, bob);
      r.inconsistent = !consistency_check(sent, scheme.detector_state(*r.detection));
      if (r.inconsistent) ++t.stats.all_inconsistencies;
      received.push_back(i);
    } else {
      r.lost = true;
    }
    t.photons.push_back(r);
  }
  report_losses(t);

  // Bob picks the check subset among the photons he detected.
  const std::size_t checks = std::min(check_count, received.size());
  std::vector<std::size_t> pool = received;
  for (std::size_t i = 0; i < checks; ++i) {
    const std::size_t j = i + bob.index(pool.size() - i);
    std::swap(pool[i], pool[j]);
  }
  std::vector<std::size_t> checked(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(checks));
  std::sort(checked.begin(), checked.end());
  for (std::size_t p : checked) t.photons[p].control = true;

  if (checks > 0) {
    t.messages.push_back({MessageKind::check_request, Party::bob, Json(checked)});
    const auto failed = run_check(t, checked);
    if (!failed.empty()) {
      abort_session(t, failed);
      return t;
    }
  }

  Json reveal = Json::array();
  for (std::size_t p : received) {
    if (!t.photons[p].control) reveal.push_back(Json{{"position", p}, {"type_id", t.photons[p].type_id}});
  }
  t.messages.push_back({MessageKind::reveal_types, Party::alice, std::move(reveal)});

  for (std::size_t p : received) {
    auto& r = t.photons[p];
    if (r.control) continue;
    r.inferred = infer_bit(scheme, *r.detection, r.type_id);
    t.verdict.alice_bits.push_back(r.bit);
    t.verdict.bob_bits.push_back(*r.inferred);
  }
  t.verdict.kind = VerdictKind::key;
  t.verdict.reason = t.verdict.alice_bits == t.verdict.bob_bits ? "keys agree" : "keys differ";
  return t;
}

DirectCommPlan plan_direct_comm(const std::vector<Bit>& message, double control_fraction, RandomStream& alice) {
  if (message.empty()) throw ConfigError("message must not be empty");
  if (!(control_fraction > 0.0 && control_fraction < 1.0)) throw ConfigError("control_fraction must lie in (0, 1)");
  DirectCommPlan plan;
  std::size_t next = 0;
  while (next < message.size()) {
    const bool control = alice.bernoulli(control_fraction);
    Bit bit;
    if (control) {
      bit = alice.index(2) == 0 ? Bit::plus : Bit::minus;
    } else {
      bit = message[next++];
    }
    plan.control.push_back(control);
    plan.bits.push_back(bit);
    plan.types.push_back(static_cast<int>(alice.index(4)) + 1);
  }
  return plan;
}

SessionTranscript run_direct_comm_plan(const Scheme& scheme, const DirectCommPlan& plan, const ChannelConfig& channel,
                                       RandomStream& rng, const std::optional<std::vector<Detector>>& forced) {
  const std::size_t n = plan.types.size();
  if (plan.bits.size() != n || plan.control.size() != n) throw ConfigError("direct-comm plan rows differ in length");
  if (forced && forced->size() != n) throw ConfigError("forced detections must cover every position");
  check_channel(channel);

  const std::uint64_t master = rng.next_u64();
  RandomStream wire = RandomStream::substream(master, 1);
  RandomStream bob = RandomStream::substream(master, 2);

  SessionTranscript t;
  t.protocol = "direct";
  t.scheme = scheme.name;
  t.k = scheme.k;
  t.stats.photons_sent = n;

  // Steps two and three: states sent and Bob's detections.
  for (std::size_t i = 0; i < n; ++i) {
    PhotonRecord r;
    r.position = i;
    r.type_id = plan.types[i];
    r.bit = plan.bits[i];
    r.control = plan.control[i];
    const StateVector& sent = scheme.pair(r.type_id).state(r.bit);
    std::optional<StateVector> arrived;
    if (forced) {
      r.detection = (*forced)[i];
    } else if ((arrived = transmit(channel, sent, wire))) {
      r.detection = measure(scheme, *arrived, bob);
    }
    if (r.detection) {
      r.inconsistent = !consistency_check(sent, scheme.detector_state(*r.detection));
      if (r.inconsistent) ++t.stats.all_inconsistencies;
    } else {
      r.lost = true;
    }
    t.photons.push_back(r);
  }
  report_losses(t);

  // Step four: control positions, then Bob's outcomes for them.
  std::vector<std::size_t> controls;
  for (const auto& r : t.photons) {
    if (r.control && !r.lost) controls.push_back(r.position);
  }
  t.messages.push_back({MessageKind::control_positions, Party::alice, Json(controls)});
  const auto failed = run_check(t, controls);

  // Step five.
  if (!failed.empty()) {
    abort_session(t, failed);
    return t;
  }

  // Step six.
  t.messages.push_back({MessageKind::key_reveal, Party::alice, Json(plan.types)});
  std::size_t lost_message_bits = 0;
  for (auto& r : t.photons) {
    if (r.control) continue;
    t.verdict.alice_bits.push_back(r.bit);
    if (r.lost) {
      ++lost_message_bits;
      continue;
    }
    r.inferred = infer_bit(scheme, *r.detection, r.type_id);
    t.verdict.bob_bits.push_back(*r.inferred);
  }
  t.verdict.kind = VerdictKind::message;
  t.verdict.reason = lost_message_bits == 0 ? "message reconstructed"
                                            : std::to_string(lost_message_bits) + " message bits lost in transit";
  return t;
}

SessionTranscript run_direct_comm_session(const std::vector<Bit>& message, double control_fraction,
                                          const ChannelConfig& channel, RandomStream& rng) {
  const std::uint64_t master = rng.next_u64();
  RandomStream alice = RandomStream::substream(master, 0);
  const DirectCommPlan plan = plan_direct_comm(message, control_fraction, alice);
  RandomStream session = RandomStream::substream(master, 1);
  return run_direct_comm_plan(three_one_scheme(), plan, channel, session);
}

double undetected_eavesdropper_probability(double p_min, std::size_t checks) {
  return std::pow(1.0 - p_min, static_cast<double>(checks));
}

}  // namespace detqkd
