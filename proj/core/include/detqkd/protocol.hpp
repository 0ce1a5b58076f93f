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

// Alice, Bob and the quantum channel as a single-shot session state machine.
// Classical messages are appended to the transcript in the order they are
// sent; type information is only revealed after the eavesdropping check has
// passed.

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "detqkd/adversary.hpp"
#include "detqkd/hilbert4.hpp"
#include "detqkd/random.hpp"
#include "detqkd/schemes.hpp"

namespace detqkd {

using Json = nlohmann::ordered_json;

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class MessageKind { loss_report, check_request, check_report, control_positions, reveal_types, key_reveal, abort };
enum class Party { alice, bob };

std::string to_string(MessageKind kind);
std::string to_string(Party party);

struct ClassicalMessage {
  MessageKind kind;
  Party sender;
  Json payload;  // always an array
};

struct ChannelConfig {
  std::optional<InterceptResendStrategy> eavesdropper;
  double loss_probability = 0.0;
};

/// Lost photon -> nullopt. Otherwise the state Bob receives: the eavesdropper's
/// replacement when one is configured, else `state` itself.
std::optional<StateVector> transmit(const ChannelConfig& channel, const StateVector& state, RandomStream& rng);

/// False iff |<detected|sent>|^2 <= 1e-10, i.e. the click is impossible for
/// the state Alice sent.
bool consistency_check(const StateVector& sent, const StateVector& detected);

struct PhotonRecord {
  std::size_t position = 0;
  int type_id = 1;
  Bit bit = Bit::plus;
  /// Used to test for eavesdropping: a QKD check photon or a direct-comm
  /// control bit.
  bool control = false;
  bool lost = false;
  std::optional<Detector> detection;
  /// Bob's bit after the reveal; empty for checked, control and lost photons
  /// and for every photon of an aborted session.
  std::optional<Bit> inferred;
  /// Simulator-side flag: the detection is impossible for the sent state.
  bool inconsistent = false;
};

enum class VerdictKind { key, message, abort };
std::string to_string(VerdictKind kind);

struct Verdict {
  VerdictKind kind = VerdictKind::abort;
  std::vector<Bit> alice_bits;
  std::vector<Bit> bob_bits;
  std::string reason;
};

struct SessionStats {
  std::size_t photons_sent = 0;
  std::size_t photons_lost = 0;
  std::size_t photons_checked = 0;
  std::size_t check_inconsistencies = 0;
  /// Over every detected photon, not only the checked ones.
  std::size_t all_inconsistencies = 0;

  double check_inconsistency_rate() const;
  double all_inconsistency_rate() const;
};

struct SessionTranscript {
  std::string protocol;  // "qkd" or "direct"
  std::string scheme;
  std::optional<double> k;
  std::vector<PhotonRecord> photons;
  std::vector<ClassicalMessage> messages;
  Verdict verdict;
  SessionStats stats;
};

/// Key distribution: Alice sends key_bits + check_count photons with uniform
/// (type, bit), Bob measures in a fair random basis, announces a random
/// subset of check_count received photons with his outcomes, and Alice
/// aborts on any inconsistency. Otherwise she reveals the remaining types and
/// Bob infers the key.
SessionTranscript run_qkd_session(const Scheme& scheme, std::size_t key_bits, std::size_t check_count,
                                  const ChannelConfig& channel, RandomStream& rng);

/// Alice's private choices for direct communication.
struct DirectCommPlan {
  std::vector<int> types;
  std::vector<Bit> bits;
  std::vector<bool> control;
};

/// Interleaves control bits into `message`: each position is a control bit
/// with probability control_fraction (value uniform), and every position gets
/// a uniform type in 1..4.
DirectCommPlan plan_direct_comm(const std::vector<Bit>& message, double control_fraction, RandomStream& alice);

/// Runs steps three to six for a fixed plan. When `forced` is given, Bob's
/// detections are taken from it instead of being measured (replay of a
/// recorded run); the channel is bypassed in that case.
SessionTranscript run_direct_comm_plan(const Scheme& scheme, const DirectCommPlan& plan, const ChannelConfig& channel,
                                       RandomStream& rng, const std::optional<std::vector<Detector>>& forced = {});

/// Direct confidential communication over the three-one scheme.
SessionTranscript run_direct_comm_session(const std::vector<Bit>& message, double control_fraction,
                                          const ChannelConfig& channel, RandomStream& rng);

/// (1 - p_min)^checks: the probability that an eavesdropper causing wrong
/// clicks at rate p_min passes `checks` independent checks unnoticed.
double undetected_eavesdropper_probability(double p_min, std::size_t checks);

}  // namespace detqkd
