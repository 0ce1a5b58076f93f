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

#include "detqkd/serialization.hpp"

#include <string>

namespace detqkd {

namespace {

Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw std::invalid_argument(std::string("missing field '") + key + "'");
  return j.at(key);
}

}  // namespace

Json to_json(const StateVector& s) {
  Json out = Json::array();
  for (const auto& z : s.amplitudes()) out.push_back(Json::array({z.real(), z.imag()}));
  return out;
}

Json to_json(const MeasurementBasis& b) {
  Json vectors = Json::array();
  for (const auto& v : b.vectors()) vectors.push_back(to_json(v));
  return Json{{"label", b.label()}, {"vectors", std::move(vectors)}};
}

Json to_json(const Scheme& s) {
  Json pairs = Json::array();
  for (const auto& p : s.pairs) {
    pairs.push_back(Json{{"type_id", p.type_id}, {"plus", to_json(p.plus)}, {"minus", to_json(p.minus)}});
  }
  return Json{{"name", s.name},
              {"k", optional_number(s.k)},
              {"pairs", std::move(pairs)},
              {"basis_b", to_json(s.basis_b)},
              {"basis_b_prime", to_json(s.basis_b_prime)}};
}

Json to_json(const InterceptResendStrategy& s) {
  Json resend = Json::array();
  for (const auto& v : s.resend) resend.push_back(to_json(v));
  return Json{{"measurement", to_json(s.measurement)}, {"resend", std::move(resend)}};
}

Json to_json(const OptimizationReport& r) {
  Json history = Json::array();
  for (const auto& h : r.history) {
    history.push_back(Json{{"restart", h.restart}, {"p", h.p}, {"evaluations", h.evaluations}, {"hit_cap", h.hit_cap}});
  }
  return Json{{"p_min", r.p_min},
              {"restarts", r.restarts},
              {"converged", r.converged},
              {"history", std::move(history)},
              {"strategy", to_json(r.best_strategy)}};
}

Json to_json(const SessionTranscript& t) {
  Json photons = Json::array();
  for (const auto& r : t.photons) {
    Json rec{{"position", r.position},
             {"type_id", r.type_id},
             {"bit", to_string(r.bit)},
             {"control", r.control},
             {"lost", r.lost}};
    if (r.detection) {
      rec["basis"] = std::string(to_string(r.detection->basis));
      rec["outcome"] = r.detection->index + 1;
    } else {
      rec["basis"] = nullptr;
      rec["outcome"] = nullptr;
    }
    rec["inferred"] = r.inferred ? Json(to_string(*r.inferred)) : Json(nullptr);
    rec["inconsistent"] = r.inconsistent;
    photons.push_back(std::move(rec));
  }
  Json messages = Json::array();
  for (const auto& m : t.messages) {
    messages.push_back(Json{{"kind", to_string(m.kind)}, {"from", to_string(m.sender)}, {"payload", m.payload}});
  }
  Json verdict{{"kind", to_string(t.verdict.kind)},
               {"alice_bits", to_string(t.verdict.alice_bits)},
               {"bob_bits", to_string(t.verdict.bob_bits)},
               {"reason", t.verdict.reason}};
  Json stats{{"photons_sent", t.stats.photons_sent},
             {"photons_lost", t.stats.photons_lost},
             {"photons_checked", t.stats.photons_checked},
             {"check_inconsistencies", t.stats.check_inconsistencies},
             {"all_inconsistencies", t.stats.all_inconsistencies}};
  return Json{{"protocol", t.protocol},
              {"scheme", t.scheme},
              {"k", optional_number(t.k)},
              {"photons", std::move(photons)},
              {"messages", std::move(messages)},
              {"verdict", std::move(verdict)},
              {"stats", std::move(stats)}};
}

StateVector state_from_json(const Json& j) {
  if (!j.is_array() || j.size() != kDim) throw std::invalid_argument("state must be an array of 4 amplitudes");
  Amplitudes a;
  for (std::size_t i = 0; i < kDim; ++i) {
    const Json& z = j[i];
    if (!z.is_array() || z.size() != 2 || !z[0].is_number() || !z[1].is_number()) {
      throw std::invalid_argument("amplitude must be a [re, im] pair of numbers");
    }
    a[i] = Amplitude{z[0].get<double>(), z[1].get<double>()};
  }
  return StateVector::from_amplitudes(a);
}

MeasurementBasis basis_from_json(const Json& j) {
  const Json& vectors = field(j, "vectors");
  if (!vectors.is_array() || vectors.size() != kDim) throw std::invalid_argument("basis must have 4 vectors");
  std::array<StateVector, 4> v;
  for (std::size_t i = 0; i < kDim; ++i) v[i] = state_from_json(vectors[i]);
  const Json& label = field(j, "label");
  if (!label.is_string()) throw std::invalid_argument("basis label must be a string");
  return MeasurementBasis(label.get<std::string>(), v);
}

InterceptResendStrategy strategy_from_json(const Json& j) {
  // Accept either a bare strategy or an optimizer report that contains one.
  const Json& s = j.is_object() && j.contains("strategy") ? j.at("strategy") : j;
  const Json& resend = field(s, "resend");
  if (!resend.is_array() || resend.size() != kDim) throw std::invalid_argument("strategy needs 4 resend states");
  InterceptResendStrategy out{basis_from_json(field(s, "measurement")), {}};
  for (std::size_t i = 0; i < kDim; ++i) out.resend[i] = state_from_json(resend[i]);
  return out;
}

}  // namespace detqkd
