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

// JSON encoding. Amplitudes are [re, im] pairs; a state is an array of four
// amplitudes in (Rv, Rh, Lv, Lh) order. Object keys keep insertion order.

#include <nlohmann/json.hpp>

#include "detqkd/adversary.hpp"
#include "detqkd/hilbert4.hpp"
#include "detqkd/protocol.hpp"
#include "detqkd/schemes.hpp"

namespace detqkd {

Json to_json(const StateVector& s);
Json to_json(const MeasurementBasis& b);
Json to_json(const Scheme& s);
Json to_json(const InterceptResendStrategy& s);
Json to_json(const OptimizationReport& r);
Json to_json(const SessionTranscript& t);

/// The parsers throw std::invalid_argument on malformed input, including
/// states that are not unit-norm and bases that are not orthonormal.
StateVector state_from_json(const Json& j);
MeasurementBasis basis_from_json(const Json& j);
InterceptResendStrategy strategy_from_json(const Json& j);

}  // namespace detqkd
