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

#include <cstddef>
#include <cstdint>
#include <random>

namespace detqkd {

/// SplitMix64 finalizer. Used only for seed derivation.
std::uint64_t splitmix64(std::uint64_t x);

/// Seed of substream `index` under `master`:
///   splitmix64(master ^ splitmix64(index + 0x9E3779B97F4A7C15)).
/// This rule is part of the transcript format; changing it changes every
/// replayed session.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

/// Deterministic random source for one trial or one protocol role.
///
/// Backed by std::mt19937_64, whose output sequence is fixed by the standard.
/// The floating-point conversions below are done by hand rather than through
/// <random> distributions so the draws are identical across standard
/// library implementations.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  static RandomStream substream(std::uint64_t master, std::uint64_t index) {
    return RandomStream(derive_seed(master, index));
  }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform();

  /// Uniform integer in [0, n). n must be positive.
  std::size_t index(std::size_t n);

  bool bernoulli(double p) { return uniform() < p; }

  /// Standard normal via Box-Muller (one value per call, two uniforms).
  double normal();

 private:
  std::mt19937_64 engine_;
};

}  // namespace detqkd
