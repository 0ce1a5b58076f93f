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

// Command implementations behind the detqkd CLI. Each returns a JSON
// document and an exit code (0 success, 1 a check failed); invalid
// configurations throw UsageError, which the CLI maps to exit code 2.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "detqkd/adversary.hpp"
#include "detqkd/protocol.hpp"
#include "detqkd/schemes.hpp"

namespace detqkd {

class UsageError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;

inline constexpr double kSweepFlagThreshold = 1e-3;
inline constexpr double kClosedFormTolerance = 1e-4;
inline constexpr double kGuessTolerance = 1e-9;

struct CommandResult {
  int exit_code = kExitOk;
  Json output;
};

struct SeedChoice {
  std::uint64_t seed;
  std::string source;  // "flag", "env" or "generated"
};

/// Explicit seed, else DETQKD_SEED, else a fresh random seed. Throws
/// UsageError if DETQKD_SEED is not an unsigned integer.
SeedChoice resolve_seed(std::optional<std::uint64_t> explicit_seed);

struct SchemeRequest {
  std::string name = "k";
  std::optional<double> k;
};

/// make_scheme with construction errors rethrown as UsageError.
Scheme build_scheme(const SchemeRequest& request);

CommandResult cmd_scheme_validate(const SchemeRequest& request);
CommandResult cmd_scheme_dump(const SchemeRequest& request);

/// Literal sign grids of the published inference tables, [type - 1][column].
std::vector<std::vector<Bit>> published_table1();
std::vector<std::vector<Bit>> published_table2_b();
std::vector<std::vector<Bit>> published_table2_b_prime();

enum class EvanMode { none, naive, optimal, file };
EvanMode parse_evan_mode(const std::string& s);

struct EvanRequest {
  EvanMode mode = EvanMode::none;
  std::string strategy_path;
  int restarts = 20;
  double tolerance = 1e-6;
};

struct ResolvedEvan {
  std::optional<InterceptResendStrategy> strategy;
  double error_rate = 0.0;
  Json description;
};

/// naive: measure Bob's B basis and resend the detected vector.
/// optimal: optimize_strategy with the requested restarts.
ResolvedEvan resolve_evan(const Scheme& scheme, const EvanRequest& request, std::uint64_t seed);

struct QkdRequest {
  SchemeRequest scheme{"k", 1.0};
  std::size_t photons = 1100;
  std::size_t checks = 100;
  double loss = 0.0;
  EvanRequest evan;
  std::uint64_t seed = 1;
  bool include_transcript = true;
};

CommandResult cmd_qkd(const QkdRequest& request);

struct CommRequest {
  std::vector<Bit> message;
  double control_fraction = 0.1;
  double loss = 0.0;
  EvanRequest evan;
  std::uint64_t seed = 1;
  std::size_t sessions = 1;
  bool replay_table3 = false;
  bool include_transcript = true;
};

CommandResult cmd_comm(const CommRequest& request);

struct OptimizeRequest {
  SchemeRequest scheme;
  int restarts = 20;
  double tolerance = 1e-6;
  std::uint64_t seed = 1;
  unsigned threads = 0;
};

CommandResult cmd_eve_optimize(const OptimizeRequest& request);

struct SweepRow {
  double k;
  double p_min_numeric;
  std::optional<double> p_min_closed_form;
  std::optional<double> abs_difference;
  bool converged;
  bool flagged;
};

struct SweepReport {
  std::string scheme;
  std::vector<SweepRow> rows;
  int restarts;
  double tolerance;
  std::uint64_t seed;
  std::optional<double> wall_time_seconds;

  double max_abs_difference() const;
  bool any_flagged() const;
};

struct SweepRequest {
  std::string scheme = "k";
  std::vector<double> k_grid{0.25, 0.5, 1.0, 2.0, 4.0};
  int restarts = 20;
  double tolerance = 1e-6;
  std::uint64_t seed = 1;
  unsigned threads = 0;
  /// Wall time makes the output non-reproducible, so it is opt-in.
  bool record_timing = false;
};

/// Point i is optimized with the substream (seed, i), so rows do not depend
/// on each other or on the thread count.
SweepReport run_sweep(const SweepRequest& request);
Json to_json(const SweepReport& report);
std::string to_csv(const SweepReport& report);
CommandResult cmd_eve_sweep(const SweepRequest& request);

CommandResult cmd_guess(const SchemeRequest& request);

}  // namespace detqkd
