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

// Intercept-resend eavesdropping: wrong-click rates at Bob's end, the
// optimal replacement photon per measurement outcome, a gradient-free search
// over the eavesdropper's measurement basis, and Helstrom guessing odds.

#include <array>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "detqkd/hilbert4.hpp"
#include "detqkd/random.hpp"
#include "detqkd/schemes.hpp"

namespace detqkd {

/// One of Alice's signals: pair type and bit.
struct Signal {
  int type_id;
  Bit bit;
};

/// All (type, bit) combinations of a scheme. Alice's prior is uniform over
/// this list.
std::vector<Signal> signals(const Scheme& scheme);

struct InterceptResendStrategy {
  MeasurementBasis measurement;
  std::array<StateVector, 4> resend;
};

/// Positive semidefinite, unit-trace HermitianMatrix4.
class DensityMatrix {
 public:
  /// Throws std::invalid_argument if the trace differs from 1 by more than
  /// 1e-10 or an eigenvalue is below -1e-10.
  explicit DensityMatrix(const HermitianMatrix4& m);

  const HermitianMatrix4& matrix() const { return m_; }

 private:
  HermitianMatrix4 m_;
};

class WeightMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct RestartRecord {
  int restart;
  double p;
  int evaluations;
  bool hit_cap;
};

struct OptimizationReport {
  InterceptResendStrategy best_strategy;
  double p_min;
  int restarts;
  bool converged;
  std::vector<RestartRecord> history;
};

inline constexpr int kMaxEvaluationsPerRestart = 10000;

/// Operator W with <psi|W|psi> the probability that Bob, choosing each
/// basis with probability 1/2, clicks a detector that infers the wrong bit
/// for `sent` when he receives psi.
HermitianMatrix4 wrong_click_operator(const Scheme& scheme, Signal sent);

double wrong_click_probability(const Scheme& scheme, Signal sent, const StateVector& resend);

/// Per-photon wrong-click rate averaged over the uniform signal prior and
/// the eavesdropper's outcomes.
double strategy_error_rate(const Scheme& scheme, const InterceptResendStrategy& strategy);

struct ResendChoice {
  StateVector state;
  /// Minimal conditional wrong-click probability given the outcome.
  double conditional_error;
  /// P(outcome) under the uniform signal prior.
  double outcome_probability;
  /// P(signal | outcome), aligned with signals(scheme). Uniform when the
  /// outcome cannot occur.
  std::vector<double> posterior;
};

/// Lowest eigenvector of the posterior-weighted wrong-click operator.
ResendChoice optimal_resend(const Scheme& scheme, const MeasurementBasis& measurement, std::size_t outcome);

/// Measurement plus optimal resend states for every outcome.
InterceptResendStrategy strategy_with_optimal_resend(const Scheme& scheme, const MeasurementBasis& measurement);

/// Error rate of `measurement` with optimal resends; the optimizer's objective.
double measurement_error_rate(const Scheme& scheme, const MeasurementBasis& measurement);

/// exp(iH) with H Hermitian built from 16 reals: 4 diagonal entries, then
/// (re, im) of the 6 upper off-diagonal entries in row-major order.
Matrix4 unitary_from_parameters(const std::array<double, 16>& params);

struct OptimizerOptions {
  int restarts = 20;
  double tolerance = 1e-6;
  int max_evaluations = kMaxEvaluationsPerRestart;
  /// Worker threads for independent restarts; 0 picks hardware concurrency.
  unsigned threads = 0;
};

/// Nelder-Mead descent over measurement bases from random starts, resend
/// states always optimal. Restart r draws its start from substream r of a
/// master seed taken from `rng`; the result does not depend on `threads`.
OptimizationReport optimize_strategy(const Scheme& scheme, const OptimizerOptions& options, RandomStream& rng);

/// sum_i w_i |psi_i><psi_i|. Throws WeightMismatch on length mismatch,
/// negative weights, or weights not summing to 1 within 1e-12.
DensityMatrix mixed_state(const std::vector<StateVector>& states, const std::vector<double>& weights);

/// Uniform mixtures of the "+" states and of the "-" states of a scheme.
std::pair<DensityMatrix, DensityMatrix> bit_mixtures(const Scheme& scheme);

/// 1/2 + ||rho_plus - rho_minus||_1 / 4 for equal priors.
double helstrom_guess(const DensityMatrix& rho_plus, const DensityMatrix& rho_minus);

namespace closed_form {

/// 1/2 - (1/2) sqrt(1 + k^4) / (1 + k^2)
double two_pair_min_error(double k);
/// (1/2) min(1, k^2) / (1 + k^2)
double four_pair_min_error(double k);
inline constexpr double kThreeOneMinError = 1.0 / 6.0;
/// 1/2 + 1 / (2 sqrt(1 + k^2))
double k_scheme_guess(double k);

/// Reference minimal error rate for a scheme by name, if one is known.
std::optional<double> min_error_for(const Scheme& scheme);

}  // namespace closed_form

}  // namespace detqkd
