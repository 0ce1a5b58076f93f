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

#include "detqkd/adversary.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>
#include <thread>

namespace detqkd {

namespace {

// Signals of a scheme with their states and wrong-click operators, built
// once per objective.
class ErrorModel {
 public:
  explicit ErrorModel(const Scheme& scheme) : signals_(signals(scheme)) {
    for (const Signal& s : signals_) {
      states_.push_back(scheme.pair(s.type_id).state(s.bit));
      operators_.push_back(wrong_click_operator(scheme, s));
    }
  }

  std::size_t size() const { return signals_.size(); }

  // Unnormalized weights |<e|s>|^2 for one measurement vector.
  std::vector<double> likelihoods(const StateVector& e) const {
    std::vector<double> w;
    w.reserve(states_.size());
    for (const auto& s : states_) w.push_back(std::norm(inner(e, s)));
    return w;
  }

  HermitianMatrix4 weighted_operator(const std::vector<double>& w) const {
    HermitianMatrix4 acc;
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (w[i] != 0.0) acc += w[i] * operators_[i];
    }
    return acc;
  }

  double measurement_error(const MeasurementBasis& m) const {
    double total = 0.0;
    for (const auto& e : m.vectors()) {
      total += eigen_decompose(weighted_operator(likelihoods(e)))[0].value;
    }
    return total / static_cast<double>(size());
  }

 private:
  std::vector<Signal> signals_;
  std::vector<StateVector> states_;
  std::vector<HermitianMatrix4> operators_;
};

constexpr std::size_t kParams = 16;
using Point = std::array<double, kParams>;

struct SimplexResult {
  Point x;
  double f;
  int evaluations;
  bool hit_cap;
};

// Nelder-Mead with standard coefficients. When the simplex has collapsed
// (value spread below tol) it is rebuilt around the best vertex, and the
// search stops once a rebuild no longer improves the best value by tol.
template <typename F>
SimplexResult nelder_mead(F&& f, const Point& start, double step, double tol, int max_evals) {
  int evals = 0;
  auto eval = [&](const Point& p) {
    ++evals;
    return f(p);
  };

  Point best = start;
  double best_f = eval(best);
  double last_round_f = best_f;
  bool first_round = true;

  while (evals < max_evals) {
    std::array<Point, kParams + 1> xs;
    std::array<double, kParams + 1> fs;
    xs[0] = best;
    fs[0] = best_f;
    for (std::size_t i = 0; i < kParams; ++i) {
      xs[i + 1] = best;
      xs[i + 1][i] += step;
      fs[i + 1] = eval(xs[i + 1]);
    }

    while (evals < max_evals) {
      std::array<std::size_t, kParams + 1> order;
      std::iota(order.begin(), order.end(), 0);
      std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return fs[a] < fs[b]; });
      const std::size_t lo = order.front();
      const std::size_t hi = order.back();
      const std::size_t second = order[kParams - 1];
      if (fs[hi] - fs[lo] <= tol) break;

      Point centroid{};
      for (std::size_t v = 0; v <= kParams; ++v) {
        if (v == hi) continue;
        for (std::size_t i = 0; i < kParams; ++i) centroid[i] += xs[v][i] / static_cast<double>(kParams);
      }
      auto along = [&](double t) {
        Point p;
        for (std::size_t i = 0; i < kParams; ++i) p[i] = centroid[i] + t * (xs[hi][i] - centroid[i]);
        return p;
      };

      const Point reflected = along(-1.0);
      const double fr = eval(reflected);
      if (fr < fs[lo]) {
        const Point expanded = along(-2.0);
        const double fe = eval(expanded);
        if (fe < fr) {
          xs[hi] = expanded;
          fs[hi] = fe;
        } else {
          xs[hi] = reflected;
          fs[hi] = fr;
        }
      } else if (fr < fs[second]) {
        xs[hi] = reflected;
        fs[hi] = fr;
      } else {
        const bool outside = fr < fs[hi];
        const Point contracted = along(outside ? -0.5 : 0.5);
        const double fc = eval(contracted);
        if (fc < (outside ? fr : fs[hi])) {
          xs[hi] = contracted;
          fs[hi] = fc;
        } else {
          for (std::size_t v = 0; v <= kParams; ++v) {
            if (v == lo) continue;
            for (std::size_t i = 0; i < kParams; ++i) xs[v][i] = xs[lo][i] + 0.5 * (xs[v][i] - xs[lo][i]);
            fs[v] = eval(xs[v]);
          }
        }
      }
    }

    const auto lo = static_cast<std::size_t>(std::min_element(fs.begin(), fs.end()) - fs.begin());
    if (fs[lo] < best_f) {
      best = xs[lo];
      best_f = fs[lo];
    }
    if (!first_round && last_round_f - best_f < tol) break;
    first_round = false;
    last_round_f = best_f;
    step = std::max(step * 0.5, 1e-3);
  }
  return {best, best_f, evals, evals >= max_evals};
}

MeasurementBasis basis_from_parameters(const Point& p) {
  return MeasurementBasis::from_columns("E", unitary_from_parameters(p));
}

}  // namespace

std::vector<Signal> signals(const Scheme& scheme) {
  std::vector<Signal> out;
  for (const auto& p : scheme.pairs) {
    out.push_back({p.type_id, Bit::plus});
    out.push_back({p.type_id, Bit::minus});
  }
  return out;
}

DensityMatrix::DensityMatrix(const HermitianMatrix4& m) : m_(m) {
  if (std::abs(m.trace() - 1.0) > 1e-10) {
    throw std::invalid_argument("DensityMatrix: trace " + std::to_string(m.trace()) + " is not 1");
  }
  if (eigen_decompose(m)[0].value < -1e-10) throw std::invalid_argument("DensityMatrix: not positive semidefinite");
}

HermitianMatrix4 wrong_click_operator(const Scheme& scheme, Signal sent) {
  HermitianMatrix4 w;
  for (BasisChoice c : {BasisChoice::b, BasisChoice::b_prime}) {
    for (std::size_t j = 0; j < kDim; ++j) {
      if (infer_bit(scheme, Detector{c, j}, sent.type_id) != sent.bit) w.add_projector(scheme.basis(c)[j], 0.5);
    }
  }
  return w;
}

double wrong_click_probability(const Scheme& scheme, Signal sent, const StateVector& resend) {
  double p = 0.0;
  for (BasisChoice c : {BasisChoice::b, BasisChoice::b_prime}) {
    const auto probs = born_probabilities(scheme.basis(c), resend);
    for (std::size_t j = 0; j < kDim; ++j) {
      if (infer_bit(scheme, Detector{c, j}, sent.type_id) != sent.bit) p += 0.5 * probs[j];
    }
  }
  return p;
}

double strategy_error_rate(const Scheme& scheme, const InterceptResendStrategy& strategy) {
  const auto sigs = signals(scheme);
  double total = 0.0;
  for (const Signal& s : sigs) {
    const auto probs = born_probabilities(strategy.measurement, scheme.pair(s.type_id).state(s.bit));
    for (std::size_t m = 0; m < kDim; ++m) {
      if (probs[m] > 0.0) total += probs[m] * wrong_click_probability(scheme, s, strategy.resend[m]);
    }
  }
  return std::clamp(total / static_cast<double>(sigs.size()), 0.0, 1.0);
}

ResendChoice optimal_resend(const Scheme& scheme, const MeasurementBasis& measurement, std::size_t outcome) {
  const ErrorModel model(scheme);
  auto w = model.likelihoods(measurement[outcome]);
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  const double n = static_cast<double>(model.size());
  std::vector<double> posterior(w.size(), 1.0 / n);
  if (total > 1e-300) {
    for (std::size_t i = 0; i < w.size(); ++i) posterior[i] = w[i] / total;
  }
  const auto eig = eigen_decompose(model.weighted_operator(posterior));
  return ResendChoice{eig[0].vector, std::max(eig[0].value, 0.0), total / n, std::move(posterior)};
}

InterceptResendStrategy strategy_with_optimal_resend(const Scheme& scheme, const MeasurementBasis& measurement) {
  InterceptResendStrategy s{measurement, {}};
  for (std::size_t m = 0; m < kDim; ++m) s.resend[m] = optimal_resend(scheme, measurement, m).state;
  return s;
}

double measurement_error_rate(const Scheme& scheme, const MeasurementBasis& measurement) {
  return ErrorModel(scheme).measurement_error(measurement);
}

Matrix4 unitary_from_parameters(const std::array<double, 16>& params) {
  Matrix4 h{};
  std::size_t idx = 0;
  for (std::size_t i = 0; i < kDim; ++i) h[i][i] = params[idx++];
  for (std::size_t i = 0; i < kDim; ++i) {
    for (std::size_t j = i + 1; j < kDim; ++j) {
      h[i][j] = Amplitude{params[idx], params[idx + 1]};
      h[j][i] = std::conj(h[i][j]);
      idx += 2;
    }
  }
  const auto eig = eigen_decompose(HermitianMatrix4(h));
  Matrix4 u{};
  for (const auto& e : eig) {
    const Amplitude phase = std::polar(1.0, e.value);
    for (std::size_t i = 0; i < kDim; ++i)
      for (std::size_t j = 0; j < kDim; ++j) u[i][j] += phase * e.vector[i] * std::conj(e.vector[j]);
  }
  return u;
}

OptimizationReport optimize_strategy(const Scheme& scheme, const OptimizerOptions& options, RandomStream& rng) {
  if (options.restarts < 1) throw std::invalid_argument("optimize_strategy: restarts must be >= 1");
  if (!(options.tolerance > 0.0)) throw std::invalid_argument("optimize_strategy: tolerance must be positive");

  const ErrorModel model(scheme);
  const std::uint64_t master = rng.next_u64();
  const auto restarts = static_cast<std::size_t>(options.restarts);
  std::vector<SimplexResult> results(restarts);

  auto run_one = [&](std::size_t r) {
    RandomStream local = RandomStream::substream(master, r);
    Point start;
    for (auto& x : start) x = (2.0 * local.uniform() - 1.0) * std::numbers::pi;
    results[r] = nelder_mead([&](const Point& p) { return model.measurement_error(basis_from_parameters(p)); },
                             start, 0.5, options.tolerance, options.max_evaluations);
  };

  unsigned threads = options.threads != 0 ? options.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, restarts));
  if (threads <= 1) {
    for (std::size_t r = 0; r < restarts; ++r) run_one(r);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t r = next++; r < restarts; r = next++) run_one(r);
      });
    }
  }

  OptimizationReport report{strategy_with_optimal_resend(scheme, MeasurementBasis::canonical()), 1.0,
                            options.restarts, true, {}};
  std::size_t best = 0;
  for (std::size_t r = 0; r < restarts; ++r) {
    report.history.push_back({static_cast<int>(r), results[r].f, results[r].evaluations, results[r].hit_cap});
    if (results[r].hit_cap) report.converged = false;
    if (results[r].f < results[best].f) best = r;
  }
  report.best_strategy = strategy_with_optimal_resend(scheme, basis_from_parameters(results[best].x));
  report.p_min = strategy_error_rate(scheme, report.best_strategy);
  return report;
}

DensityMatrix mixed_state(const std::vector<StateVector>& states, const std::vector<double>& weights) {
  if (states.size() != weights.size()) throw WeightMismatch("mixed_state: states and weights differ in length");
  if (states.empty()) throw WeightMismatch("mixed_state: no states");
  double sum = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw WeightMismatch("mixed_state: negative weight");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-12) throw WeightMismatch("mixed_state: weights sum to " + std::to_string(sum));
  HermitianMatrix4 rho;
  for (std::size_t i = 0; i < states.size(); ++i) rho.add_projector(states[i], weights[i]);
  return DensityMatrix(rho);
}

std::pair<DensityMatrix, DensityMatrix> bit_mixtures(const Scheme& scheme) {
  std::vector<StateVector> plus;
  std::vector<StateVector> minus;
  for (const auto& p : scheme.pairs) {
    plus.push_back(p.plus);
    minus.push_back(p.minus);
  }
  const std::vector<double> w(plus.size(), 1.0 / static_cast<double>(plus.size()));
  return {mixed_state(plus, w), mixed_state(minus, w)};
}

double helstrom_guess(const DensityMatrix& rho_plus, const DensityMatrix& rho_minus) {
  const double p = 0.5 + 0.25 * trace_norm(rho_plus.matrix() - rho_minus.matrix());
  return std::clamp(p, 0.5, 1.0);
}

namespace closed_form {

double two_pair_min_error(double k) { return 0.5 - 0.5 * std::sqrt(1.0 + k * k * k * k) / (1.0 + k * k); }

double four_pair_min_error(double k) { return 0.5 * std::min(1.0, k * k) / (1.0 + k * k); }

double k_scheme_guess(double k) { return 0.5 + 0.5 / std::sqrt(1.0 + k * k); }

std::optional<double> min_error_for(const Scheme& scheme) {
  if (scheme.name == "product") return two_pair_min_error(1.0);
  if (scheme.name == "three-one") return kThreeOneMinError;
  if (!scheme.k) return std::nullopt;
  if (scheme.name == "k") return two_pair_min_error(*scheme.k);
  if (scheme.name == "k4" || scheme.name == "k4-substitution") return four_pair_min_error(*scheme.k);
  return std::nullopt;
}

}  // namespace closed_form

}  // namespace detqkd
