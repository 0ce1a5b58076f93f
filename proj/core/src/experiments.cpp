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

#include "detqkd/experiments.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>

#include "detqkd/serialization.hpp"

namespace detqkd {

namespace {

constexpr Bit P = Bit::plus;
constexpr Bit M = Bit::minus;

struct Check {
  std::string name;
  bool passed;
  double value;
  double tolerance;
};

Json checks_json(const std::vector<Check>& checks) {
  Json out = Json::array();
  for (const auto& c : checks) {
    out.push_back(Json{{"name", c.name}, {"passed", c.passed}, {"value", c.value}, {"tolerance", c.tolerance}});
  }
  return out;
}

Check within(std::string name, double value, double tolerance) {
  return Check{std::move(name), value <= tolerance, value, tolerance};
}

// Max over (i, j) of | |<B_i|B'_j>|^2 - expected(i, j) |.
template <typename Expected>
double overlap_deviation(const Scheme& s, Expected expected) {
  double d = 0.0;
  for (std::size_t i = 0; i < kDim; ++i)
    for (std::size_t j = 0; j < kDim; ++j)
      d = std::max(d, std::abs(std::norm(inner(s.basis_b[i], s.basis_b_prime[j])) - expected(i, j)));
  return d;
}

// Number of (type, column) cells where the generated grid differs from the
// published one, restricted to the published rows.
double table_mismatches(const Scheme& s, BasisChoice basis, const std::vector<std::vector<Bit>>& published) {
  const auto generated = inference_table(s, basis);
  double bad = 0.0;
  for (std::size_t t = 0; t < published.size(); ++t)
    for (std::size_t j = 0; j < kDim; ++j)
      if (t >= generated.size() || generated[t][j] != published[t][j]) bad += 1.0;
  return bad;
}

double completeness_error(const Scheme& s, Bit which) {
  HermitianMatrix4 sum;
  for (const auto& p : s.pairs) sum.add_projector(p.state(which), 1.0);
  return max_abs_difference(sum.entries(), identity_matrix());
}

bool is_k_family(const Scheme& s) { return s.name == "k" || s.name == "k4" || s.name == "k4-substitution"; }

std::vector<Check> validation_checks(const Scheme& s) {
  std::vector<Check> checks;
  checks.push_back(within("basis_b_orthonormal", s.basis_b.orthonormality_error(), kOrthonormalTolerance));
  checks.push_back(within("basis_b_prime_orthonormal", s.basis_b_prime.orthonormality_error(), kOrthonormalTolerance));

  if (is_k_family(s)) {
    const KMatrix km(*s.k);
    const Matrix4& k = km.entries();
    checks.push_back(within("k_matrix_hermitian", max_abs_difference(k, adjoint(k)), 1e-12));
    checks.push_back(within("k_matrix_unitary", max_abs_difference(multiply(k, adjoint(k)), identity_matrix()), 1e-12));
    checks.push_back(within("k_matrix_squares_to_identity", max_abs_difference(multiply(k, k), identity_matrix()), 1e-12));
  }
  if (s.name == "three-one") {
    const Matrix4 t = three_one_transform();
    checks.push_back(within("transform_hermitian", max_abs_difference(t, adjoint(t)), 1e-12));
    checks.push_back(within("transform_unitary", max_abs_difference(multiply(t, adjoint(t)), identity_matrix()), 1e-12));
    checks.push_back(within("transform_squares_to_identity", max_abs_difference(multiply(t, t), identity_matrix()), 1e-12));
    checks.push_back(within("cross_overlaps_one_third",
                            overlap_deviation(s, [](std::size_t i, std::size_t j) { return i == j ? 0.0 : 1.0 / 3.0; }),
                            1e-12));
    checks.push_back(within("plus_states_complete", completeness_error(s, Bit::plus), 1e-10));
    checks.push_back(within("minus_states_complete", completeness_error(s, Bit::minus), 1e-10));
  }

  const double complementarity = overlap_deviation(s, [](std::size_t, std::size_t) { return 0.25; });
  if (s.name == "product" || (is_k_family(s) && std::abs(std::abs(*s.k) - 1.0) < 1e-15)) {
    checks.push_back(within("complementarity", complementarity, 1e-12));
  }

  checks.push_back(Check{"determinism", satisfies_determinism(s), satisfies_determinism(s) ? 0.0 : 1.0, 0.0});
  if (!satisfies_determinism(s)) return checks;

  if (s.name == "three-one") {
    checks.push_back(within("table2_basis_b", table_mismatches(s, BasisChoice::b, published_table2_b()), 0.0));
    checks.push_back(
        within("table2_basis_b_prime", table_mismatches(s, BasisChoice::b_prime, published_table2_b_prime()), 0.0));
  } else {
    checks.push_back(within("table1_basis_b", table_mismatches(s, BasisChoice::b, published_table1()), 0.0));
    checks.push_back(within("table1_basis_b_prime", table_mismatches(s, BasisChoice::b_prime, published_table1()), 0.0));

    // States of pairs 1 and 2 must be neither identical nor orthogonal.
    double lo = 1.0;
    double hi = 0.0;
    for (Bit a : {P, M})
      for (Bit b : {P, M}) {
        const double o = std::abs(inner(s.pair(1).state(a), s.pair(2).state(b)));
        lo = std::min(lo, o);
        hi = std::max(hi, o);
      }
    checks.push_back(Check{"pairs_1_2_not_orthogonal", lo > kOrthogonalityTolerance, lo, kOrthogonalityTolerance});
    checks.push_back(Check{"pairs_1_2_not_identical", hi < 1.0 - kOrthogonalityTolerance, hi, 1.0 - kOrthogonalityTolerance});
  }

  double max_cross = 0.0;
  for (std::size_t i = 0; i < s.pairs.size(); ++i)
    for (std::size_t j = i + 1; j < s.pairs.size(); ++j)
      for (Bit a : {P, M})
        for (Bit b : {P, M})
          max_cross = std::max(max_cross, std::abs(inner(s.pairs[i].state(a), s.pairs[j].state(b))));
  checks.push_back(Check{"pairs_distinct", max_cross < 1.0 - kOrthogonalityTolerance, max_cross,
                         1.0 - kOrthogonalityTolerance});
  return checks;
}

InterceptResendStrategy naive_strategy(const Scheme& scheme) {
  InterceptResendStrategy s{scheme.basis_b, {}};
  for (std::size_t j = 0; j < kDim; ++j) s.resend[j] = scheme.basis_b[j];
  return s;
}

Json optional_json(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

// Published direct-communication trace: 1-based types, bits, control flags
// and Bob's detections.
struct Table3 {
  std::vector<int> types{1, 3, 4, 4, 1, 2, 1, 3, 3};
  std::vector<Bit> bits{P, P, M, M, M, P, M, P, M};
  std::vector<bool> control{false, true, false, false, false, false, true, false, false};
  std::vector<std::string> states_sent{"1+", "3+", "4-", "4-", "1-", "2+", "1-", "3+", "3-"};
  std::vector<std::string> bob_finds{"B1", "B'1", "B'4", "B2", "B2", "B'4", "B4", "B3", "B'3"};
};

Detector parse_detector(const std::string& s) {
  const bool prime = s.size() == 3 && s[1] == '\'';
  return Detector{prime ? BasisChoice::b_prime : BasisChoice::b, static_cast<std::size_t>(s.back() - '1')};
}

std::string detector_label(Detector d) {
  return std::string(to_string(d.basis)) + std::to_string(d.index + 1);
}

CommandResult replay_table3() {
  const Table3 fixture;
  const Scheme scheme = three_one_scheme();
  DirectCommPlan plan{fixture.types, fixture.bits, fixture.control};
  std::vector<Detector> forced;
  for (const auto& s : fixture.bob_finds) forced.push_back(parse_detector(s));
  RandomStream unused(0);
  const SessionTranscript t = run_direct_comm_plan(scheme, plan, ChannelConfig{}, unused, forced);

  Json key = Json::array(), message = Json::array(), sent = Json::array(), finds = Json::array();
  for (const auto& r : t.photons) {
    key.push_back(r.type_id);
    message.push_back(r.control ? "[" + to_string(r.bit) + "]" : to_string(r.bit));
    sent.push_back(std::to_string(r.type_id) + to_string(r.bit));
    finds.push_back(detector_label(*r.detection));
  }
  std::vector<Bit> expected_message;
  for (std::size_t i = 0; i < fixture.bits.size(); ++i)
    if (!fixture.control[i]) expected_message.push_back(fixture.bits[i]);

  std::vector<Check> checks;
  checks.push_back(Check{"row_key", key == Json(fixture.types), 0.0, 0.0});
  checks.push_back(Check{"row_states_sent", sent == Json(fixture.states_sent), 0.0, 0.0});
  checks.push_back(Check{"row_bob_finds", finds == Json(fixture.bob_finds), 0.0, 0.0});
  checks.push_back(Check{"verdict_message", t.verdict.kind == VerdictKind::message, 0.0, 0.0});
  checks.push_back(Check{"message_reconstructed", t.verdict.bob_bits == expected_message, 0.0, 0.0});
  const bool ok = std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });

  Json out{{"command", "comm"},
           {"mode", "replay-table3"},
           {"rows",
            Json{{"alice_key", key}, {"message", message}, {"states_sent", sent}, {"bob_finds", finds}}},
           {"reconstructed_message", to_string(t.verdict.bob_bits)},
           {"checks", checks_json(checks)},
           {"passed", ok},
           {"transcript", to_json(t)}};
  return {ok ? kExitOk : kExitCheckFailed, std::move(out)};
}

void check_seedless_config(double loss) {
  if (!(loss >= 0.0 && loss < 1.0)) throw UsageError("--loss must lie in [0, 1)");
}

}  // namespace

SeedChoice resolve_seed(std::optional<std::uint64_t> explicit_seed) {
  if (explicit_seed) return {*explicit_seed, "flag"};
  if (const char* env = std::getenv("DETQKD_SEED"); env != nullptr && *env != '\0') {
    std::string s(env);
    if (!std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c) != 0; })) {
      throw UsageError("DETQKD_SEED must be an unsigned integer");
    }
    try {
      return {std::stoull(s), "env"};
    } catch (const std::exception&) {
      throw UsageError("DETQKD_SEED is out of range");
    }
  }
  std::random_device rd;
  return {(static_cast<std::uint64_t>(rd()) << 32) ^ rd(), "generated"};
}

Scheme build_scheme(const SchemeRequest& request) {
  try {
    return make_scheme(request.name, request.k);
  } catch (const UsageError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

std::vector<std::vector<Bit>> published_table1() { return {{P, P, M, M}, {P, M, P, M}}; }

std::vector<std::vector<Bit>> published_table2_b() {
  return {{P, M, M, M}, {M, P, M, M}, {M, M, P, M}, {M, M, M, P}};
}

std::vector<std::vector<Bit>> published_table2_b_prime() {
  return {{M, P, P, P}, {P, M, P, P}, {P, P, M, P}, {P, P, P, M}};
}

CommandResult cmd_scheme_validate(const SchemeRequest& request) {
  const Scheme s = build_scheme(request);
  const auto checks = validation_checks(s);
  const bool ok = std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
  Json informational{
      {"complementarity_max_deviation", overlap_deviation(s, [](std::size_t, std::size_t) { return 0.25; })}};
  if (satisfies_determinism(s)) {
    Json needs = Json::array();
    for (BasisChoice c : {BasisChoice::b, BasisChoice::b_prime})
      for (std::size_t j = 0; j < kDim; ++j)
        needs.push_back(Json{{"detector", detector_label({c, j})},
                             {"needs_classical_info", needs_classical_info(s, s.basis(c)[j])}});
    informational["classical_info"] = std::move(needs);
  }
  Json out{{"command", "scheme validate"},
           {"scheme", s.name},
           {"k", optional_json(s.k)},
           {"checks", checks_json(checks)},
           {"informational", std::move(informational)},
           {"passed", ok}};
  return {ok ? kExitOk : kExitCheckFailed, std::move(out)};
}

CommandResult cmd_scheme_dump(const SchemeRequest& request) { return {kExitOk, to_json(build_scheme(request))}; }

EvanMode parse_evan_mode(const std::string& s) {
  if (s == "none") return EvanMode::none;
  if (s == "naive") return EvanMode::naive;
  if (s == "optimal") return EvanMode::optimal;
  if (s == "file") return EvanMode::file;
  throw UsageError("--evan must be none, naive, optimal or file");
}

ResolvedEvan resolve_evan(const Scheme& scheme, const EvanRequest& request, std::uint64_t seed) {
  ResolvedEvan out;
  switch (request.mode) {
    case EvanMode::none:
      out.description = Json{{"mode", "none"}};
      return out;
    case EvanMode::naive:
      out.strategy = naive_strategy(scheme);
      out.description = Json{{"mode", "naive"}};
      break;
    case EvanMode::optimal: {
      if (request.restarts < 1) throw UsageError("--restarts must be at least 1");
      if (!(request.tolerance > 0.0)) throw UsageError("--tol must be positive");
      RandomStream rng = RandomStream::substream(seed, 1);
      const auto report = optimize_strategy(scheme, {request.restarts, request.tolerance}, rng);
      out.strategy = report.best_strategy;
      out.description = Json{{"mode", "optimal"}, {"restarts", request.restarts}, {"converged", report.converged}};
      break;
    }
    case EvanMode::file: {
      std::ifstream in(request.strategy_path);
      if (!in) throw UsageError("cannot open strategy file '" + request.strategy_path + "'");
      try {
        out.strategy = strategy_from_json(Json::parse(in));
      } catch (const std::exception& e) {
        throw UsageError("invalid strategy file '" + request.strategy_path + "': " + e.what());
      }
      out.description = Json{{"mode", "file"}, {"path", request.strategy_path}};
      break;
    }
  }
  out.error_rate = strategy_error_rate(scheme, *out.strategy);
  out.description["error_rate"] = out.error_rate;
  out.description["closed_form_min_error"] = optional_json(closed_form::min_error_for(scheme));
  return out;
}

CommandResult cmd_qkd(const QkdRequest& request) {
  if (request.photons == 0) throw UsageError("--photons must be positive");
  if (request.photons <= request.checks) throw UsageError("--photons must exceed --checks");
  check_seedless_config(request.loss);
  const Scheme scheme = build_scheme(request.scheme);
  const ResolvedEvan evan = resolve_evan(scheme, request.evan, request.seed);

  RandomStream rng = RandomStream::substream(request.seed, 0);
  const SessionTranscript t = run_qkd_session(scheme, request.photons - request.checks, request.checks,
                                              ChannelConfig{evan.strategy, request.loss}, rng);

  const double detected = static_cast<double>(t.stats.photons_sent - t.stats.photons_lost);
  const double rate = t.stats.all_inconsistency_rate();
  const double expected = evan.strategy ? evan.error_rate : 0.0;
  const double sigma = detected > 0.0 ? std::sqrt(expected * (1.0 - expected) / detected) : 0.0;
  const bool within_band = std::abs(rate - expected) <= 3.0 * sigma;
  const bool keys_match = t.verdict.alice_bits == t.verdict.bob_bits;

  Json summary{{"verdict", to_string(t.verdict.kind)},
               {"reason", t.verdict.reason},
               {"keys_match", keys_match},
               {"key_length", t.verdict.bob_bits.size()},
               {"photons_sent", t.stats.photons_sent},
               {"photons_checked", t.stats.photons_checked},
               {"check_inconsistency_rate", t.stats.check_inconsistency_rate()},
               {"all_inconsistency_rate", rate},
               {"expected_inconsistency_rate", expected},
               {"sigma", sigma},
               {"within_3_sigma", within_band}};
  if (const auto p_ref = closed_form::min_error_for(scheme)) {
    summary["undetected_eavesdropper_probability"] =
        Json{{"label", "(1 - p_min)^checks: probability that an optimal intercept-resend eavesdropper passes every check"},
             {"p_min", *p_ref},
             {"checks", request.checks},
             {"value", undetected_eavesdropper_probability(*p_ref, request.checks)}};
  }

  Json out{{"command", "qkd"},
           {"scheme", scheme.name},
           {"k", optional_json(scheme.k)},
           {"seed", request.seed},
           {"evan", evan.description},
           {"summary", std::move(summary)}};
  if (request.include_transcript) out["transcript"] = to_json(t);

  const bool ok = evan.strategy ? within_band : (t.verdict.kind == VerdictKind::key && keys_match);
  return {ok ? kExitOk : kExitCheckFailed, std::move(out)};
}

CommandResult cmd_comm(const CommRequest& request) {
  if (request.replay_table3) return replay_table3();
  if (request.message.empty()) throw UsageError("--message must contain at least one bit");
  if (!(request.control_fraction > 0.0 && request.control_fraction < 1.0)) {
    throw UsageError("--control-fraction must lie in (0, 1)");
  }
  if (request.sessions == 0) throw UsageError("--sessions must be positive");
  check_seedless_config(request.loss);
  const Scheme scheme = three_one_scheme();
  const ResolvedEvan evan = resolve_evan(scheme, request.evan, request.seed);
  const ChannelConfig channel{evan.strategy, request.loss};

  if (request.sessions == 1) {
    RandomStream rng = RandomStream::substream(request.seed, 0);
    const SessionTranscript t = run_direct_comm_session(request.message, request.control_fraction, channel, rng);
    const bool exact = t.verdict.kind == VerdictKind::message && t.verdict.bob_bits == request.message;
    Json out{{"command", "comm"},
             {"seed", request.seed},
             {"evan", evan.description},
             {"summary",
              Json{{"verdict", to_string(t.verdict.kind)},
                   {"reason", t.verdict.reason},
                   {"message_sent", to_string(request.message)},
                   {"message_received", to_string(t.verdict.bob_bits)},
                   {"exact", exact},
                   {"control_bits", t.stats.photons_checked}}}};
    if (request.include_transcript) out["transcript"] = to_json(t);
    const bool ok = evan.strategy || request.loss > 0.0 || exact;
    return {ok ? kExitOk : kExitCheckFailed, std::move(out)};
  }

  // Many sessions: compare the abort count with sum over sessions of
  // 1 - (1 - p)^controls, p the strategy's wrong-click rate.
  std::size_t aborts = 0;
  std::size_t exact = 0;
  double expected = 0.0;
  double variance = 0.0;
  for (std::size_t s = 0; s < request.sessions; ++s) {
    RandomStream rng = RandomStream::substream(request.seed, s);
    const SessionTranscript t = run_direct_comm_session(request.message, request.control_fraction, channel, rng);
    if (t.verdict.kind == VerdictKind::abort) ++aborts;
    if (t.verdict.kind == VerdictKind::message && t.verdict.bob_bits == request.message) ++exact;
    const double q = 1.0 - undetected_eavesdropper_probability(evan.error_rate, t.stats.photons_checked);
    expected += q;
    variance += q * (1.0 - q);
  }
  const double n = static_cast<double>(request.sessions);
  const double sigma = std::sqrt(variance) / n;
  const double abort_rate = static_cast<double>(aborts) / n;
  const bool within_band = std::abs(abort_rate - expected / n) <= 3.0 * sigma;
  Json out{{"command", "comm"},
           {"seed", request.seed},
           {"evan", evan.description},
           {"sessions", request.sessions},
           {"summary",
            Json{{"aborts", aborts},
                 {"abort_rate", abort_rate},
                 {"expected_abort_rate", expected / n},
                 {"sigma", sigma},
                 {"within_3_sigma", within_band},
                 {"exact_messages", exact}}}};
  const bool ok = evan.strategy ? within_band : (exact == request.sessions || request.loss > 0.0);
  return {ok ? kExitOk : kExitCheckFailed, std::move(out)};
}

CommandResult cmd_eve_optimize(const OptimizeRequest& request) {
  if (request.restarts < 1) throw UsageError("--restarts must be at least 1");
  if (!(request.tolerance > 0.0)) throw UsageError("--tol must be positive");
  const Scheme scheme = build_scheme(request.scheme);
  RandomStream rng(request.seed);
  const auto report = optimize_strategy(scheme, {request.restarts, request.tolerance, kMaxEvaluationsPerRestart, request.threads}, rng);
  const auto reference = closed_form::min_error_for(scheme);
  std::optional<double> diff;
  if (reference) diff = std::abs(report.p_min - *reference);
  const bool flagged = diff.has_value() && diff.value() > kSweepFlagThreshold;
  Json out{{"command", "eve optimize"},
           {"scheme", scheme.name},
           {"k", optional_json(scheme.k)},
           {"seed", request.seed},
           {"tolerance", request.tolerance},
           {"p_min", report.p_min},
           {"closed_form", optional_json(reference)},
           {"difference", optional_json(diff)},
           {"flagged", flagged}};
  const Json details = to_json(report);
  for (const auto& [key, value] : details.items()) {
    if (key != "p_min") out[key] = value;
  }
  return {kExitOk, std::move(out)};
}

double SweepReport::max_abs_difference() const {
  double d = 0.0;
  for (const auto& r : rows)
    if (r.abs_difference) d = std::max(d, *r.abs_difference);
  return d;
}

bool SweepReport::any_flagged() const {
  return std::any_of(rows.begin(), rows.end(), [](const SweepRow& r) { return r.flagged; });
}

SweepReport run_sweep(const SweepRequest& request) {
  if (request.k_grid.empty()) throw UsageError("k grid must not be empty");
  if (request.restarts < 1) throw UsageError("--restarts must be at least 1");
  if (!(request.tolerance > 0.0)) throw UsageError("--tol must be positive");
  // Construct every scheme first so a bad grid point fails before any work.
  std::vector<Scheme> schemes;
  for (double k : request.k_grid) schemes.push_back(build_scheme({request.scheme, k}));

  const auto start = std::chrono::steady_clock::now();
  SweepReport report{request.scheme, {}, request.restarts, request.tolerance, request.seed, std::nullopt};
  for (std::size_t i = 0; i < schemes.size(); ++i) {
    RandomStream rng = RandomStream::substream(request.seed, i);
    const auto opt = optimize_strategy(
        schemes[i], {request.restarts, request.tolerance, kMaxEvaluationsPerRestart, request.threads}, rng);
    SweepRow row{request.k_grid[i], opt.p_min, closed_form::min_error_for(schemes[i]), std::nullopt, opt.converged, false};
    if (row.p_min_closed_form) {
      row.abs_difference = std::abs(row.p_min_numeric - *row.p_min_closed_form);
      row.flagged = *row.abs_difference > kSweepFlagThreshold;
    }
    report.rows.push_back(row);
  }
  if (request.record_timing) {
    report.wall_time_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
  return report;
}

Json to_json(const SweepReport& report) {
  Json rows = Json::array();
  for (const auto& r : report.rows) {
    rows.push_back(Json{{"k", r.k},
                        {"p_min_numeric", r.p_min_numeric},
                        {"p_min_closed_form", optional_json(r.p_min_closed_form)},
                        {"abs_difference", optional_json(r.abs_difference)},
                        {"converged", r.converged},
                        {"flagged", r.flagged}});
  }
  Json meta{{"restarts", report.restarts}, {"tolerance", report.tolerance}, {"seed", report.seed}};
  if (report.wall_time_seconds) meta["wall_time_seconds"] = *report.wall_time_seconds;
  return Json{{"command", "eve sweep"},
              {"scheme", report.scheme},
              {"rows", std::move(rows)},
              {"max_abs_difference", report.max_abs_difference()},
              {"flag_threshold", kSweepFlagThreshold},
              {"any_flagged", report.any_flagged()},
              {"metadata", std::move(meta)}};
}

std::string to_csv(const SweepReport& report) {
  std::ostringstream os;
  os.precision(17);
  os << "k,p_min_numeric,p_min_closed_form,abs_difference,converged,flagged\n";
  for (const auto& r : report.rows) {
    os << r.k << ',' << r.p_min_numeric << ',';
    if (r.p_min_closed_form) os << *r.p_min_closed_form;
    os << ',';
    if (r.abs_difference) os << *r.abs_difference;
    os << ',' << (r.converged ? "true" : "false") << ',' << (r.flagged ? "true" : "false") << '\n';
  }
  return os.str();
}

CommandResult cmd_eve_sweep(const SweepRequest& request) {
  const SweepReport report = run_sweep(request);
  return {report.any_flagged() ? kExitCheckFailed : kExitOk, to_json(report)};
}

CommandResult cmd_guess(const SchemeRequest& request) {
  const Scheme scheme = build_scheme(request);
  const auto [plus, minus] = bit_mixtures(scheme);
  const double guess = helstrom_guess(plus, minus);
  std::optional<double> reference;
  if (scheme.name == "k") reference = closed_form::k_scheme_guess(*scheme.k);
  if (scheme.name == "product") reference = closed_form::k_scheme_guess(1.0);
  if (scheme.name == "three-one") reference = 0.5;
  std::optional<double> diff;
  if (reference) diff = std::abs(guess - *reference);
  const bool ok = !diff.has_value() || diff.value() <= kGuessTolerance;
  Json out{{"command", "guess"},
           {"scheme", scheme.name},
           {"k", optional_json(scheme.k)},
           {"helstrom_guess", guess},
           {"closed_form", optional_json(reference)},
           {"difference", optional_json(diff)},
           {"tolerance", kGuessTolerance},
           {"passed", ok}};
  return {ok ? kExitOk : kExitCheckFailed, std::move(out)};
}

}  // namespace detqkd
