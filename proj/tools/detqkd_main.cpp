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

// detqkd: command-line front end.
//
//   detqkd scheme validate|dump --name <scheme> [--k K]
//   detqkd qkd   [--scheme k --k 1 --photons 1100 --checks 100 --evan none|naive|optimal|file]
//   detqkd comm  [--message "+-+-" --control-fraction 0.1 --sessions 1 --replay-table3]
//   detqkd eve optimize|sweep ...
//   detqkd guess --scheme <scheme> [--k K]
//
// Exit codes: 0 success, 1 a check failed, 2 usage error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "detqkd/experiments.hpp"

namespace {

using detqkd::CommandResult;
using detqkd::Json;

struct Output {
  std::string path;
  std::string csv_path;
  bool quiet = false;
};

void add_output_flags(CLI::App* cmd, Output& out) {
  cmd->add_option("--out", out.path, "Write the JSON result to this file");
  cmd->add_flag("--quiet", out.quiet, "Do not print the result to stdout");
}

void add_scheme_flags(CLI::App* cmd, detqkd::SchemeRequest& req, std::optional<double>& k, const char* flag) {
  cmd->add_option(flag, req.name, "product, k, k4, k4-substitution or three-one")->capture_default_str();
  cmd->add_option("--k", k, "Scheme parameter k");
}

void add_seed_flag(CLI::App* cmd, std::optional<std::uint64_t>& seed) {
  cmd->add_option("--seed", seed, "Master seed (falls back to DETQKD_SEED, then a random seed)");
}

void add_evan_flags(CLI::App* cmd, std::string& mode, detqkd::EvanRequest& evan) {
  cmd->add_option("--evan", mode, "Eavesdropper: none, naive, optimal or file")->capture_default_str();
  cmd->add_option("--strategy", evan.strategy_path, "Strategy or optimizer report JSON (with --evan file)");
  cmd->add_option("--restarts", evan.restarts, "Optimizer restarts for --evan optimal")->capture_default_str();
  cmd->add_option("--tol", evan.tolerance, "Optimizer tolerance for --evan optimal")->capture_default_str();
}

Json with_seed_source(Json j, const detqkd::SeedChoice& seed) {
  j["seed"] = seed.seed;
  j["seed_source"] = seed.source;
  return j;
}

int emit(const CommandResult& result, const Output& out) {
  const std::string text = result.output.dump(2) + "\n";
  if (!out.path.empty()) {
    std::ofstream f(out.path, std::ios::binary);
    if (!f) {
      std::cerr << "error: cannot write " << out.path << "\n";
      return detqkd::kExitUsage;
    }
    f << text;
  }
  if (!out.quiet) {
    // Transcripts can be large; print them only when no file was requested.
    if (!out.path.empty() && result.output.contains("transcript")) {
      Json brief = result.output;
      brief.erase("transcript");
      std::cout << brief.dump(2) << "\n";
    } else {
      std::cout << text;
    }
  }
  return result.exit_code;
}

std::vector<double> parse_grid(const std::string& s) {
  std::vector<double> grid;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw detqkd::UsageError("invalid k grid entry '" + item + "'");
    }
    if (used != item.size()) throw detqkd::UsageError("invalid k grid entry '" + item + "'");
    grid.push_back(v);
  }
  return grid;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deterministic two-qubit single-photon key distribution and direct communication toolkit"};
  app.require_subcommand(1);
  Output out;

  // scheme
  auto* scheme = app.add_subcommand("scheme", "Validate or dump a scheme");
  scheme->require_subcommand(1);
  detqkd::SchemeRequest scheme_req;
  std::optional<double> scheme_k;
  auto* validate = scheme->add_subcommand("validate", "Check orthonormality, K properties, determinism and tables");
  auto* dump = scheme->add_subcommand("dump", "Print the scheme's states and bases as JSON");
  for (auto* c : {validate, dump}) {
    add_scheme_flags(c, scheme_req, scheme_k, "--name");
    add_output_flags(c, out);
  }

  // qkd
  auto* qkd = app.add_subcommand("qkd", "Run one key-distribution session");
  detqkd::QkdRequest qkd_req;
  std::optional<double> qkd_k;
  std::optional<std::uint64_t> qkd_seed;
  std::string qkd_evan = "none";
  bool qkd_no_transcript = false;
  add_scheme_flags(qkd, qkd_req.scheme, qkd_k, "--scheme");
  qkd->add_option("--photons", qkd_req.photons, "Photons sent (key bits plus checks)")->capture_default_str();
  qkd->add_option("--checks", qkd_req.checks, "Photons Bob reveals for the check")->capture_default_str();
  qkd->add_option("--loss", qkd_req.loss, "Photon loss probability")->capture_default_str();
  qkd->add_flag("--no-transcript", qkd_no_transcript, "Omit per-photon records");
  add_evan_flags(qkd, qkd_evan, qkd_req.evan);
  add_seed_flag(qkd, qkd_seed);
  add_output_flags(qkd, out);

  // comm
  auto* comm = app.add_subcommand("comm", "Run direct confidential communication over the three-one scheme");
  detqkd::CommRequest comm_req;
  std::string comm_message = "+-+-";
  std::string comm_evan = "none";
  std::optional<std::uint64_t> comm_seed;
  bool comm_no_transcript = false;
  comm->add_option("--message", comm_message, "Message as a string of + and -")->capture_default_str();
  comm->add_option("--control-fraction", comm_req.control_fraction, "Probability that a position is a control bit")
      ->capture_default_str();
  comm->add_option("--sessions", comm_req.sessions, "Number of independent sessions to aggregate")->capture_default_str();
  comm->add_option("--loss", comm_req.loss, "Photon loss probability")->capture_default_str();
  comm->add_flag("--replay-table3", comm_req.replay_table3, "Replay the published nine-photon trace and check it");
  comm->add_flag("--no-transcript", comm_no_transcript, "Omit per-photon records");
  add_evan_flags(comm, comm_evan, comm_req.evan);
  add_seed_flag(comm, comm_seed);
  add_output_flags(comm, out);

  // eve
  auto* eve = app.add_subcommand("eve", "Intercept-resend eavesdropper analysis");
  eve->require_subcommand(1);
  auto* optimize = eve->add_subcommand("optimize", "Minimize the wrong-click rate over measurement bases");
  detqkd::OptimizeRequest opt_req;
  std::optional<double> opt_k;
  std::optional<std::uint64_t> opt_seed;
  add_scheme_flags(optimize, opt_req.scheme, opt_k, "--scheme");
  optimize->add_option("--restarts", opt_req.restarts, "Random restarts")->capture_default_str();
  optimize->add_option("--tol", opt_req.tolerance, "Stop when an improvement round gains less than this")
      ->capture_default_str();
  optimize->add_option("--threads", opt_req.threads, "Worker threads (0: all cores)")->capture_default_str();
  add_seed_flag(optimize, opt_seed);
  add_output_flags(optimize, out);

  auto* sweep = eve->add_subcommand("sweep", "Optimize over a k grid and compare with closed forms");
  detqkd::SweepRequest sweep_req;
  std::string grid = "0.25,0.5,1,2,4";
  std::optional<std::uint64_t> sweep_seed;
  sweep->add_option("--scheme", sweep_req.scheme, "k, k4, k4-substitution, product or three-one")->capture_default_str();
  sweep->add_option("--k-grid", grid, "Comma-separated k values")->capture_default_str();
  sweep->add_option("--restarts", sweep_req.restarts, "Random restarts per point")->capture_default_str();
  sweep->add_option("--tol", sweep_req.tolerance, "Optimizer tolerance")->capture_default_str();
  sweep->add_option("--threads", sweep_req.threads, "Worker threads (0: all cores)")->capture_default_str();
  sweep->add_option("--csv", out.csv_path, "Also write the table as CSV");
  sweep->add_flag("--timing", sweep_req.record_timing, "Record wall time in the report (not reproducible)");
  add_seed_flag(sweep, sweep_seed);
  add_output_flags(sweep, out);

  // guess
  auto* guess = app.add_subcommand("guess", "Helstrom odds of guessing bits without the pair type");
  detqkd::SchemeRequest guess_req;
  std::optional<double> guess_k;
  add_scheme_flags(guess, guess_req, guess_k, "--scheme");
  add_output_flags(guess, out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return detqkd::kExitUsage;
  }

  try {
    if (validate->parsed() || dump->parsed()) {
      scheme_req.k = scheme_k;
      return emit(validate->parsed() ? detqkd::cmd_scheme_validate(scheme_req) : detqkd::cmd_scheme_dump(scheme_req),
                  out);
    }
    if (qkd->parsed()) {
      if (qkd_k) qkd_req.scheme.k = qkd_k;
      qkd_req.evan.mode = detqkd::parse_evan_mode(qkd_evan);
      qkd_req.include_transcript = !qkd_no_transcript;
      const auto seed = detqkd::resolve_seed(qkd_seed);
      qkd_req.seed = seed.seed;
      auto result = detqkd::cmd_qkd(qkd_req);
      result.output = with_seed_source(std::move(result.output), seed);
      return emit(result, out);
    }
    if (comm->parsed()) {
      comm_req.evan.mode = detqkd::parse_evan_mode(comm_evan);
      comm_req.include_transcript = !comm_no_transcript;
      if (!comm_req.replay_table3) {
        try {
          comm_req.message = detqkd::parse_bits(comm_message);
        } catch (const std::invalid_argument& e) {
          throw detqkd::UsageError(e.what());
        }
      }
      const auto seed = detqkd::resolve_seed(comm_seed);
      comm_req.seed = seed.seed;
      auto result = detqkd::cmd_comm(comm_req);
      if (!comm_req.replay_table3) result.output = with_seed_source(std::move(result.output), seed);
      return emit(result, out);
    }
    if (optimize->parsed()) {
      opt_req.scheme.k = opt_k;
      const auto seed = detqkd::resolve_seed(opt_seed);
      opt_req.seed = seed.seed;
      auto result = detqkd::cmd_eve_optimize(opt_req);
      result.output = with_seed_source(std::move(result.output), seed);
      return emit(result, out);
    }
    if (sweep->parsed()) {
      sweep_req.k_grid = parse_grid(grid);
      const auto seed = detqkd::resolve_seed(sweep_seed);
      sweep_req.seed = seed.seed;
      const auto report = detqkd::run_sweep(sweep_req);
      CommandResult result{report.any_flagged() ? detqkd::kExitCheckFailed : detqkd::kExitOk,
                           with_seed_source(detqkd::to_json(report), seed)};
      if (!out.csv_path.empty()) {
        std::ofstream f(out.csv_path, std::ios::binary);
        if (!f) {
          std::cerr << "error: cannot write " << out.csv_path << "\n";
          return detqkd::kExitUsage;
        }
        f << detqkd::to_csv(report);
      }
      return emit(result, out);
    }
    if (guess->parsed()) {
      guess_req.k = guess_k;
      return emit(detqkd::cmd_guess(guess_req), out);
    }
  } catch (const detqkd::ConfigError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return detqkd::kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return detqkd::kExitCheckFailed;
  }
  return detqkd::kExitUsage;
}
