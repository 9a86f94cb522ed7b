// Copyright 2026 The sptrade Authors
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

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "sptrade/experiment.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitSolverFailure = 3;

void print_result(const sptrade::Scenario& s, const sptrade::SelectionResult& sel) {
  const auto& r = sel.final;
  std::printf("scheme: %s\n", sptrade::scheme_name(sel.scheme).c_str());
  if (r.status == sptrade::SolveStatus::kInfeasible) {
    std::printf("status: infeasible (%s)\n", r.infeasible_reason.c_str());
    return;
  }
  std::printf("status: %s\n",
              r.status == sptrade::SolveStatus::kOptimal ? "optimal"
                                                         : "iteration-cap");
  std::printf("selected MUs:");
  for (int k : r.allocation.selected) std::printf(" %d", k);
  if (r.allocation.selected.empty()) std::printf(" (none)");
  std::printf("\n");
  std::printf("system EE: %.10g bits/joule\n", r.breakdown.ee_bits_per_joule);
  std::printf("total SU rate: %.10g bits/s\n", r.breakdown.r_total_bps);
  std::printf("total power: %.10g W (circuit %.10g W)\n", r.breakdown.p_total_w,
              s.p_c_w);
  std::printf("duals: lambda %.6g, mu %.6g; outer %d, inner %d\n", r.lambda,
              r.mu, r.outer_iters, r.inner_iters);
  for (int k : r.allocation.selected) {
    const auto i = static_cast<std::size_t>(k);
    std::printf("  MU %d -> SU %d: kept %.6g kHz, shared %.6g kHz, "
                "q %.6g mW, p_sh %.6g mW\n",
                k, r.allocation.su_of_mu[i], r.allocation.w_mu_hz[i] / 1e3,
                r.allocation.b_sh_hz[i] / 1e3, r.allocation.q_mu_w[i] * 1e3,
                r.allocation.p_sh_w[i] * 1e3);
  }
  for (int n = 0; n < s.su_count; ++n) {
    const auto i = static_cast<std::size_t>(n);
    std::printf("  SU %d: p %.6g mW, rate %.6g kbit/s\n", n,
                r.allocation.p_su_w[i] * 1e3,
                r.breakdown.su_rates_bps[i] / 1e3);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Small-cell spectrum-power trading: energy-efficiency solver "
               "and Monte Carlo simulator"};
  app.require_subcommand(1);

  // drop: emit one random scenario file
  auto* drop = app.add_subcommand("drop", "Generate one scenario file");
  std::uint64_t drop_seed_arg = 1;
  std::string drop_out = "scenario.txt";
  drop->add_option("--seed", drop_seed_arg, "Master seed");
  drop->add_option("--out", drop_out, "Output scenario path");

  // solve: run one scheme on a scenario file
  auto* solve_cmd = app.add_subcommand("solve", "Solve one scenario file");
  std::string solve_path;
  std::string solve_scheme = "spt-order";
  bool no_c1 = false, no_c4 = false;
  solve_cmd->add_option("scenario", solve_path, "Scenario file")->required();
  solve_cmd->add_option("--scheme", solve_scheme,
                        "spt-order | exhaustive | non-spt | throughput");
  solve_cmd->add_flag("--no-c1", no_c1, "Drop the total power constraint");
  solve_cmd->add_flag("--no-c4", no_c4, "Drop the minimum system rate constraint");

  // sweep: run a Monte Carlo experiment config to CSV
  auto* sweep = app.add_subcommand("sweep", "Run an experiment config to CSV");
  std::string sweep_cfg_path;
  std::string sweep_out;
  std::string sweep_scheme;
  std::uint64_t sweep_seed = 0;
  bool sweep_seed_set = false, sweep_drops_set = false;
  int sweep_drops = 0;
  bool sweep_no_c1 = false, sweep_no_c4 = false;
  sweep->add_option("config", sweep_cfg_path, "Experiment config file")->required();
  sweep->add_option("--out", sweep_out, "CSV output path (overrides config)");
  sweep->add_option("--scheme", sweep_scheme, "Run only this scheme");
  sweep->add_option("--seed", sweep_seed, "Master seed (overrides config)")
      ->each([&](const std::string&) { sweep_seed_set = true; });
  sweep->add_option("--drops", sweep_drops, "Drop count (overrides config)")
      ->each([&](const std::string&) { sweep_drops_set = true; });
  sweep->add_flag("--no-c1", sweep_no_c1, "Drop the total power constraint");
  sweep->add_flag("--no-c4", sweep_no_c4, "Drop the minimum system rate constraint");

  CLI11_PARSE(app, argc, argv);

  try {
    if (drop->parsed()) {
      sptrade::DropGeometry geom;
      sptrade::ChannelParams params;
      sptrade::DropDefaults table;
      const sptrade::Scenario s =
          sptrade::generate_drop(geom, params, table, drop_seed_arg);
      sptrade::save_scenario(s, drop_out);
      std::printf("wrote %s (seed %llu)\n", drop_out.c_str(),
                  static_cast<unsigned long long>(drop_seed_arg));
      return kExitOk;
    }

    if (solve_cmd->parsed()) {
      sptrade::Scenario s;
      sptrade::Scheme scheme;
      try {
        s = sptrade::load_scenario(solve_path);
        scheme = sptrade::scheme_from_name(solve_scheme);
      } catch (const std::exception& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
      }
      sptrade::SolveOptions opts;
      opts.enforce_c1 = !no_c1;
      opts.enforce_c4 = !no_c4;
      const sptrade::SelectionResult sel = sptrade::run_scheme(s, scheme, opts);
      print_result(s, sel);
      if (sel.final.status == sptrade::SolveStatus::kInfeasible) {
        return kExitInfeasible;
      }
      if (sel.final.status == sptrade::SolveStatus::kIterationCap) {
        return kExitSolverFailure;
      }
      return kExitOk;
    }

    // sweep
    sptrade::ExperimentConfig cfg;
    try {
      cfg = sptrade::load_experiment_config(sweep_cfg_path);
      if (sweep_seed_set) cfg.seed = sweep_seed;
      if (sweep_drops_set) cfg.drops = sweep_drops;
      if (!sweep_out.empty()) cfg.out_path = sweep_out;
      if (!sweep_scheme.empty()) {
        cfg.schemes = {sptrade::scheme_from_name(sweep_scheme)};
      }
      if (sweep_no_c1) cfg.solve_options.enforce_c1 = false;
      if (sweep_no_c4) cfg.solve_options.enforce_c4 = false;
      if (cfg.out_path.empty()) cfg.out_path = "sweep.csv";
    } catch (const std::exception& e) {
      std::fprintf(stderr, "config error: %s\n", e.what());
      return kExitConfig;
    }

    // Stream rows so an interrupted sweep still leaves a usable prefix.
    std::ofstream out(cfg.out_path);
    if (!out) {
      std::fprintf(stderr, "config error: cannot write %s\n", cfg.out_path.c_str());
      return kExitConfig;
    }
    out << sptrade::csv_header(cfg.experiment) << "\n";
    out.flush();
    bool any_feasible = false;
    sptrade::run_experiment(cfg, [&](const sptrade::SweepRow& row) {
      if (row.feasible_drop_fraction > 0.0) any_feasible = true;
      out << sptrade::csv_line(row) << "\n";
      out.flush();
    });
    std::printf("wrote %s\n", cfg.out_path.c_str());
    return any_feasible ? kExitOk : kExitInfeasible;
  } catch (const sptrade::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const sptrade::ScenarioError& e) {
    std::fprintf(stderr, "config error (%s): %s\n", e.field.c_str(), e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "solver failure: %s\n", e.what());
    return kExitSolverFailure;
  }
}
