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

#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "sptrade/selection.hpp"

namespace sptrade {

enum class Experiment {
  kEeVsPmax,              // sweep P_max in dBm
  kEeVsPc,                // sweep circuit power in W
  kEeAndSavingVsDistance, // sweep MU-to-MC distance in m
  kEeAndCountVsWmc,       // sweep per-MU licensed bandwidth in kHz
  kSingleDrop,            // no sweep axis
};

std::string experiment_name(Experiment e);
Experiment experiment_from_name(const std::string& name);
std::string sweep_column_name(Experiment e);

struct ExperimentConfig {
  Experiment experiment = Experiment::kSingleDrop;
  std::vector<double> sweep_values = {0.0};  // nonempty, ascending
  int drops = 100;
  std::uint64_t seed = 1;
  std::vector<Scheme> schemes = {Scheme::kSptOrder, Scheme::kNonSpt};
  DropGeometry geometry;
  ChannelParams channel;
  DropDefaults defaults;
  SolveOptions solve_options;
  // Post-generation scenario overrides, keyed like scenario-file entries
  // (p_max_dbm, p_c_w, r_mc_kbps, ...). Scalars broadcast over users.
  std::map<std::string, double> overrides;
  std::string out_path;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SweepRow {
  double sweep_value = 0.0;
  Scheme scheme = Scheme::kSptOrder;
  double mean_ee_bits_per_joule = 0.0;
  double mean_rate_bps = 0.0;
  double mean_selected_mus = 0.0;
  double feasible_drop_fraction = 0.0;
  double mean_mc_power_saved_w = 0.0;  // distance experiment only
};

/// Transmit power the MC would need to serve offloaded MUs directly: one
/// channel draw per distance with the same propagation model, then the
/// power meeting the rate floor over the MU's licensed band, summed.
double mc_power_saved(const std::vector<double>& mu_mc_distances_m,
                      double r_mc_bps, double w_mc_hz, double n0_w_hz,
                      const ChannelParams& params, Rng& rng);

/// Runs the configured Monte Carlo sweep. Drop d uses the documented
/// derived seed drop_seed(cfg.seed, d); the same drops are reused at every
/// sweep value, the sweep override is applied on top, every requested
/// scheme runs, and metrics average over the feasible drops per scheme.
/// Rows arrive in (sweep value, scheme) order; `on_row`, when given, sees
/// each row as soon as it is complete. Deterministic for a fixed config.
std::vector<SweepRow> run_experiment(
    const ExperimentConfig& cfg,
    const std::function<void(const SweepRow&)>& on_row = nullptr);

std::string csv_header(Experiment e);
std::string csv_line(const SweepRow& row);

/// Header plus one line per row; floats carry 10 significant digits.
void write_csv(const std::vector<SweepRow>& rows, Experiment e,
               const std::string& path);

ExperimentConfig load_experiment_config(const std::string& path);
ExperimentConfig experiment_config_from_string(const std::string& text);

/// Applies one scenario override key (scenario-file key names) in place.
void apply_override(Scenario& s, const std::string& key, double value);

}  // namespace sptrade
