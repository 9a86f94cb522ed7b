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
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace sptrade {

// All quantities below are SI linear: Hz, W, bits/s, linear power gains.
// dB and dBm appear only at ingestion and reporting boundaries.

/// One network drop: a small cell (SC) with `su_count` own users (SUs) and
/// `mu_count` candidate macro users (MUs) available for spectrum-power
/// trading.
struct Scenario {
  int mu_count = 0;  // K
  int su_count = 0;  // N

  std::vector<double> w_mc_hz;   // per-MU licensed bandwidth, size K
  std::vector<double> b_sc_hz;   // per-SU licensed bandwidth, size N
  std::vector<double> r_mc_bps;  // per-MU minimum rate, size K
  double r_sc_min_bps = 0.0;     // SC minimum system rate
  double p_max_w = 0.0;          // SC transmit power budget
  double p_c_w = 0.0;            // static circuit power
  double xi = 1.0;               // power-amplifier efficiency, (0, 1]
  double n0_w_hz = 0.0;          // noise power spectral density

  std::vector<double> h_gain;  // SC->MU k gain on the MU's band, size K
  std::vector<double> g_gain;  // SC->SU n gain on the SU's own band, size N
  std::vector<std::vector<double>> g_cross_gain;  // [k][n]: SC->SU n on MU k's band
};

/// Returns the list of invariant violations, each naming the offending
/// field; empty when the scenario is valid.
std::vector<std::string> validate(const Scenario& s);

/// Geometry of a random drop around the SC base station.
struct DropGeometry {
  double sc_radius_m = 50.0;        // SUs uniform over this disc
  double mu_dist_min_m = 20.0;      // MUs uniform in distance within
  double mu_dist_max_m = 200.0;     //   [min, max] of the SC BS
  double mc_sc_distance_m = 500.0;  // SC BS to MC BS separation
  double mu_sc_distance_m = 0.0;    // > 0 pins every MU at this distance
};

/// Propagation model parameters (distance-dependent path loss, lognormal
/// shadowing, penetration loss, Rayleigh fading).
struct ChannelParams {
  double pathloss_a_db = 128.1;
  double pathloss_b_db_decade = 37.6;
  double shadowing_sigma_db = 8.0;
  double penetration_loss_db = 20.0;
  bool rayleigh_fading = true;
};

/// Default drop parameters applied by generate_drop.
struct DropDefaults {
  int mu_count = 5;
  int su_count = 5;
  double p_max_w = 1.0;  // 30 dBm
  double w_mc_hz = 360e3;
  double b_sc_hz = 180e3;
  double p_c_w = 2.0;
  double n0_w_hz = 3.9810717055349854e-21;  // -174 dBm/Hz
  double xi = 0.38;
  double r_sc_min_bps = 1000e3;
  double r_mc_bps = 700e3;
};

/// Deterministic random stream: mt19937_64 with fixed output transforms,
/// so that identical seeds give identical drops on every platform.
///   uniform01: (next() >> 11) * 2^-53, in [0, 1)
///   normal:    Box-Muller, sqrt(-2 ln(1-u1)) * cos(2 pi u2)
///   exp1:      -ln(1-u), unit mean
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  std::uint64_t next_u64() { return engine_(); }
  double uniform01();
  double normal();
  double exp1();

 private:
  std::mt19937_64 engine_;  // engine output is pinned by the standard
};

/// splitmix64 round; the documented (master seed, drop index) splitting
/// rule is drop_seed = splitmix64(master + (index + 1) * 0x9E3779B97F4A7C15).
std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t drop_seed(std::uint64_t master_seed, std::uint64_t drop_index);

/// Path loss in dB at distance d meters: a + b*log10(d/1000).
/// Throws std::domain_error for d <= 0.
double pathloss_db(double d_m, const ChannelParams& p);

/// One linear channel power gain at distance d: path loss plus lognormal
/// shadowing plus penetration loss, times a unit-mean exponential fading
/// draw when Rayleigh fading is enabled. Consumes exactly one normal and,
/// if fading, one exponential variate from the stream.
double draw_channel_gain(double d_m, const ChannelParams& p, Rng& rng);

/// A complete random drop: MU distances uniform in [mu_dist_min, mu_dist_max]
/// (or pinned to mu_sc_distance when set), SU positions uniform over the
/// disc of radius sc_radius, every gain drawn independently per user per
/// band. Identical seeds give identical scenarios.
Scenario generate_drop(const DropGeometry& geom, const ChannelParams& params,
                       const DropDefaults& table, std::uint64_t seed);

struct ScenarioError : std::runtime_error {
  std::string field;
  ScenarioError(std::string field_name, const std::string& msg)
      : std::runtime_error(msg), field(std::move(field_name)) {}
};

/// Reads a scenario from the key-value text format (see save_scenario).
/// Violated invariants raise ScenarioError naming the field.
Scenario load_scenario(const std::string& path);

/// Writes the scenario in a flat key-value text format with explicit units
/// in the key names. Values round-trip exactly through load_scenario.
void save_scenario(const Scenario& s, const std::string& path);

std::string scenario_to_string(const Scenario& s);
Scenario scenario_from_string(const std::string& text);

double dbm_to_w(double dbm);
double w_to_dbm(double w);

}  // namespace sptrade
