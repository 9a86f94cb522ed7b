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

#include "sptrade/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace sptrade {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

double dbm_to_w(double dbm) { return std::pow(10.0, dbm / 10.0) * 1e-3; }
double w_to_dbm(double w) { return 10.0 * std::log10(w * 1e3); }

std::vector<std::string> validate(const Scenario& s) {
  std::vector<std::string> errs;
  auto bad = [&errs](const std::string& field, const std::string& why) {
    errs.push_back(field + ": " + why);
  };
  if (s.mu_count < 0) bad("mu_count", "must be >= 0");
  if (s.su_count < 1) bad("su_count", "must be >= 1");
  if (!(s.xi > 0.0) || s.xi > 1.0) bad("xi", "must lie in (0, 1]");
  if (!(s.p_max_w > 0.0)) bad("p_max_w", "must be > 0");
  if (!(s.p_c_w > 0.0)) bad("p_c_w", "must be > 0");
  if (!(s.n0_w_hz > 0.0)) bad("n0_w_hz", "must be > 0");
  if (!(s.r_sc_min_bps >= 0.0)) bad("r_sc_min_bps", "must be >= 0");

  const auto k = static_cast<std::size_t>(std::max(s.mu_count, 0));
  const auto n = static_cast<std::size_t>(std::max(s.su_count, 0));
  if (s.w_mc_hz.size() != k) bad("w_mc_hz", "needs one entry per MU");
  if (s.r_mc_bps.size() != k) bad("r_mc_bps", "needs one entry per MU");
  if (s.h_gain.size() != k) bad("h_gain", "needs one entry per MU");
  if (s.b_sc_hz.size() != n) bad("b_sc_hz", "needs one entry per SU");
  if (s.g_gain.size() != n) bad("g_gain", "needs one entry per SU");
  if (s.g_cross_gain.size() != k) {
    bad("g_cross_gain", "needs one row per MU");
  } else {
    for (std::size_t i = 0; i < k; ++i) {
      if (s.g_cross_gain[i].size() != n) {
        bad("g_cross_gain", "row " + std::to_string(i) +
                                " needs one entry per SU");
      }
    }
  }
  auto positive = [&bad](const std::vector<double>& v, const char* field) {
    for (double x : v) {
      if (!(x > 0.0) || !std::isfinite(x)) {
        bad(field, "entries must be finite and > 0");
        return;
      }
    }
  };
  positive(s.w_mc_hz, "w_mc_hz");
  positive(s.b_sc_hz, "b_sc_hz");
  positive(s.r_mc_bps, "r_mc_bps");
  positive(s.h_gain, "h_gain");
  positive(s.g_gain, "g_gain");
  for (const auto& row : s.g_cross_gain) positive(row, "g_cross_gain");
  return errs;
}

double Rng::uniform01() { return (next_u64() >> 11) * 0x1.0p-53; }

double Rng::normal() {
  const double u1 = uniform01();
  const double u2 = uniform01();
  return std::sqrt(-2.0 * std::log1p(-u1)) * std::cos(2.0 * kPi * u2);
}

double Rng::exp1() { return -std::log1p(-uniform01()); }

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::uint64_t drop_seed(std::uint64_t master_seed, std::uint64_t drop_index) {
  return splitmix64(master_seed + (drop_index + 1) * 0x9E3779B97F4A7C15ull);
}

double pathloss_db(double d_m, const ChannelParams& p) {
  if (!(d_m > 0.0)) {
    throw std::domain_error("pathloss_db: distance must be > 0");
  }
  return p.pathloss_a_db + p.pathloss_b_db_decade * std::log10(d_m / 1000.0);
}

double draw_channel_gain(double d_m, const ChannelParams& p, Rng& rng) {
  double loss_db = pathloss_db(d_m, p) + p.penetration_loss_db;
  if (p.shadowing_sigma_db > 0.0) {
    loss_db += p.shadowing_sigma_db * rng.normal();
  } else {
    rng.normal();  // keep the stream layout independent of sigma
  }
  double gain = std::pow(10.0, -loss_db / 10.0);
  if (p.rayleigh_fading) gain *= rng.exp1();
  return gain;
}

Scenario generate_drop(const DropGeometry& geom, const ChannelParams& params,
                       const DropDefaults& table, std::uint64_t seed) {
  if (!(geom.mu_dist_min_m < geom.mu_dist_max_m) || !(geom.mu_dist_min_m > 0.0) ||
      !(geom.sc_radius_m > 0.0) || !(geom.mc_sc_distance_m > 0.0)) {
    throw std::invalid_argument("generate_drop: bad drop geometry");
  }
  if (params.shadowing_sigma_db < 0.0 || params.penetration_loss_db < 0.0 ||
      params.pathloss_a_db < 0.0 || params.pathloss_b_db_decade < 0.0) {
    throw std::invalid_argument("generate_drop: bad channel parameters");
  }
  Rng rng(splitmix64(seed));
  Scenario s;
  s.mu_count = table.mu_count;
  s.su_count = table.su_count;
  s.p_max_w = table.p_max_w;
  s.p_c_w = table.p_c_w;
  s.xi = table.xi;
  s.n0_w_hz = table.n0_w_hz;
  s.r_sc_min_bps = table.r_sc_min_bps;
  s.w_mc_hz.assign(s.mu_count, table.w_mc_hz);
  s.r_mc_bps.assign(s.mu_count, table.r_mc_bps);
  s.b_sc_hz.assign(s.su_count, table.b_sc_hz);

  // Fixed draw order: MU distances, SU distances, h, g, then g_cross rows.
  std::vector<double> mu_dist(s.mu_count);
  for (int k = 0; k < s.mu_count; ++k) {
    if (geom.mu_sc_distance_m > 0.0) {
      mu_dist[k] = geom.mu_sc_distance_m;
    } else {
      mu_dist[k] = geom.mu_dist_min_m +
                   (geom.mu_dist_max_m - geom.mu_dist_min_m) * rng.uniform01();
    }
  }
  std::vector<double> su_dist(s.su_count);
  for (int n = 0; n < s.su_count; ++n) {
    // Uniform over the disc area; keep users off the exact BS location.
    su_dist[n] = std::max(geom.sc_radius_m * std::sqrt(rng.uniform01()), 0.1);
  }

  s.h_gain.resize(s.mu_count);
  for (int k = 0; k < s.mu_count; ++k) {
    s.h_gain[k] = draw_channel_gain(mu_dist[k], params, rng);
  }
  s.g_gain.resize(s.su_count);
  for (int n = 0; n < s.su_count; ++n) {
    s.g_gain[n] = draw_channel_gain(su_dist[n], params, rng);
  }
  s.g_cross_gain.assign(s.mu_count, std::vector<double>(s.su_count));
  for (int k = 0; k < s.mu_count; ++k) {
    for (int n = 0; n < s.su_count; ++n) {
      s.g_cross_gain[k][n] = draw_channel_gain(su_dist[n], params, rng);
    }
  }
  return s;
}

namespace {

struct KvFile {
  std::map<std::string, std::vector<double>> values;

  static KvFile parse(const std::string& text) {
    KvFile kv;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      std::istringstream ls(line);
      std::string key;
      if (!(ls >> key)) continue;
      std::vector<double> vals;
      std::string tok;
      while (ls >> tok) {
        try {
          std::size_t pos = 0;
          const double v = std::stod(tok, &pos);
          if (pos != tok.size()) throw std::invalid_argument(tok);
          vals.push_back(v);
        } catch (const std::exception&) {
          throw ScenarioError(key, "line " + std::to_string(lineno) +
                                       ": bad numeric value '" + tok + "'");
        }
      }
      kv.values[key] = std::move(vals);
    }
    return kv;
  }

  bool has(const std::string& key) const { return values.count(key) > 0; }

  double scalar(const std::string& key) const {
    const auto it = values.find(key);
    if (it == values.end() || it->second.size() != 1) {
      throw ScenarioError(key, "expected exactly one value for '" + key + "'");
    }
    return it->second[0];
  }

  std::vector<double> vec(const std::string& key, std::size_t count) const {
    const auto it = values.find(key);
    if (it == values.end()) {
      throw ScenarioError(key, "missing key '" + key + "'");
    }
    if (it->second.size() == 1 && count > 1) {
      return std::vector<double>(count, it->second[0]);  // broadcast scalar
    }
    if (it->second.size() != count) {
      throw ScenarioError(key, "'" + key + "' expects " +
                                   std::to_string(count) + " values");
    }
    return it->second;
  }
};

double read_with_unit(const KvFile& kv, const std::string& base,
                      const std::string& si_suffix,
                      const std::string& alt_suffix, double alt_factor,
                      bool alt_is_dbm = false) {
  const std::string si_key = base + si_suffix;
  const std::string alt_key = base + alt_suffix;
  if (kv.has(si_key)) return kv.scalar(si_key);
  if (kv.has(alt_key)) {
    const double v = kv.scalar(alt_key);
    return alt_is_dbm ? dbm_to_w(v) : v * alt_factor;
  }
  throw ScenarioError(si_key, "missing key '" + si_key + "' (or '" +
                                  alt_key + "')");
}

std::vector<double> read_vec_with_unit(const KvFile& kv,
                                       const std::string& base,
                                       const std::string& si_suffix,
                                       const std::string& alt_suffix,
                                       double alt_factor, std::size_t count) {
  const std::string si_key = base + si_suffix;
  const std::string alt_key = base + alt_suffix;
  if (kv.has(si_key)) return kv.vec(si_key, count);
  if (kv.has(alt_key)) {
    auto v = kv.vec(alt_key, count);
    for (double& x : v) x *= alt_factor;
    return v;
  }
  throw ScenarioError(si_key, "missing key '" + si_key + "' (or '" +
                                  alt_key + "')");
}

}  // namespace

Scenario scenario_from_string(const std::string& text) {
  const KvFile kv = KvFile::parse(text);
  Scenario s;
  s.mu_count = static_cast<int>(kv.scalar("mu_count"));
  s.su_count = static_cast<int>(kv.scalar("su_count"));
  if (s.mu_count < 0) throw ScenarioError("mu_count", "mu_count: must be >= 0");
  if (s.su_count < 1) throw ScenarioError("su_count", "su_count: must be >= 1");
  const auto k = static_cast<std::size_t>(s.mu_count);
  const auto n = static_cast<std::size_t>(s.su_count);

  s.p_max_w = read_with_unit(kv, "p_max", "_w", "_dbm", 1.0, true);
  s.p_c_w = kv.scalar("p_c_w");
  s.xi = kv.scalar("xi");
  if (kv.has("n0_w_hz")) {
    s.n0_w_hz = kv.scalar("n0_w_hz");
  } else if (kv.has("n0_dbm_hz")) {
    s.n0_w_hz = dbm_to_w(kv.scalar("n0_dbm_hz"));
  } else {
    throw ScenarioError("n0_w_hz", "missing key 'n0_w_hz' (or 'n0_dbm_hz')");
  }
  s.r_sc_min_bps =
      read_with_unit(kv, "r_sc_min", "_bps", "_kbps", 1e3);
  s.w_mc_hz = read_vec_with_unit(kv, "w_mc", "_hz", "_khz", 1e3, k);
  s.r_mc_bps = read_vec_with_unit(kv, "r_mc", "_bps", "_kbps", 1e3, k);
  s.b_sc_hz = read_vec_with_unit(kv, "b_sc", "_hz", "_khz", 1e3, n);
  s.h_gain = kv.vec("h_gain", k);
  s.g_gain = kv.vec("g_gain", n);
  s.g_cross_gain.resize(k);
  for (std::size_t i = 0; i < k; ++i) {
    s.g_cross_gain[i] = kv.vec("g_cross_gain_" + std::to_string(i), n);
  }

  const auto errs = validate(s);
  if (!errs.empty()) {
    const auto colon = errs.front().find(':');
    throw ScenarioError(errs.front().substr(0, colon), errs.front());
  }
  return s;
}

std::string scenario_to_string(const Scenario& s) {
  std::ostringstream out;
  out << "# sptrade scenario (SI linear units)\n";
  out << "mu_count " << s.mu_count << "\n";
  out << "su_count " << s.su_count << "\n";
  out << "p_max_w " << fmt_double(s.p_max_w) << "\n";
  out << "p_c_w " << fmt_double(s.p_c_w) << "\n";
  out << "xi " << fmt_double(s.xi) << "\n";
  out << "n0_w_hz " << fmt_double(s.n0_w_hz) << "\n";
  out << "r_sc_min_bps " << fmt_double(s.r_sc_min_bps) << "\n";
  auto row = [&out](const std::string& key, const std::vector<double>& v) {
    out << key;
    for (double x : v) out << " " << fmt_double(x);
    out << "\n";
  };
  row("w_mc_hz", s.w_mc_hz);
  row("r_mc_bps", s.r_mc_bps);
  row("b_sc_hz", s.b_sc_hz);
  row("h_gain", s.h_gain);
  row("g_gain", s.g_gain);
  for (std::size_t i = 0; i < s.g_cross_gain.size(); ++i) {
    row("g_cross_gain_" + std::to_string(i), s.g_cross_gain[i]);
  }
  return out.str();
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ScenarioError("file", "cannot open scenario file: " + path);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return scenario_from_string(buf.str());
}

void save_scenario(const Scenario& s, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw ScenarioError("file", "cannot write scenario file: " + path);
  }
  out << scenario_to_string(s);
  if (!out) {
    throw ScenarioError("file", "write failed: " + path);
  }
}

}  // namespace sptrade
