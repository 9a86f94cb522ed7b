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

#include "sptrade/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace sptrade {

namespace {

std::string fmt10(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

struct StringKv {
  std::map<std::string, std::vector<std::string>> values;

  static StringKv parse(const std::string& text) {
    StringKv kv;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      std::istringstream ls(line);
      std::string key;
      if (!(ls >> key)) continue;
      std::vector<std::string> toks;
      std::string tok;
      while (ls >> tok) toks.push_back(tok);
      kv.values[key] = std::move(toks);
    }
    return kv;
  }

  bool has(const std::string& key) const { return values.count(key) > 0; }

  std::string str(const std::string& key) const {
    const auto it = values.find(key);
    if (it == values.end() || it->second.size() != 1) {
      throw ConfigError("config key '" + key + "' expects one value");
    }
    return it->second[0];
  }

  double num(const std::string& key) const {
    const std::string v = str(key);
    try {
      std::size_t pos = 0;
      const double x = std::stod(v, &pos);
      if (pos != v.size()) throw std::invalid_argument(v);
      return x;
    } catch (const std::exception&) {
      throw ConfigError("config key '" + key + "': bad number '" + v + "'");
    }
  }

  std::vector<double> nums(const std::string& key) const {
    const auto it = values.find(key);
    if (it == values.end()) throw ConfigError("missing config key '" + key + "'");
    std::vector<double> out;
    for (const auto& v : it->second) {
      try {
        std::size_t pos = 0;
        out.push_back(std::stod(v, &pos));
        if (pos != v.size()) throw std::invalid_argument(v);
      } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': bad number '" + v + "'");
      }
    }
    return out;
  }
};

void validate_config(const ExperimentConfig& cfg) {
  if (cfg.drops < 1) throw ConfigError("drops must be >= 1");
  if (cfg.sweep_values.empty()) throw ConfigError("sweep_values must be nonempty");
  if (!std::is_sorted(cfg.sweep_values.begin(), cfg.sweep_values.end())) {
    throw ConfigError("sweep_values must be sorted ascending");
  }
  if (cfg.schemes.empty()) throw ConfigError("schemes must be nonempty");
}

}  // namespace

std::string experiment_name(Experiment e) {
  switch (e) {
    case Experiment::kEeVsPmax: return "ee-vs-pmax";
    case Experiment::kEeVsPc: return "ee-vs-pc";
    case Experiment::kEeAndSavingVsDistance: return "ee-and-saving-vs-distance";
    case Experiment::kEeAndCountVsWmc: return "ee-and-count-vs-wmc";
    case Experiment::kSingleDrop: return "single-drop";
  }
  return "unknown";
}

Experiment experiment_from_name(const std::string& name) {
  if (name == "ee-vs-pmax") return Experiment::kEeVsPmax;
  if (name == "ee-vs-pc") return Experiment::kEeVsPc;
  if (name == "ee-and-saving-vs-distance") return Experiment::kEeAndSavingVsDistance;
  if (name == "ee-and-count-vs-wmc") return Experiment::kEeAndCountVsWmc;
  if (name == "single-drop") return Experiment::kSingleDrop;
  throw ConfigError("unknown experiment: " + name);
}

std::string sweep_column_name(Experiment e) {
  switch (e) {
    case Experiment::kEeVsPmax: return "p_max_dbm";
    case Experiment::kEeVsPc: return "p_c_w";
    case Experiment::kEeAndSavingVsDistance: return "mu_mc_distance_m";
    case Experiment::kEeAndCountVsWmc: return "w_mc_khz";
    case Experiment::kSingleDrop: return "sweep_value";
  }
  return "sweep_value";
}

void apply_override(Scenario& s, const std::string& key, double value) {
  if (key == "p_max_w") { s.p_max_w = value; return; }
  if (key == "p_max_dbm") { s.p_max_w = dbm_to_w(value); return; }
  if (key == "p_c_w") { s.p_c_w = value; return; }
  if (key == "xi") { s.xi = value; return; }
  if (key == "n0_w_hz") { s.n0_w_hz = value; return; }
  if (key == "n0_dbm_hz") { s.n0_w_hz = dbm_to_w(value); return; }
  if (key == "r_sc_min_bps") { s.r_sc_min_bps = value; return; }
  if (key == "r_sc_min_kbps") { s.r_sc_min_bps = value * 1e3; return; }
  if (key == "w_mc_hz") { std::fill(s.w_mc_hz.begin(), s.w_mc_hz.end(), value); return; }
  if (key == "w_mc_khz") { std::fill(s.w_mc_hz.begin(), s.w_mc_hz.end(), value * 1e3); return; }
  if (key == "b_sc_hz") { std::fill(s.b_sc_hz.begin(), s.b_sc_hz.end(), value); return; }
  if (key == "b_sc_khz") { std::fill(s.b_sc_hz.begin(), s.b_sc_hz.end(), value * 1e3); return; }
  if (key == "r_mc_bps") { std::fill(s.r_mc_bps.begin(), s.r_mc_bps.end(), value); return; }
  if (key == "r_mc_kbps") { std::fill(s.r_mc_bps.begin(), s.r_mc_bps.end(), value * 1e3); return; }
  throw ConfigError("unknown scenario override key: " + key);
}

double mc_power_saved(const std::vector<double>& mu_mc_distances_m,
                      double r_mc_bps, double w_mc_hz, double n0_w_hz,
                      const ChannelParams& params, Rng& rng) {
  double total = 0.0;
  for (double d : mu_mc_distances_m) {
    if (!(d > 0.0)) throw std::domain_error("mc_power_saved: distance <= 0");
    const double gain = draw_channel_gain(d, params, rng);
    total += mu_power_for_rate(w_mc_hz, r_mc_bps, gain, n0_w_hz);
  }
  return total;
}

std::vector<SweepRow> run_experiment(
    const ExperimentConfig& cfg,
    const std::function<void(const SweepRow&)>& on_row) {
  validate_config(cfg);

  std::vector<SweepRow> rows;
  for (double value : cfg.sweep_values) {
    DropGeometry geom = cfg.geometry;
    if (cfg.experiment == Experiment::kEeAndSavingVsDistance) {
      // MUs sit on the MC-SC axis: distance v from the MC BS puts them at
      // |mc_sc_distance - v| from the SC BS, identical for every MU.
      geom.mu_sc_distance_m =
          std::max(std::abs(geom.mc_sc_distance_m - value), 1.0);
    }

    struct Accum {
      int feasible = 0;
      double ee = 0.0, rate = 0.0, selected = 0.0, saved = 0.0;
    };
    std::vector<Accum> acc(cfg.schemes.size());

    for (int d = 0; d < cfg.drops; ++d) {
      const std::uint64_t seed_d = drop_seed(cfg.seed, static_cast<std::uint64_t>(d));
      Scenario s = generate_drop(geom, cfg.channel, cfg.defaults, seed_d);
      switch (cfg.experiment) {
        case Experiment::kEeVsPmax: apply_override(s, "p_max_dbm", value); break;
        case Experiment::kEeVsPc: apply_override(s, "p_c_w", value); break;
        case Experiment::kEeAndCountVsWmc: apply_override(s, "w_mc_khz", value); break;
        case Experiment::kEeAndSavingVsDistance:
        case Experiment::kSingleDrop: break;
      }
      for (const auto& [key, v] : cfg.overrides) apply_override(s, key, v);

      for (std::size_t si = 0; si < cfg.schemes.size(); ++si) {
        const SelectionResult sel = run_scheme(s, cfg.schemes[si], cfg.solve_options);
        if (sel.final.status != SolveStatus::kOptimal) continue;
        Accum& a = acc[si];
        a.feasible += 1;
        a.ee += sel.final.breakdown.ee_bits_per_joule;
        a.rate += sel.final.breakdown.r_total_bps;
        a.selected += static_cast<double>(sel.chosen.size());
        if (cfg.experiment == Experiment::kEeAndSavingVsDistance &&
            !sel.chosen.empty()) {
          // Dedicated MC-link substream per drop, independent of the
          // scenario draws and of the scheme order. One draw per MU in
          // index order so every scheme sees the same MC channels; sum
          // over the MUs this scheme actually serves.
          Rng mc_rng(drop_seed(seed_d, 0x4D43u));
          std::vector<double> per_mu(static_cast<std::size_t>(s.mu_count));
          for (int k = 0; k < s.mu_count; ++k) {
            const double gain = draw_channel_gain(value, cfg.channel, mc_rng);
            per_mu[static_cast<std::size_t>(k)] = mu_power_for_rate(
                s.w_mc_hz[static_cast<std::size_t>(k)],
                s.r_mc_bps[static_cast<std::size_t>(k)], gain, s.n0_w_hz);
          }
          for (int k : sel.chosen) a.saved += per_mu[static_cast<std::size_t>(k)];
        }
      }
    }

    for (std::size_t si = 0; si < cfg.schemes.size(); ++si) {
      const Accum& a = acc[si];
      SweepRow row;
      row.sweep_value = value;
      row.scheme = cfg.schemes[si];
      const double n = std::max(a.feasible, 1);
      row.mean_ee_bits_per_joule = a.ee / n;
      row.mean_rate_bps = a.rate / n;
      row.mean_selected_mus = a.selected / n;
      row.feasible_drop_fraction =
          static_cast<double>(a.feasible) / static_cast<double>(cfg.drops);
      row.mean_mc_power_saved_w = a.saved / n;
      rows.push_back(row);
      if (on_row) on_row(row);
    }
  }
  return rows;
}

std::string csv_header(Experiment e) {
  std::ostringstream out;
  out << sweep_column_name(e)
      << ",scheme,mean_ee_bits_per_joule,mean_rate_bps,mean_selected_mus,"
         "feasible_drop_fraction,mean_mc_power_saved_w";
  return out.str();
}

std::string csv_line(const SweepRow& row) {
  std::ostringstream out;
  out << fmt10(row.sweep_value) << "," << scheme_name(row.scheme) << ","
      << fmt10(row.mean_ee_bits_per_joule) << "," << fmt10(row.mean_rate_bps)
      << "," << fmt10(row.mean_selected_mus) << ","
      << fmt10(row.feasible_drop_fraction) << ","
      << fmt10(row.mean_mc_power_saved_w);
  return out.str();
}

void write_csv(const std::vector<SweepRow>& rows, Experiment e,
               const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write CSV: " + path);
  out << csv_header(e) << "\n";
  for (const auto& row : rows) out << csv_line(row) << "\n";
  if (!out) throw ConfigError("CSV write failed: " + path);
}

ExperimentConfig experiment_config_from_string(const std::string& text) {
  const StringKv kv = StringKv::parse(text);
  ExperimentConfig cfg;
  if (kv.has("experiment")) cfg.experiment = experiment_from_name(kv.str("experiment"));
  if (kv.has("sweep_values")) cfg.sweep_values = kv.nums("sweep_values");
  if (kv.has("drops")) cfg.drops = static_cast<int>(kv.num("drops"));
  if (kv.has("seed")) cfg.seed = static_cast<std::uint64_t>(kv.num("seed"));
  if (kv.has("schemes")) {
    cfg.schemes.clear();
    for (const auto& name : kv.values.at("schemes")) {
      try {
        cfg.schemes.push_back(scheme_from_name(name));
      } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
      }
    }
  }
  if (kv.has("out")) cfg.out_path = kv.str("out");

  if (kv.has("sc_radius_m")) cfg.geometry.sc_radius_m = kv.num("sc_radius_m");
  if (kv.has("mu_dist_min_m")) cfg.geometry.mu_dist_min_m = kv.num("mu_dist_min_m");
  if (kv.has("mu_dist_max_m")) cfg.geometry.mu_dist_max_m = kv.num("mu_dist_max_m");
  if (kv.has("mc_sc_distance_m")) cfg.geometry.mc_sc_distance_m = kv.num("mc_sc_distance_m");
  if (kv.has("mu_sc_distance_m")) cfg.geometry.mu_sc_distance_m = kv.num("mu_sc_distance_m");

  if (kv.has("pathloss_a_db")) cfg.channel.pathloss_a_db = kv.num("pathloss_a_db");
  if (kv.has("pathloss_b_db_decade")) cfg.channel.pathloss_b_db_decade = kv.num("pathloss_b_db_decade");
  if (kv.has("shadowing_sigma_db")) cfg.channel.shadowing_sigma_db = kv.num("shadowing_sigma_db");
  if (kv.has("penetration_loss_db")) cfg.channel.penetration_loss_db = kv.num("penetration_loss_db");
  if (kv.has("rayleigh_fading")) cfg.channel.rayleigh_fading = kv.num("rayleigh_fading") != 0.0;

  if (kv.has("mu_count")) cfg.defaults.mu_count = static_cast<int>(kv.num("mu_count"));
  if (kv.has("su_count")) cfg.defaults.su_count = static_cast<int>(kv.num("su_count"));
  if (kv.has("enforce_c1")) cfg.solve_options.enforce_c1 = kv.num("enforce_c1") != 0.0;
  if (kv.has("enforce_c4")) cfg.solve_options.enforce_c4 = kv.num("enforce_c4") != 0.0;
  if (kv.has("dinkelbach_eps")) cfg.solve_options.dinkelbach_eps = kv.num("dinkelbach_eps");

  static const char* kOverrideKeys[] = {
      "p_max_w",  "p_max_dbm",  "p_c_w",      "xi",       "n0_w_hz",
      "n0_dbm_hz", "r_sc_min_bps", "r_sc_min_kbps", "w_mc_hz", "w_mc_khz",
      "b_sc_hz",  "b_sc_khz",   "r_mc_bps",   "r_mc_kbps"};
  for (const char* key : kOverrideKeys) {
    if (kv.has(key)) cfg.overrides[key] = kv.num(key);
  }

  validate_config(cfg);
  return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return experiment_config_from_string(buf.str());
}

}  // namespace sptrade
