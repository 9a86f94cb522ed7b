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

#include "sptrade/linkmath.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace sptrade {

namespace {
constexpr double kLn2 = 0.6931471805599453;
constexpr double kSlackTolRel = 1e-9;
}  // namespace

int best_su_for_mu(const Scenario& s, int k) {
  const auto& row = s.g_cross_gain.at(static_cast<std::size_t>(k));
  int best = 0;
  for (int n = 1; n < static_cast<int>(row.size()); ++n) {
    if (row[static_cast<std::size_t>(n)] > row[static_cast<std::size_t>(best)]) best = n;
  }
  return best;
}

Allocation make_empty_allocation(const Scenario& s) {
  Allocation a;
  a.w_mu_hz.assign(static_cast<std::size_t>(s.mu_count), 0.0);
  a.q_mu_w.assign(static_cast<std::size_t>(s.mu_count), 0.0);
  a.b_sh_hz.assign(static_cast<std::size_t>(s.mu_count), 0.0);
  a.p_sh_w.assign(static_cast<std::size_t>(s.mu_count), 0.0);
  a.p_su_w.assign(static_cast<std::size_t>(s.su_count), 0.0);
  a.su_of_mu.resize(static_cast<std::size_t>(s.mu_count));
  for (int k = 0; k < s.mu_count; ++k) {
    a.su_of_mu[static_cast<std::size_t>(k)] = best_su_for_mu(s, k);
  }
  return a;
}

bool is_selected(const Allocation& a, int k) {
  return std::find(a.selected.begin(), a.selected.end(), k) !=
         a.selected.end();
}

std::vector<std::string> validate_allocation(const Scenario& s,
                                             const Allocation& a) {
  std::vector<std::string> errs;
  const auto k = static_cast<std::size_t>(s.mu_count);
  const auto n = static_cast<std::size_t>(s.su_count);
  if (a.w_mu_hz.size() != k || a.q_mu_w.size() != k || a.b_sh_hz.size() != k ||
      a.p_sh_w.size() != k || a.su_of_mu.size() != k || a.p_su_w.size() != n) {
    errs.push_back("allocation arrays sized inconsistently with the scenario");
    return errs;
  }
  for (int mu : a.selected) {
    if (mu < 0 || mu >= s.mu_count) {
      errs.push_back("selected MU index out of range");
      return errs;
    }
  }
  {
    std::vector<int> sorted = a.selected;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      errs.push_back("duplicate MU in the selected set");
      return errs;
    }
  }
  for (int kk = 0; kk < s.mu_count; ++kk) {
    const auto i = static_cast<std::size_t>(kk);
    const double w = s.w_mc_hz[i];
    if (is_selected(a, kk)) {
      if (!(a.w_mu_hz[i] > 0.0) || a.w_mu_hz[i] > w * (1.0 + 1e-12)) {
        errs.push_back("w_mu out of (0, W_MC] for selected MU " +
                       std::to_string(kk));
      }
      const double c2 = a.b_sh_hz[i] + a.w_mu_hz[i] - w;
      if (std::abs(c2) > 1e-9 * w) {
        errs.push_back("C2 not tight for selected MU " + std::to_string(kk));
      }
    } else {
      if (a.w_mu_hz[i] != 0.0 || a.q_mu_w[i] != 0.0 || a.b_sh_hz[i] != 0.0 ||
          a.p_sh_w[i] != 0.0) {
        errs.push_back("nonzero resources for unselected MU " +
                       std::to_string(kk));
      }
    }
    if (a.b_sh_hz[i] < 0.0 || a.w_mu_hz[i] < 0.0) {
      errs.push_back("negative bandwidth for MU " + std::to_string(kk));
    }
    if (a.q_mu_w[i] < 0.0 || a.p_sh_w[i] < 0.0) {
      errs.push_back("negative power for MU " + std::to_string(kk));
    }
    if (a.b_sh_hz[i] == 0.0 && a.p_sh_w[i] > 0.0) {
      errs.push_back("positive shared power on zero bandwidth for MU " +
                     std::to_string(kk));
    }
    if (a.su_of_mu[i] != best_su_for_mu(s, kk)) {
      errs.push_back("su_of_mu is not the argmax pairing for MU " +
                     std::to_string(kk));
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (a.p_su_w[i] < 0.0) {
      errs.push_back("negative power for SU " + std::to_string(i));
    }
  }
  return errs;
}

double rate(double bandwidth_hz, double power_w, double gain, double n0_w_hz) {
  if (bandwidth_hz <= 0.0) return 0.0;
  if (power_w <= 0.0) return 0.0;
  const double snr = power_w * gain / (bandwidth_hz * n0_w_hz);
  return bandwidth_hz * std::log2(1.0 + snr);
}

double mu_power_for_rate(double w_hz, double rate_bps, double h_gain,
                         double n0_w_hz) {
  if (rate_bps <= 0.0) return 0.0;
  if (!(w_hz > 0.0)) return std::numeric_limits<double>::infinity();
  const double exponent = rate_bps / w_hz;
  if (exponent > 60.0) return std::numeric_limits<double>::infinity();
  return std::expm1(exponent * kLn2) * w_hz * n0_w_hz / h_gain;
}

EeBreakdown evaluate(const Scenario& s, const Allocation& a) {
  const auto errs = validate_allocation(s, a);
  if (!errs.empty()) {
    throw std::invalid_argument("evaluate: invalid allocation: " +
                                errs.front());
  }
  EeBreakdown out;
  out.su_rates_bps.assign(static_cast<std::size_t>(s.su_count), 0.0);
  out.mu_rates_bps.assign(static_cast<std::size_t>(s.mu_count), 0.0);

  double transmit = 0.0;
  for (int n = 0; n < s.su_count; ++n) {
    const auto i = static_cast<std::size_t>(n);
    const double r = rate(s.b_sc_hz[i], a.p_su_w[i], s.g_gain[i], s.n0_w_hz);
    out.su_rates_bps[i] += r;
    out.r_total_bps += r;
    transmit += a.p_su_w[i];
  }
  for (int mu : a.selected) {
    const auto i = static_cast<std::size_t>(mu);
    const int su = a.su_of_mu[i];
    const double r = rate(a.b_sh_hz[i], a.p_sh_w[i],
                          s.g_cross_gain[i][static_cast<std::size_t>(su)],
                          s.n0_w_hz);
    out.su_rates_bps[static_cast<std::size_t>(su)] += r;
    out.r_total_bps += r;
    out.mu_rates_bps[i] =
        rate(a.w_mu_hz[i], a.q_mu_w[i], s.h_gain[i], s.n0_w_hz);
    transmit += a.p_sh_w[i] + a.q_mu_w[i];
  }
  out.p_total_w = transmit / s.xi + s.p_c_w;
  out.ee_bits_per_joule = out.r_total_bps / out.p_total_w;
  return out;
}

const ConstraintStatus* FeasibilityReport::find(const std::string& name) const {
  for (const auto& c : constraints) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

FeasibilityReport check_feasibility(const Scenario& s, const Allocation& a,
                                    const ConstraintToggles& toggles) {
  FeasibilityReport rep;
  auto push = [&rep](ConstraintStatus st) {
    if (st.enforced && !st.satisfied) rep.feasible = false;
    rep.constraints.push_back(std::move(st));
  };

  double transmit = 0.0;
  for (double p : a.p_su_w) transmit += p;
  for (int mu : a.selected) {
    const auto i = static_cast<std::size_t>(mu);
    transmit += a.p_sh_w[i] + a.q_mu_w[i];
  }
  {
    ConstraintStatus c1{"C1", toggles.enforce_c1, s.p_max_w - transmit, true};
    c1.satisfied = c1.slack >= -kSlackTolRel * std::max(1.0, s.p_max_w);
    push(c1);
  }
  for (int mu : a.selected) {
    const auto i = static_cast<std::size_t>(mu);
    const double resid = a.b_sh_hz[i] + a.w_mu_hz[i] - s.w_mc_hz[i];
    ConstraintStatus c2{"C2[" + std::to_string(mu) + "]", true, resid, true};
    c2.satisfied = std::abs(resid) <= kSlackTolRel * s.w_mc_hz[i];
    push(c2);
  }
  for (int mu : a.selected) {
    const auto i = static_cast<std::size_t>(mu);
    const double served =
        rate(a.w_mu_hz[i], a.q_mu_w[i], s.h_gain[i], s.n0_w_hz);
    const double resid = served - s.r_mc_bps[i];
    ConstraintStatus c3{"C3[" + std::to_string(mu) + "]", true, resid, true};
    c3.satisfied = resid >= -kSlackTolRel * s.r_mc_bps[i];
    push(c3);
  }
  {
    double r_total = 0.0;
    for (int n = 0; n < s.su_count; ++n) {
      const auto i = static_cast<std::size_t>(n);
      r_total += rate(s.b_sc_hz[i], a.p_su_w[i], s.g_gain[i], s.n0_w_hz);
    }
    for (int mu : a.selected) {
      const auto i = static_cast<std::size_t>(mu);
      r_total += rate(a.b_sh_hz[i], a.p_sh_w[i],
                      s.g_cross_gain[i][static_cast<std::size_t>(a.su_of_mu[i])],
                      s.n0_w_hz);
    }
    ConstraintStatus c4{"C4", toggles.enforce_c4, r_total - s.r_sc_min_bps,
                        true};
    c4.satisfied = c4.slack >= -kSlackTolRel * std::max(1.0, s.r_sc_min_bps);
    push(c4);
  }
  {
    double min_bw = 0.0;
    for (int kk = 0; kk < s.mu_count; ++kk) {
      const auto i = static_cast<std::size_t>(kk);
      min_bw = std::min({min_bw, a.b_sh_hz[i], a.w_mu_hz[i]});
    }
    push({"C6", true, min_bw, min_bw >= 0.0});
  }
  {
    double min_p = 0.0;
    for (double p : a.p_su_w) min_p = std::min(min_p, p);
    for (int kk = 0; kk < s.mu_count; ++kk) {
      const auto i = static_cast<std::size_t>(kk);
      min_p = std::min({min_p, a.q_mu_w[i], a.p_sh_w[i]});
    }
    push({"C7", true, min_p, min_p >= 0.0});
  }
  return rep;
}

}  // namespace sptrade
