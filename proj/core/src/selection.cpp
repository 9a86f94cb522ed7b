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

#include "sptrade/selection.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "sptrade/numerics.hpp"

namespace sptrade {

namespace {

constexpr double kLn2 = 0.6931471805599453;
constexpr double kImproveRel = 1e-9;  // strict-improvement guard band

double trade_ee_value(double w, double p, double w_max, double r_req,
                      double h, double g, double n0, double xi) {
  const double b = w_max - w;
  const double q_mu = mu_power_for_rate(w, r_req, h, n0);
  if (!std::isfinite(q_mu)) return 0.0;
  const double denom = (p + q_mu) / xi;
  if (!(denom > 0.0)) return 0.0;
  return rate(b, p, g, n0) / denom;
}

// Stationary shared-band power for a fixed kept bandwidth: the root of
// r'(p) (p + q_mu) - r(p), which is strictly decreasing and positive at 0.
double best_power_given_w(double w, double w_max, double q_mu, double g,
                          double n0) {
  const double b = w_max - w;
  if (!(b > 0.0) || !std::isfinite(q_mu)) return 0.0;
  auto phi = [&](double p) {
    const double rp = b * g / ((b * n0 + p * g) * kLn2);
    return rp * (p + q_mu) - rate(b, p, g, n0);
  };
  double hi = std::max(q_mu, 1e-9);
  int guard = 0;
  while (phi(hi) > 0.0 && guard++ < 400) hi *= 4.0;
  if (phi(hi) > 0.0) return hi;
  double lo = 0.0;
  for (int it = 0; it < 200 && hi - lo > 1e-13 * std::max(hi, 1.0); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (phi(mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

bool improves(double candidate, double incumbent) {
  return candidate > incumbent * (1.0 + kImproveRel);
}

std::vector<int> rank_by_trading_ee(const std::vector<TradingEeResult>& t) {
  std::vector<int> order(t.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&t](int a, int b) {
    return t[static_cast<std::size_t>(a)].ee > t[static_cast<std::size_t>(b)].ee;
  });
  return order;
}

}  // namespace

std::string scheme_name(Scheme s) {
  switch (s) {
    case Scheme::kSptOrder: return "spt-order";
    case Scheme::kExhaustive: return "exhaustive";
    case Scheme::kNonSpt: return "non-spt";
    case Scheme::kThroughput: return "throughput";
  }
  return "unknown";
}

Scheme scheme_from_name(const std::string& name) {
  if (name == "spt-order") return Scheme::kSptOrder;
  if (name == "exhaustive") return Scheme::kExhaustive;
  if (name == "non-spt") return Scheme::kNonSpt;
  if (name == "throughput") return Scheme::kThroughput;
  throw std::invalid_argument("unknown scheme: " + name);
}

TradingEeResult trading_ee(int k, const Scenario& s) {
  const auto i = static_cast<std::size_t>(k);
  const double w_max = s.w_mc_hz[i];
  const double r_req = s.r_mc_bps[i];
  const double h = s.h_gain[i];
  const int su = best_su_for_mu(s, k);
  const double g = s.g_cross_gain[i][static_cast<std::size_t>(su)];
  const double n0 = s.n0_w_hz;

  TradingEeResult out;
  out.mu = k;

  // Below w_lo the MU's rate floor needs an unrepresentable power, so the
  // trade is worthless there anyway.
  const double w_lo = std::min(r_req * kLn2 / 41.0, w_max * 0.999999);
  double w = 0.5 * (w_lo + w_max);
  double p = 0.0;
  double ee_prev = -1.0;

  for (int round = 1; round <= 500; ++round) {
    out.iterations = round;
    const double q_mu = mu_power_for_rate(w, r_req, h, n0);
    p = best_power_given_w(w, w_max, q_mu, g, n0);
    const auto ee_of_w = [&](double wx) {
      return trade_ee_value(wx, p, w_max, r_req, h, g, n0, s.xi);
    };
    const auto gr =
        numerics::golden_section_max(ee_of_w, w_lo, w_max, w_max * 1e-11);
    w = gr.argmax;
    const double ee = trade_ee_value(w, p, w_max, r_req, h, g, n0, s.xi);
    if (ee_prev >= 0.0 &&
        std::abs(ee - ee_prev) <= 1e-10 * std::max(ee, 1e-300)) {
      ee_prev = ee;
      break;
    }
    ee_prev = ee;
  }
  out.ee = std::max(ee_prev, 0.0);
  out.w_opt_hz = w;
  out.p_opt_w = p;
  return out;
}

SelectionResult select_spt_order(const Scenario& s, const SolveOptions& opts) {
  SelectionResult res;
  res.scheme = Scheme::kSptOrder;
  res.trading.reserve(static_cast<std::size_t>(s.mu_count));
  for (int k = 0; k < s.mu_count; ++k) res.trading.push_back(trading_ee(k, s));
  const std::vector<int> order = rank_by_trading_ee(res.trading);

  std::vector<int> psi;
  SolveResult best = solve(psi, s, opts);
  double ee_cur = best.status == SolveStatus::kOptimal
                      ? best.breakdown.ee_bits_per_joule
                      : -std::numeric_limits<double>::infinity();
  if (best.status == SolveStatus::kOptimal) res.ee_trace.push_back(ee_cur);

  for (int k : order) {
    std::vector<int> cand_set = psi;
    cand_set.push_back(k);
    SolveResult cand = solve(cand_set, s, opts);
    if (cand.status != SolveStatus::kOptimal) {
      res.infeasible_skipped.push_back(k);
      continue;
    }
    const double ee_new = cand.breakdown.ee_bits_per_joule;
    if (ee_cur < 0.0 || improves(ee_new, ee_cur)) {
      psi = std::move(cand_set);
      best = std::move(cand);
      ee_cur = ee_new;
      res.chosen.push_back(k);
      res.ee_trace.push_back(ee_cur);
    }
  }
  res.final = std::move(best);
  return res;
}

SelectionResult select_exhaustive(const Scenario& s, const SolveOptions& opts) {
  if (s.mu_count > 20) {
    throw std::invalid_argument(
        "select_exhaustive: refusing 2^K enumeration beyond K = 20");
  }
  SelectionResult res;
  res.scheme = Scheme::kExhaustive;

  SolveResult best;
  std::vector<int> best_set;
  bool have_best = false;
  const unsigned total = 1u << s.mu_count;
  // Size-major, then numerically ascending masks: lexicographic subsets.
  for (int size = 0; size <= s.mu_count; ++size) {
    for (unsigned mask = 0; mask < total; ++mask) {
      if (std::popcount(mask) != size) continue;
      std::vector<int> psi;
      for (int k = 0; k < s.mu_count; ++k) {
        if (mask & (1u << k)) psi.push_back(k);
      }
      SolveResult r = solve(psi, s, opts);
      if (r.status != SolveStatus::kOptimal) continue;
      if (!have_best || r.breakdown.ee_bits_per_joule >
                            best.breakdown.ee_bits_per_joule) {
        best = std::move(r);
        best_set = std::move(psi);
        have_best = true;
      }
    }
  }
  if (!have_best) {
    res.final = solve({}, s, opts);  // carries the infeasible status
    return res;
  }
  res.chosen = best_set;
  res.ee_trace.push_back(best.breakdown.ee_bits_per_joule);
  res.final = std::move(best);
  return res;
}

SelectionResult select_baseline(const Scenario& s, Scheme scheme,
                                const SolveOptions& opts) {
  if (scheme == Scheme::kNonSpt) {
    SelectionResult res;
    res.scheme = scheme;
    SolveOptions o = opts;
    o.objective = Objective::kEnergyEfficiency;
    res.final = solve({}, s, o);
    if (res.final.status == SolveStatus::kOptimal) {
      res.ee_trace.push_back(res.final.breakdown.ee_bits_per_joule);
    }
    return res;
  }
  if (scheme != Scheme::kThroughput) {
    throw std::invalid_argument("select_baseline: scheme must be non-spt or throughput");
  }

  // Rate-greedy mirror of the trading-EE loop: same ranking, but an MU is
  // committed when it strictly improves the total rate.
  SelectionResult res;
  res.scheme = scheme;
  SolveOptions o = opts;
  o.objective = Objective::kThroughput;
  res.trading.reserve(static_cast<std::size_t>(s.mu_count));
  for (int k = 0; k < s.mu_count; ++k) res.trading.push_back(trading_ee(k, s));
  const std::vector<int> order = rank_by_trading_ee(res.trading);

  std::vector<int> psi;
  SolveResult best = solve(psi, s, o);
  double rate_cur = best.status == SolveStatus::kOptimal
                        ? best.breakdown.r_total_bps
                        : -std::numeric_limits<double>::infinity();
  if (best.status == SolveStatus::kOptimal) {
    res.ee_trace.push_back(best.breakdown.ee_bits_per_joule);
  }
  for (int k : order) {
    std::vector<int> cand_set = psi;
    cand_set.push_back(k);
    SolveResult cand = solve(cand_set, s, o);
    if (cand.status != SolveStatus::kOptimal) {
      res.infeasible_skipped.push_back(k);
      continue;
    }
    if (rate_cur < 0.0 || improves(cand.breakdown.r_total_bps, rate_cur)) {
      psi = std::move(cand_set);
      best = std::move(cand);
      rate_cur = best.breakdown.r_total_bps;
      res.chosen.push_back(k);
      res.ee_trace.push_back(best.breakdown.ee_bits_per_joule);
    }
  }
  res.final = std::move(best);
  return res;
}

SelectionResult run_scheme(const Scenario& s, Scheme scheme,
                           const SolveOptions& opts) {
  switch (scheme) {
    case Scheme::kSptOrder: return select_spt_order(s, opts);
    case Scheme::kExhaustive: return select_exhaustive(s, opts);
    case Scheme::kNonSpt:
    case Scheme::kThroughput: return select_baseline(s, scheme, opts);
  }
  throw std::invalid_argument("run_scheme: bad scheme");
}

}  // namespace sptrade
