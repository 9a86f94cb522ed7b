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

#include "sptrade/allocator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "sptrade/numerics.hpp"

namespace sptrade {

namespace {

constexpr double kLn2 = 0.6931471805599453;
constexpr double kFeasTolRel = 1e-9;

// Stationarity LHS for the kept bandwidth, as a function of t = R ln2 / w:
// (N0/h) * (t e^t - (e^t - 1)). Strictly increasing in t, hence strictly
// decreasing in w, from +inf (w -> 0) down to 0 (w -> inf).
double w_stationarity_lhs(double t, double n0_over_h) {
  if (t > 700.0) return std::numeric_limits<double>::infinity();
  return n0_over_h * (t * std::exp(t) - std::expm1(t));
}

double water_level(double q, double lambda, double mu, double xi) {
  const double denom = q + lambda * xi;
  if (!(denom > 0.0)) {
    throw std::domain_error(
        "primal_powers: q + lambda*xi must be positive (infinite water level)");
  }
  return (1.0 + mu) * xi / (denom * kLn2);
}

// Right-hand side of the w stationarity condition divided by (q/xi+lambda):
// depends on the duals only through the water level.
double w_stationarity_rhs(double level, double gain, double n0) {
  const double density = std::max(level - n0 / gain, 0.0);
  if (density <= 0.0) return 0.0;  // shared band not worth paying for
  return level * kLn2 * std::log2(1.0 + density * gain / n0) - density;
}

struct PrimalEval {
  std::vector<double> w_hz;    // size K, W_MC for unselected (unused)
  PrimalPowers powers;
  std::vector<double> q_mu_w;  // size K
  double r_total = 0.0;
  double transmit = 0.0;
  double p_total = 0.0;
  double f_value = 0.0;
  double c1_slack = 0.0;
  double c4_slack = 0.0;
};

PrimalEval eval_at_duals(double q, double lambda, double mu,
                         const std::vector<int>& psi, const Scenario& s,
                         double w_tol) {
  PrimalEval ev;
  ev.w_hz.assign(static_cast<std::size_t>(s.mu_count), 0.0);
  ev.q_mu_w.assign(static_cast<std::size_t>(s.mu_count), 0.0);
  for (int k : psi) {
    ev.w_hz[static_cast<std::size_t>(k)] = primal_w(k, q, lambda, mu, s, w_tol);
  }
  ev.powers = primal_powers(q, lambda, mu, s, ev.w_hz, psi);

  for (int n = 0; n < s.su_count; ++n) {
    const auto i = static_cast<std::size_t>(n);
    ev.r_total += rate(s.b_sc_hz[i], ev.powers.p_su_w[i], s.g_gain[i],
                       s.n0_w_hz);
    ev.transmit += ev.powers.p_su_w[i];
  }
  for (int k : psi) {
    const auto i = static_cast<std::size_t>(k);
    const int su = best_su_for_mu(s, k);
    const double b = s.w_mc_hz[i] - ev.w_hz[i];
    ev.r_total += rate(b, ev.powers.p_sh_w[i],
                       s.g_cross_gain[i][static_cast<std::size_t>(su)],
                       s.n0_w_hz);
    ev.q_mu_w[i] =
        mu_power_for_rate(ev.w_hz[i], s.r_mc_bps[i], s.h_gain[i], s.n0_w_hz);
    ev.transmit += ev.powers.p_sh_w[i] + ev.q_mu_w[i];
  }
  ev.p_total = ev.transmit / s.xi + s.p_c_w;
  ev.f_value = ev.r_total - q * ev.p_total;
  ev.c1_slack = s.p_max_w - ev.transmit;
  ev.c4_slack = ev.r_total - s.r_sc_min_bps;
  return ev;
}

Allocation assemble(const PrimalEval& ev, const std::vector<int>& psi,
                    const Scenario& s) {
  Allocation a = make_empty_allocation(s);
  a.selected = psi;
  std::sort(a.selected.begin(), a.selected.end());
  for (int k : psi) {
    const auto i = static_cast<std::size_t>(k);
    a.w_mu_hz[i] = ev.w_hz[i];
    a.b_sh_hz[i] = s.w_mc_hz[i] - ev.w_hz[i];
    a.p_sh_w[i] = ev.powers.p_sh_w[i];
    a.q_mu_w[i] = ev.q_mu_w[i];
    if (a.b_sh_hz[i] <= 0.0) {  // fully kept band: clear rounding dust
      a.b_sh_hz[i] = 0.0;
      a.p_sh_w[i] = 0.0;
    }
  }
  a.p_su_w = ev.powers.p_su_w;
  return a;
}

InnerResult pack(const PrimalEval& ev, double lambda, double mu,
                 const std::vector<int>& psi, const Scenario& s, int evals) {
  InnerResult r;
  r.allocation = assemble(ev, psi, s);
  r.lambda = lambda;
  r.mu = mu;
  r.f_value = ev.f_value;
  r.r_total_bps = ev.r_total;
  r.p_total_w = ev.p_total;
  r.transmit_w = ev.transmit;
  r.evals = evals;
  return r;
}

// Smallest multiplier value whose slack is nonnegative, found by doubling
// then bisection on the monotone slack function. The feasible (upper) end
// of the final bracket is returned so the assembled primal never overshoots
// the constraint. `lo_known_negative` skips the evaluation at lo (used for
// q = 0, where the water level diverges at lambda = 0).
struct AxisSolve {
  double value = 0.0;
  PrimalEval eval;
  int evals = 0;
  bool bracketed = true;
};

template <typename SlackFn>
AxisSolve solve_axis(const SlackFn& slack_at, double lo, bool lo_known_negative,
                     double rel_tol, int max_evals) {
  AxisSolve out;
  int used = 0;
  if (!lo_known_negative) {
    auto [sl, ev] = slack_at(lo);
    ++used;
    if (sl >= 0.0) {
      out.value = lo;
      out.eval = std::move(ev);
      out.evals = used;
      return out;
    }
  }
  double hi = std::max(1.0, lo * 2.0);
  std::pair<double, PrimalEval> at_hi = slack_at(hi);
  ++used;
  while (at_hi.first < 0.0 && used < max_evals) {
    lo = hi;
    lo_known_negative = true;
    hi *= 4.0;
    at_hi = slack_at(hi);
    ++used;
    if (!std::isfinite(hi)) break;
  }
  if (at_hi.first < 0.0) {
    out.bracketed = false;
    out.value = hi;
    out.eval = std::move(at_hi.second);
    out.evals = used;
    return out;
  }
  while (hi - lo > rel_tol * std::max(hi, 1.0) && used < max_evals) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    auto [sl, ev] = slack_at(mid);
    ++used;
    if (sl >= 0.0) {
      hi = mid;
      at_hi = {sl, std::move(ev)};
    } else {
      lo = mid;
    }
  }
  out.value = hi;
  out.eval = std::move(at_hi.second);
  out.evals = used;
  return out;
}

}  // namespace

double min_mu_service_power(const std::vector<int>& psi, const Scenario& s) {
  double total = 0.0;
  for (int k : psi) {
    const auto i = static_cast<std::size_t>(k);
    total += mu_power_for_rate(s.w_mc_hz[i], s.r_mc_bps[i], s.h_gain[i],
                               s.n0_w_hz);
  }
  return total;
}

double primal_w(int k, double q, double lambda, double mu, const Scenario& s,
                double w_tol_hz) {
  const auto i = static_cast<std::size_t>(k);
  const double w_max = s.w_mc_hz[i];
  const double r = s.r_mc_bps[i];
  const double n0_over_h = s.n0_w_hz / s.h_gain[i];
  const int su = best_su_for_mu(s, k);
  const double gain = s.g_cross_gain[i][static_cast<std::size_t>(su)];

  const double level = water_level(q, lambda, mu, s.xi);
  const double rhs = w_stationarity_rhs(level, gain, s.n0_w_hz);
  if (rhs <= 0.0) return w_max;  // C <= 0: keep the whole band for the MU

  auto lhs = [&](double w) { return w_stationarity_lhs(r * kLn2 / w, n0_over_h); };
  if (lhs(w_max) >= rhs) return w_max;  // root beyond the licensed band

  // Keep the rate exponent below the mu_power_for_rate overflow sentinel;
  // the LHS there is astronomically larger than any attainable RHS.
  const double w_lo = std::min(r * kLn2 / 41.0, 0.5 * w_max);
  double lo = w_lo, hi = w_max;
  while (hi - lo > w_tol_hz) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (lhs(mid) >= rhs) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double primal_w_lambert(int k, double q, double lambda, double mu,
                        const Scenario& s) {
  const auto i = static_cast<std::size_t>(k);
  const double w_max = s.w_mc_hz[i];
  const int su = best_su_for_mu(s, k);
  const double gain = s.g_cross_gain[i][static_cast<std::size_t>(su)];

  const double level = water_level(q, lambda, mu, s.xi);
  const double rhs = w_stationarity_rhs(level, gain, s.n0_w_hz);
  if (rhs <= 0.0) return w_max;

  // Stationarity in t = R ln2 / w reads e^t (t - 1) = A - 1 with
  // A = rhs * h / N0, so t = W0((A-1)/e) + 1.
  const double a = rhs * s.h_gain[i] / s.n0_w_hz;
  const double arg = (a - 1.0) * std::exp(-1.0);
  const double t = numerics::lambert_w0(arg) + 1.0;
  if (!(t > 0.0)) return w_max;
  const double w = s.r_mc_bps[i] * kLn2 / t;
  return std::min(w, w_max);
}

PrimalPowers primal_powers(double q, double lambda, double mu,
                           const Scenario& s, const std::vector<double>& w_hz,
                           const std::vector<int>& psi) {
  const double level = water_level(q, lambda, mu, s.xi);
  PrimalPowers out;
  out.p_sh_w.assign(static_cast<std::size_t>(s.mu_count), 0.0);
  out.p_su_w.assign(static_cast<std::size_t>(s.su_count), 0.0);
  for (int n = 0; n < s.su_count; ++n) {
    const auto i = static_cast<std::size_t>(n);
    out.p_su_w[i] =
        s.b_sc_hz[i] * std::max(level - s.n0_w_hz / s.g_gain[i], 0.0);
  }
  for (int k : psi) {
    const auto i = static_cast<std::size_t>(k);
    const int su = best_su_for_mu(s, k);
    const double gain = s.g_cross_gain[i][static_cast<std::size_t>(su)];
    const double b = std::max(s.w_mc_hz[i] - w_hz[i], 0.0);
    out.p_sh_w[i] = b * std::max(level - s.n0_w_hz / gain, 0.0);
  }
  return out;
}

InnerResult inner_solve(double q, const std::vector<int>& psi,
                        const Scenario& s, const SolveOptions& opts) {
  const double w_tol = opts.w_bisect_tol_hz;
  int evals = 0;
  auto eval = [&](double lambda, double mu) {
    ++evals;
    return eval_at_duals(q, lambda, mu, psi, s, w_tol);
  };

  const bool c1 = opts.enforce_c1;
  const bool c4 = opts.enforce_c4;
  const double p_scale = std::max(1.0, s.p_max_w);
  const double r_scale = std::max(1.0, s.r_sc_min_bps);

  // Unconstrained stationary point. For q = 0 the water level diverges,
  // which only arises with the power budget enforced; skip straight to the
  // lambda search in that case.
  if (q > 0.0) {
    PrimalEval at_zero = eval(0.0, 0.0);
    const bool ok_c1 = !c1 || at_zero.c1_slack >= 0.0;
    const bool ok_c4 = !c4 || at_zero.c4_slack >= 0.0;
    if (ok_c1 && ok_c4) {
      return pack(at_zero, 0.0, 0.0, psi, s, evals);
    }
    if (c1 && at_zero.c1_slack < 0.0) {
      // Power over budget: raise lambda until the budget binds (mu = 0).
      auto slack_l = [&](double l) {
        PrimalEval ev = eval(l, 0.0);
        return std::pair<double, PrimalEval>(ev.c1_slack, std::move(ev));
      };
      AxisSolve ax = solve_axis(slack_l, 0.0, true, opts.dual_tol,
                                opts.max_inner_iters - evals);
      InnerResult r = pack(ax.eval, ax.value, 0.0, psi, s, evals);
      if (!ax.bracketed) {
        r.dual_feasible = false;
        r.infeasible_reason = "C1: power budget unattainable";
        return r;
      }
      if (c4 && ax.eval.c4_slack < -kFeasTolRel * r_scale) {
        // The budget pins the water level, and with it the whole primal;
        // the best rate under C1 already misses the rate floor.
        r.dual_feasible = false;
        r.infeasible_reason = "C4: minimum system rate unreachable under C1";
      }
      return r;
    }
    // Rate below the floor: raise mu until the floor binds (lambda = 0).
    auto slack_m = [&](double m) {
      PrimalEval ev = eval(0.0, m);
      return std::pair<double, PrimalEval>(ev.c4_slack, std::move(ev));
    };
    AxisSolve ax = solve_axis(slack_m, 0.0, true, opts.dual_tol,
                              opts.max_inner_iters - evals);
    InnerResult r = pack(ax.eval, 0.0, ax.value, psi, s, evals);
    if (!ax.bracketed) {
      r.dual_feasible = false;
      r.infeasible_reason = "C4: minimum system rate unattainable";
      return r;
    }
    if (c1 && ax.eval.c1_slack < -kFeasTolRel * p_scale) {
      r.dual_feasible = false;
      r.infeasible_reason = "C4: minimum system rate unreachable under C1";
    }
    return r;
  }

  // q = 0 (throughput): rate is unbounded without a power cap.
  if (!c1) {
    throw std::domain_error(
        "inner_solve: q = 0 requires the power budget to be enforced");
  }
  auto slack_l = [&](double l) {
    PrimalEval ev = eval(l, 0.0);
    return std::pair<double, PrimalEval>(ev.c1_slack, std::move(ev));
  };
  AxisSolve ax = solve_axis(slack_l, 0.0, true, opts.dual_tol,
                            opts.max_inner_iters - evals);
  InnerResult r = pack(ax.eval, ax.value, 0.0, psi, s, evals);
  if (!ax.bracketed) {
    r.dual_feasible = false;
    r.infeasible_reason = "C1: power budget unattainable";
  }
  return r;
}

SolveResult solve(const std::vector<int>& psi_in, const Scenario& s,
                  const SolveOptions& opts_in) {
  std::vector<int> psi = psi_in;
  std::sort(psi.begin(), psi.end());
  psi.erase(std::unique(psi.begin(), psi.end()), psi.end());
  for (int k : psi) {
    if (k < 0 || k >= s.mu_count) {
      throw std::invalid_argument("solve: MU index out of range");
    }
  }

  SolveOptions opts = opts_in;
  SolveResult res;
  res.allocation = make_empty_allocation(s);

  auto infeasible = [&](const std::string& why) {
    res.status = SolveStatus::kInfeasible;
    res.infeasible_reason = why;
    res.breakdown = evaluate(s, res.allocation);
    return res;
  };

  // Cheap necessary conditions before any iterative solve.
  if (opts.enforce_c1) {
    const double floor_power = min_mu_service_power(psi, s);
    if (!(floor_power <= s.p_max_w * (1.0 + 1e-12))) {
      return infeasible("C1: minimum MU service power exceeds the budget");
    }
  }

  if (opts.objective == Objective::kThroughput) {
    // Rate maximization is ill-posed without a power cap; C1 always holds
    // here. The rate floor is checked on the maximizer.
    const double floor_power = min_mu_service_power(psi, s);
    if (!(floor_power <= s.p_max_w * (1.0 + 1e-12))) {
      return infeasible("C1: minimum MU service power exceeds the budget");
    }
    SolveOptions topts = opts;
    topts.enforce_c1 = true;
    topts.enforce_c4 = false;
    InnerResult inner = inner_solve(0.0, psi, s, topts);
    res.inner_iters = inner.evals;
    res.outer_iters = 1;
    if (!inner.dual_feasible) return infeasible(inner.infeasible_reason);
    if (opts.enforce_c4 &&
        inner.r_total_bps <
            s.r_sc_min_bps * (1.0 - kFeasTolRel) ) {
      return infeasible("C4: maximum system rate below the floor");
    }
    res.allocation = std::move(inner.allocation);
    res.breakdown = evaluate(s, res.allocation);
    res.q_final = inner.p_total_w > 0.0 ? inner.r_total_bps / inner.p_total_w
                                        : 0.0;
    res.lambda = inner.lambda;
    res.mu = inner.mu;
    res.q_trace = {res.q_final};
    res.status = SolveStatus::kOptimal;
    return res;
  }

  // Feasibility of the rate floor under the power budget: the budget pins
  // the best attainable rate, which one throughput-style solve exposes.
  if (opts.enforce_c1 && opts.enforce_c4 && s.r_sc_min_bps > 0.0) {
    SolveOptions topts = opts;
    topts.enforce_c4 = false;
    InnerResult cap = inner_solve(0.0, psi, s, topts);
    res.inner_iters += cap.evals;
    if (!cap.dual_feasible) return infeasible(cap.infeasible_reason);
    if (cap.r_total_bps < s.r_sc_min_bps * (1.0 - kFeasTolRel)) {
      return infeasible("C4: maximum system rate below the floor");
    }
  }

  InnerResult last;
  bool have_last = false;
  auto dink_inner = [&](double q) {
    InnerResult inner = inner_solve(q, psi, s, opts);
    res.inner_iters += inner.evals;
    if (!inner.dual_feasible) {
      throw std::domain_error(inner.infeasible_reason);
    }
    numerics::DinkelbachStep step{inner.f_value, inner.r_total_bps,
                                  inner.p_total_w};
    last = std::move(inner);
    have_last = true;
    res.q_trace.push_back(last.r_total_bps / last.p_total_w);
    return step;
  };

  try {
    const numerics::DinkelbachState st = numerics::dinkelbach_solve(
        dink_inner, 1.0, opts.dinkelbach_eps, opts.max_outer_iters);
    res.outer_iters = st.iterations;
    res.q_final = st.q;
    res.status = SolveStatus::kOptimal;
  } catch (const numerics::MaxIterError&) {
    res.outer_iters = opts.max_outer_iters;
    res.status = SolveStatus::kIterationCap;
    if (have_last) res.q_final = last.r_total_bps / last.p_total_w;
  } catch (const std::domain_error& e) {
    return infeasible(e.what());
  }

  if (have_last) {
    res.allocation = std::move(last.allocation);
    res.lambda = last.lambda;
    res.mu = last.mu;
  }
  res.breakdown = evaluate(s, res.allocation);
  return res;
}

}  // namespace sptrade
