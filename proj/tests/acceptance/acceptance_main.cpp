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

// End-to-end acceptance suite. Each criterion prints exactly one
// PASS/FAIL line; the process exits with the number of failed criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "sptrade/experiment.hpp"
#include "sptrade/numerics.hpp"
#include "support/oracles.hpp"

using namespace sptrade;
namespace oracle = sptrade::testing;

namespace {

int g_failures = 0;

class Criterion {
 public:
  explicit Criterion(std::string name)
      : name_(std::move(name)), start_(std::chrono::steady_clock::now()) {}

  void expect(bool ok, const std::string& detail) {
    if (!ok && first_failure_.empty()) first_failure_ = detail;
    ok_ = ok_ && ok;
  }

  double elapsed_s() const {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::steady_clock::now() - start_)
               .count() /
           1000.0;
  }

  void finish(const std::string& summary, double budget_s = 0.0) {
    const double t = elapsed_s();
    if (budget_s > 0.0) {
      expect(t <= budget_s, "runtime budget exceeded: " + fmt_time(t) +
                                " > " + fmt_time(budget_s));
    }
    std::printf("%s %s: %s [%.1f s]\n", ok_ ? "PASS" : "FAIL", name_.c_str(),
                ok_ ? summary.c_str() : first_failure_.c_str(), t);
    std::fflush(stdout);
    if (!ok_) ++g_failures;
  }

 private:
  static std::string fmt_time(double t) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.1f s", t);
    return buf;
  }

  std::string name_;
  bool ok_ = true;
  std::string first_failure_;
  std::chrono::steady_clock::time_point start_;
};

Scenario drop(std::uint64_t seed, int k = 5, int n = 5) {
  DropDefaults d;
  d.mu_count = k;
  d.su_count = n;
  return generate_drop({}, {}, d, seed);
}

SolveOptions no_c1_c4() {
  SolveOptions o;
  o.enforce_c1 = false;
  o.enforce_c4 = false;
  return o;
}

std::vector<int> all_mus(const Scenario& s) {
  std::vector<int> psi(static_cast<std::size_t>(s.mu_count));
  for (int k = 0; k < s.mu_count; ++k) psi[static_cast<std::size_t>(k)] = k;
  return psi;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

// ---------------------------------------------------------------------------
// 1. Allocator EE matches a dense 3-d brute force on tiny instances.
void criterion_1() {
  Criterion c("criterion 1 (allocator vs brute-force grid, K=1 N=1)");
  double worst = 0.0;
  for (std::uint64_t seed = 1000; seed < 1020; ++seed) {
    const Scenario s = drop(seed, 1, 1);
    const SolveResult r = solve({0}, s, no_c1_c4());
    c.expect(r.status == SolveStatus::kOptimal, "solver not optimal");
    if (r.status != SolveStatus::kOptimal) continue;
    const auto grid = oracle::brute_force_k1n1(s);
    const double rel =
        std::abs(r.breakdown.ee_bits_per_joule - grid.ee) / grid.ee;
    worst = std::max(worst, rel);
    c.expect(rel <= 5e-3, "seed " + std::to_string(seed) +
                              " rel err " + fmt(rel));
  }
  c.finish("20 instances, worst relative gap " + fmt(worst), 60.0);
}

// ---------------------------------------------------------------------------
// 2. Greedy selection is exact without C1/C4 (50 drops, 1e-6 relative).
void criterion_2() {
  Criterion c("criterion 2 (spt-order equals exhaustive without C1/C4)");
  const SolveOptions o = no_c1_c4();
  double worst = 0.0;
  for (std::uint64_t seed = 2000; seed < 2050; ++seed) {
    const Scenario s = drop(seed);
    const double spt =
        select_spt_order(s, o).final.breakdown.ee_bits_per_joule;
    const double ex =
        select_exhaustive(s, o).final.breakdown.ee_bits_per_joule;
    const double rel = std::abs(spt - ex) / std::max(ex, 1e-300);
    worst = std::max(worst, rel);
    c.expect(rel <= 1e-6,
             "seed " + std::to_string(seed) + " rel gap " + fmt(rel));
  }
  c.finish("50 drops, worst relative gap " + fmt(worst));
}

// ---------------------------------------------------------------------------
// 3. Near-optimality with every constraint enforced (100 drops).
void criterion_3() {
  Criterion c("criterion 3 (near-optimal under all constraints)");
  const SolveOptions o;
  int within_1pct = 0, feasible = 0;
  for (std::uint64_t seed = 3000; seed < 3100; ++seed) {
    const Scenario s = drop(seed);
    const auto ex = select_exhaustive(s, o);
    const auto spt = select_spt_order(s, o);
    const auto non = select_baseline(s, Scheme::kNonSpt, o);
    if (ex.final.status != SolveStatus::kOptimal) continue;
    ++feasible;
    const double ee_ex = ex.final.breakdown.ee_bits_per_joule;
    const double ee_spt = spt.final.breakdown.ee_bits_per_joule;
    if (ee_spt >= ee_ex * 0.99) ++within_1pct;
    if (non.final.status == SolveStatus::kOptimal) {
      c.expect(ee_spt >= non.final.breakdown.ee_bits_per_joule * (1.0 - 1e-9),
               "seed " + std::to_string(seed) + ": below the non-SPT baseline");
    }
  }
  c.expect(feasible >= 95, "too few feasible drops: " + std::to_string(feasible));
  const double frac = static_cast<double>(within_1pct) /
                      std::max(feasible, 1);
  c.expect(frac >= 0.95, "within-1% fraction only " + fmt(frac));
  c.finish(std::to_string(feasible) + " feasible drops, " +
           fmt(100.0 * frac) + "% within 1% of exhaustive", 600.0);
}

// ---------------------------------------------------------------------------
// 4. Selection conditions: biconditional without C1/C4, sufficiency with
//    only C1 absent, necessity with only C4 absent.
void criterion_4() {
  Criterion c("criterion 4 (selection iff/sufficient/necessary conditions)");
  std::mt19937_64 rng(44);

  auto make_triple = [&rng](std::uint64_t seed, Scenario& s,
                            std::vector<int>& psi, int& m) {
    s = drop(seed);
    psi.clear();
    for (int k = 0; k < s.mu_count; ++k) {
      if (rng() % 2 == 0) psi.push_back(k);
    }
    m = static_cast<int>(rng() % static_cast<std::uint64_t>(s.mu_count));
    const auto it = std::find(psi.begin(), psi.end(), m);
    if (it != psi.end()) psi.erase(it);
  };

  // (a) both constraints absent: exact biconditional.
  int decisive = 0;
  SolveOptions both_off = no_c1_c4();
  for (std::uint64_t seed = 4000; decisive < 200 && seed < 4600; ++seed) {
    Scenario s;
    std::vector<int> psi;
    int m = 0;
    make_triple(seed, s, psi, m);
    const SolveResult base = solve(psi, s, both_off);
    std::vector<int> with = psi;
    with.push_back(m);
    const SolveResult added = solve(with, s, both_off);
    if (base.status != SolveStatus::kOptimal ||
        added.status != SolveStatus::kOptimal) {
      continue;
    }
    const double ee_base = base.breakdown.ee_bits_per_joule;
    const double ee_new = added.breakdown.ee_bits_per_joule;
    const double trade = trading_ee(m, s).ee;
    if (std::abs(trade - ee_base) <= 1e-6 * ee_base) continue;
    ++decisive;
    if (trade > ee_base) {
      c.expect(ee_new > ee_base, "iff: improving trade did not raise EE, seed " +
                                     std::to_string(seed));
    } else {
      c.expect(ee_new <= ee_base * (1.0 + 1e-9),
               "iff: non-improving trade raised EE, seed " + std::to_string(seed));
    }
  }
  c.expect(decisive >= 200, "only " + std::to_string(decisive) + " decisive triples");

  // (b) only C1 absent (rate floor stays): sufficiency.
  SolveOptions no_c1;
  no_c1.enforce_c1 = false;
  int suff = 0;
  for (std::uint64_t seed = 5000; suff < 200 && seed < 5600; ++seed) {
    Scenario s;
    std::vector<int> psi;
    int m = 0;
    make_triple(seed, s, psi, m);
    const SolveResult base = solve(psi, s, no_c1);
    std::vector<int> with = psi;
    with.push_back(m);
    const SolveResult added = solve(with, s, no_c1);
    if (base.status != SolveStatus::kOptimal ||
        added.status != SolveStatus::kOptimal) {
      continue;
    }
    const double ee_base = base.breakdown.ee_bits_per_joule;
    const double trade = trading_ee(m, s).ee;
    if (trade <= ee_base * (1.0 + 1e-6)) continue;
    ++suff;
    c.expect(added.breakdown.ee_bits_per_joule > ee_base,
             "sufficiency failed at seed " + std::to_string(seed));
  }
  c.expect(suff >= 200, "only " + std::to_string(suff) + " sufficiency triples");

  // (c) only C4 absent (power budget stays): necessity.
  SolveOptions no_c4;
  no_c4.enforce_c4 = false;
  int nec = 0;
  for (std::uint64_t seed = 6000; nec < 200 && seed < 6600; ++seed) {
    Scenario s;
    std::vector<int> psi;
    int m = 0;
    make_triple(seed, s, psi, m);
    const SolveResult base = solve(psi, s, no_c4);
    std::vector<int> with = psi;
    with.push_back(m);
    const SolveResult added = solve(with, s, no_c4);
    if (base.status != SolveStatus::kOptimal ||
        added.status != SolveStatus::kOptimal) {
      continue;
    }
    const double ee_base = base.breakdown.ee_bits_per_joule;
    const double ee_new = added.breakdown.ee_bits_per_joule;
    if (ee_new <= ee_base * (1.0 + 1e-6)) continue;  // not an improvement
    ++nec;
    const double trade = trading_ee(m, s).ee;
    c.expect(trade > ee_base * (1.0 - 1e-9),
             "necessity failed at seed " + std::to_string(seed));
  }
  c.expect(nec >= 200, "only " + std::to_string(nec) + " necessity triples");
  c.finish(std::to_string(decisive) + " iff + " + std::to_string(suff) +
           " sufficiency + " + std::to_string(nec) + " necessity triples, 0 counterexamples");
}

// ---------------------------------------------------------------------------
// 5. Gradient checks: analytic partials vs central differences at random
//    interior points; complementary slackness at returned optima.
void criterion_5() {
  Criterion c("criterion 5 (KKT partials and complementary slackness)");
  std::mt19937_64 rng(55);
  std::uniform_real_distribution<double> u01(0.1, 0.9);
  std::uniform_real_distribution<double> uq(5e5, 5e6);

  int points = 0;
  double worst_fd = 0.0;
  while (points < 100) {
    const Scenario s = drop(7000 + static_cast<std::uint64_t>(points), 2, 2);
    const std::vector<int> psi{0, 1};
    oracle::LagrangianPoint x;
    x.w.assign(2, 0.0);
    x.p_sh.assign(2, 0.0);
    x.p_su.assign(2, 0.0);
    for (int k = 0; k < 2; ++k) {
      const auto i = static_cast<std::size_t>(k);
      x.w[i] = s.w_mc_hz[i] * (0.2 + 0.6 * u01(rng));
      x.p_sh[i] = 0.01 + 0.3 * u01(rng);
      x.p_su[i] = 0.01 + 0.3 * u01(rng);
    }
    const double q = uq(rng);
    const double lambda = u01(rng) < 0.5 ? 0.0 : uq(rng) * 0.1;
    const double mu = u01(rng) < 0.5 ? 0.0 : u01(rng);
    const auto parts = oracle::lagrangian_partials(s, psi, x, q, lambda, mu);

    auto fd_check = [&](auto&& set, double at, double analytic) {
      const double h = std::max(std::abs(at) * 1e-6, 1e-9);
      oracle::LagrangianPoint xp = x, xm = x;
      set(xp, at + h);
      set(xm, at - h);
      const double num =
          (oracle::lagrangian_value(s, psi, xp, q, lambda, mu) -
           oracle::lagrangian_value(s, psi, xm, q, lambda, mu)) /
          (2.0 * h);
      const double denom = std::max({std::abs(analytic), std::abs(num), 1e-9});
      const double rel = std::abs(num - analytic) / denom;
      worst_fd = std::max(worst_fd, rel);
      c.expect(rel <= 1e-3, "finite-difference mismatch " + fmt(rel));
    };
    for (int k = 0; k < 2; ++k) {
      const auto i = static_cast<std::size_t>(k);
      fd_check([&](oracle::LagrangianPoint& p, double v) { p.w[i] = v; },
               x.w[i], parts.d_w[i]);
      fd_check([&](oracle::LagrangianPoint& p, double v) { p.p_sh[i] = v; },
               x.p_sh[i], parts.d_p_sh[i]);
      fd_check([&](oracle::LagrangianPoint& p, double v) { p.p_su[i] = v; },
               x.p_su[i], parts.d_p_su[i]);
    }
    ++points;
  }

  // Complementary slackness across a batch of constrained solves, covering
  // budget-binding, rate-floor-binding and interior optima.
  int optima = 0, lambda_active = 0, mu_active = 0;
  double worst_cs = 0.0;
  auto check_cs = [&](const Scenario& s, const SolveResult& r) {
    if (r.status != SolveStatus::kOptimal) return;
    ++optima;
    if (r.lambda > 0.0) ++lambda_active;
    if (r.mu > 0.0) ++mu_active;
    const double scale = std::max(r.breakdown.r_total_bps, 1.0);
    const double transmit = (r.breakdown.p_total_w - s.p_c_w) * s.xi;
    const double cs1 = std::abs(r.lambda * (s.p_max_w - transmit)) / scale;
    const double cs4 = std::abs(
        r.mu * (r.breakdown.r_total_bps - s.r_sc_min_bps)) / scale;
    worst_cs = std::max({worst_cs, cs1, cs4});
    c.expect(cs1 <= 1e-4, "C1 complementary slackness " + fmt(cs1));
    c.expect(cs4 <= 1e-4, "C4 complementary slackness " + fmt(cs4));
  };
  for (std::uint64_t seed = 7500; seed < 7560; ++seed) {
    Scenario s = drop(seed);
    s.p_max_w = 0.02 + 0.02 * static_cast<double>(seed % 7);  // make C1 bite
    check_cs(s, solve(all_mus(s), s, SolveOptions{}));
  }
  for (std::uint64_t seed = 7600; seed < 7640; ++seed) {
    Scenario s = drop(seed);
    s.p_max_w = 10.0;
    s.r_sc_min_bps = 18e6;  // demanding but often reachable: C4 bites
    check_cs(s, solve({}, s, SolveOptions{}));
  }
  c.expect(optima >= 30, "too few constrained optima: " + std::to_string(optima));
  c.expect(lambda_active >= 10, "budget never bound: " + std::to_string(lambda_active));
  c.expect(mu_active >= 5, "rate floor never bound: " + std::to_string(mu_active));
  c.finish("100 FD points (worst " + fmt(worst_fd) + "), " +
           std::to_string(optima) + " optima (worst slackness " + fmt(worst_cs) + ")");
}

// ---------------------------------------------------------------------------
// 6. Trading-EE solver vs 2-d grid; Dinkelbach monotonicity on logged solves.
void criterion_6() {
  Criterion c("criterion 6 (trading-EE solver and Dinkelbach monotonicity)");
  double worst = 0.0;
  for (std::uint64_t seed = 8000; seed < 8020; ++seed) {
    const Scenario s = drop(seed, 1, 1);
    const TradingEeResult t = trading_ee(0, s);
    const auto grid = oracle::trading_ee_grid(s, 0);
    const double rel = std::abs(t.ee - grid.ee) / std::max(grid.ee, 1e-300);
    worst = std::max(worst, rel);
    c.expect(rel <= 1e-3,
             "seed " + std::to_string(seed) + " rel err " + fmt(rel));
  }

  int traces = 0;
  for (std::uint64_t seed = 8100; seed < 8140; ++seed) {
    const Scenario s = drop(seed);
    for (const auto& psi :
         {std::vector<int>{}, std::vector<int>{0}, all_mus(s)}) {
      const SolveResult r = solve(psi, s, SolveOptions{});
      if (r.status != SolveStatus::kOptimal) continue;
      ++traces;
      for (std::size_t i = 1; i < r.q_trace.size(); ++i) {
        c.expect(r.q_trace[i] >= r.q_trace[i - 1] * (1.0 - 1e-12),
                 "q trace decreased at seed " + std::to_string(seed));
      }
    }
  }
  c.finish("20 grid comparisons (worst " + fmt(worst) + "), " +
           std::to_string(traces) + " monotone q traces");
}

// ---------------------------------------------------------------------------
// 7. Qualitative trends over 50 drops (one non-monotone step allowed).
int count_down_steps(const std::vector<double>& v, double rel_tol = 1e-9) {
  int bad = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] < v[i - 1] * (1.0 - rel_tol)) ++bad;
  }
  return bad;
}

void criterion_7() {
  Criterion c("criterion 7 (trend suite over 50 drops)");
  const int drops = 50;

  // (a) EE vs P_max.
  {
    ExperimentConfig cfg;
    cfg.experiment = Experiment::kEeVsPmax;
    cfg.sweep_values = {12, 14, 16, 18, 20, 22, 24, 26, 28, 30};
    cfg.drops = drops;
    cfg.seed = 71;
    cfg.schemes = {Scheme::kSptOrder, Scheme::kNonSpt, Scheme::kThroughput};
    const auto rows = run_experiment(cfg);
    std::vector<double> spt, non, thr;
    for (const auto& r : rows) {
      if (r.scheme == Scheme::kSptOrder) spt.push_back(r.mean_ee_bits_per_joule);
      if (r.scheme == Scheme::kNonSpt) non.push_back(r.mean_ee_bits_per_joule);
      if (r.scheme == Scheme::kThroughput) thr.push_back(r.mean_ee_bits_per_joule);
    }
    c.expect(count_down_steps(spt) <= 1, "spt-order EE not rising in P_max");
    c.expect(count_down_steps(non) <= 1, "non-spt EE not rising in P_max");
    const double thr_max = *std::max_element(thr.begin(), thr.end());
    c.expect(thr.back() < thr_max * (1.0 - 1e-6),
             "throughput EE does not eventually decrease");
  }

  // (b) EE vs circuit power: strictly decreasing for every scheme.
  {
    ExperimentConfig cfg;
    cfg.experiment = Experiment::kEeVsPc;
    cfg.sweep_values = {0.2, 0.6, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0};
    cfg.drops = drops;
    cfg.seed = 72;
    cfg.schemes = {Scheme::kSptOrder, Scheme::kNonSpt, Scheme::kThroughput};
    const auto rows = run_experiment(cfg);
    for (Scheme scheme :
         {Scheme::kSptOrder, Scheme::kNonSpt, Scheme::kThroughput}) {
      std::vector<double> series;
      for (const auto& r : rows) {
        if (r.scheme == scheme) series.push_back(r.mean_ee_bits_per_joule);
      }
      std::vector<double> negated;
      for (double v : series) negated.push_back(-v);
      c.expect(count_down_steps(negated) == 0,
               scheme_name(scheme) + " EE not decreasing in P_c");
    }
  }

  // (c) selected-MU count vs licensed bandwidth.
  {
    ExperimentConfig cfg;
    cfg.experiment = Experiment::kEeAndCountVsWmc;
    cfg.sweep_values = {180, 270, 360, 450, 540, 630, 720};
    cfg.drops = drops;
    cfg.seed = 73;
    cfg.schemes = {Scheme::kSptOrder};
    const auto rows = run_experiment(cfg);
    std::vector<double> counts;
    for (const auto& r : rows) counts.push_back(r.mean_selected_mus);
    c.expect(count_down_steps(counts, 1e-12) <= 1,
             "selected-MU count not rising in W_MC");
  }
  c.finish("P_max, P_c and W_MC trends reproduced");
}

// ---------------------------------------------------------------------------
// 8. Numerics kernels.
void criterion_8() {
  Criterion c("criterion 8 (numerics kernels)");
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double x = std::pow(10.0, -6.0 + 12.0 * i / 999.0);
    const double w = numerics::lambert_w0(x);
    const double resid = std::abs(w * std::exp(w) - x) / std::max(x, 1.0);
    worst = std::max(worst, resid);
    c.expect(resid <= 1e-10, "Lambert-W residual " + fmt(resid));
  }

  numerics::Ellipsoid2D e = numerics::Ellipsoid2D::initial();
  int steps = 0;
  for (; steps < 500; ++steps) {
    const double dl = e.center[0] - 2.0;
    const double dm = e.center[1] - 3.0;
    if (std::max(std::abs(dl), std::abs(dm)) <= 1e-3) break;
    std::array<double, 2> g{0.0, 0.0};
    if (std::abs(dl) >= std::abs(dm)) {
      g[0] = dl >= 0.0 ? 1.0 : -1.0;
    } else {
      g[1] = dm >= 0.0 ? 1.0 : -1.0;
    }
    e = numerics::ellipsoid_step(e, g);
  }
  c.expect(std::abs(e.center[0] - 2.0) <= 1e-3 &&
               std::abs(e.center[1] - 3.0) <= 1e-3,
           "ellipsoid toy problem did not reach (2,3)");
  c.finish("Lambert-W worst residual " + fmt(worst) + ", ellipsoid converged in " +
           std::to_string(steps) + " steps");
}

// ---------------------------------------------------------------------------
// 9. Determinism: identical config, identical CSV bytes.
void criterion_9() {
  Criterion c("criterion 9 (byte-identical CSV reruns)");
  ExperimentConfig cfg;
  cfg.experiment = Experiment::kEeVsPmax;
  cfg.sweep_values = {16, 24, 30};
  cfg.drops = 5;
  cfg.seed = 91;
  cfg.schemes = {Scheme::kSptOrder, Scheme::kNonSpt, Scheme::kThroughput};

  const auto read = [](const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
  };
  const std::string p1 = "acceptance_run1.csv", p2 = "acceptance_run2.csv";
  write_csv(run_experiment(cfg), cfg.experiment, p1);
  write_csv(run_experiment(cfg), cfg.experiment, p2);
  const std::string b1 = read(p1), b2 = read(p2);
  c.expect(!b1.empty(), "first run produced no bytes");
  c.expect(b1 == b2, "reruns differ");
  std::filesystem::remove(p1);
  std::filesystem::remove(p2);
  c.finish(std::to_string(b1.size()) + " bytes, identical across runs");
}

}  // namespace

int main() {
  std::printf("acceptance suite: spectrum-power trading EE solver\n");
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  if (g_failures == 0) {
    std::printf("all criteria passed\n");
  } else {
    std::printf("%d criteria FAILED\n", g_failures);
  }
  return g_failures;
}
