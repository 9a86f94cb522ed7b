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

#include <string>
#include <vector>

#include "sptrade/linkmath.hpp"
#include "sptrade/scenario.hpp"

namespace sptrade {

enum class Objective { kEnergyEfficiency, kThroughput };

struct SolveOptions {
  bool enforce_c1 = true;
  bool enforce_c4 = true;
  Objective objective = Objective::kEnergyEfficiency;
  double dinkelbach_eps = 1e-6;   // relative to q * P
  double dual_tol = 1e-12;        // relative width of the dual bracket
  int max_outer_iters = 50;       // Dinkelbach iterations
  int max_inner_iters = 4000;     // primal evaluations per dual solve
  double w_bisect_tol_hz = 1e-6;  // bandwidth root tolerance

  ConstraintToggles toggles() const { return {enforce_c1, enforce_c4}; }
};

enum class SolveStatus { kOptimal, kInfeasible, kIterationCap };

struct SolveResult {
  Allocation allocation;
  EeBreakdown breakdown;
  double q_final = 0.0;  // bits/joule; achieved EE for either objective
  double lambda = 0.0;   // multiplier on the power budget (C1)
  double mu = 0.0;       // multiplier on the minimum system rate (C4)
  int outer_iters = 0;
  int inner_iters = 0;  // primal evaluations across all dual solves
  SolveStatus status = SolveStatus::kOptimal;
  std::string infeasible_reason;
  std::vector<double> q_trace;  // Dinkelbach q after each outer iteration
};

/// Bandwidth kept for MU k when maximizing the dual Lagrangian at
/// (q, lambda, mu): the unique root of the stationarity condition in w,
/// clamped to W_MC[k] when the shared band is not worth paying for.
/// Solved by bisection; the root is unique because the left-hand side is
/// strictly decreasing in w.
double primal_w(int k, double q, double lambda, double mu, const Scenario& s,
                double w_tol_hz = 1e-6);

/// Same stationary bandwidth through the closed Lambert-W form. Agrees
/// with primal_w to the bisection tolerance; kept as an algebraic
/// cross-check of the root-finding path.
double primal_w_lambert(int k, double q, double lambda, double mu,
                        const Scenario& s);

struct PrimalPowers {
  std::vector<double> p_sh_w;  // per MU in psi order position k (size K)
  std::vector<double> p_su_w;  // per SU
};

/// Water-filling powers at (q, lambda, mu) for the given kept bandwidths:
/// every band's power density is set from the common water level
/// (1+mu) xi / ((q + lambda xi) ln 2). Throws std::domain_error when
/// q + lambda xi is zero (infinite water level).
PrimalPowers primal_powers(double q, double lambda, double mu,
                           const Scenario& s, const std::vector<double>& w_hz,
                           const std::vector<int>& psi);

/// Result of one dual solve at fixed q: the maximizing primal of the
/// subtractive problem plus dual diagnostics.
struct InnerResult {
  Allocation allocation;
  double lambda = 0.0;
  double mu = 0.0;
  double f_value = 0.0;      // R - q * P at the maximizer
  double r_total_bps = 0.0;  // numerator
  double p_total_w = 0.0;    // denominator (transmit/xi + circuit)
  double transmit_w = 0.0;   // raw transmit power sum
  int evals = 0;
  bool dual_feasible = true;  // enforced constraints attainable
  std::string infeasible_reason;
};

/// Solves the subtractive problem at fixed q over (w, p_sh, p_su) for the
/// selected set psi. C2 and C3 are kept tight by construction; C1/C4 enter
/// through their multipliers. All primal quantities follow from the single
/// water level, so the dual optimum lies on a coordinate axis: the solve
/// evaluates the unconstrained point first and otherwise runs a central-cut
/// (bisection) search on the one active multiplier.
InnerResult inner_solve(double q, const std::vector<int>& psi,
                        const Scenario& s, const SolveOptions& opts);

/// Joint bandwidth and power allocation for a fixed MU selection.
/// Energy-efficiency objective: Dinkelbach iteration (q0 = 1) around
/// inner_solve. Throughput objective: one inner solve at q = 0 with the
/// power budget always enforced and the minimum-rate constraint checked
/// post-hoc. Infeasibility is reported as a status, not an exception.
SolveResult solve(const std::vector<int>& psi, const Scenario& s,
                  const SolveOptions& opts);

/// Sum of the cheapest powers that meet every selected MU's rate floor
/// (full licensed band kept for the MU). A lower bound on transmit power.
double min_mu_service_power(const std::vector<int>& psi, const Scenario& s);

}  // namespace sptrade
