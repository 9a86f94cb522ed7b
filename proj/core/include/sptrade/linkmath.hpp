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

#include "sptrade/scenario.hpp"

namespace sptrade {

/// A complete SC decision. Per-MU arrays are sized K and zero for
/// unselected MUs; an MU's traded bandwidth goes to its designated SU
/// su_of_mu[k] = argmax_n g_cross[k][n] (lowest index on ties).
struct Allocation {
  std::vector<int> selected;     // sorted MU indices with x_k = 1
  std::vector<double> w_mu_hz;   // bandwidth kept for MU k
  std::vector<double> q_mu_w;    // SC transmit power spent on MU k
  std::vector<double> b_sh_hz;   // bandwidth passed to the designated SU
  std::vector<double> p_sh_w;    // SC power for the designated SU on k's band
  std::vector<int> su_of_mu;     // designated SU per MU
  std::vector<double> p_su_w;    // SC power for SU n on its own band
};

/// Zero allocation with the best-gain SU pairing precomputed.
Allocation make_empty_allocation(const Scenario& s);

/// Designated SU for MU k: argmax_n g_cross[k][n], lowest index on ties.
int best_su_for_mu(const Scenario& s, int k);

bool is_selected(const Allocation& a, int k);

/// Invariant violations of `a` against `s` (dimensions, C2 equality for
/// selected MUs, zeros for unselected MUs, nonnegativity, the SU pairing,
/// and no positive power on zero bandwidth). Empty when valid.
std::vector<std::string> validate_allocation(const Scenario& s,
                                             const Allocation& a);

struct EeBreakdown {
  double r_total_bps = 0.0;
  double p_total_w = 0.0;
  double ee_bits_per_joule = 0.0;
  std::vector<double> su_rates_bps;  // own-band plus traded-band rate per SU
  std::vector<double> mu_rates_bps;  // QoS service rate per selected MU
};

/// Shannon rate over `bandwidth`: w log2(1 + power*gain/(w N0)).
/// Defined as 0 at zero bandwidth (no transmission happens on an empty
/// band; allocations with power on a zero band are rejected at validation).
double rate(double bandwidth_hz, double power_w, double gain, double n0_w_hz);

/// The unique power making rate(w, p, h, N0) = r: (2^{r/w}-1) w N0 / h.
/// Returns +infinity when r/w > 60, signalling that the band is too narrow
/// for the requested rate at any representable power.
double mu_power_for_rate(double w_hz, double rate_bps, double h_gain,
                         double n0_w_hz);

/// Rates, total power (transmit scaled by 1/xi plus circuit power) and EE
/// of an allocation. Throws std::invalid_argument when `a` violates its
/// invariants against `s`.
EeBreakdown evaluate(const Scenario& s, const Allocation& a);

struct ConstraintToggles {
  bool enforce_c1 = true;  // total transmit power budget
  bool enforce_c4 = true;  // SC minimum system rate
};

struct ConstraintStatus {
  std::string name;
  bool enforced = true;
  double slack = 0.0;  // >= 0 when satisfied; residual for equalities
  bool satisfied = true;
};

struct FeasibilityReport {
  std::vector<ConstraintStatus> constraints;
  bool feasible = true;  // over enforced constraints only

  const ConstraintStatus* find(const std::string& name) const;
};

/// Per-constraint slack report for C1-C7 (C5 is implied by the selected
/// set). Slacks within -1e-9 of scale count as satisfied; toggled-off
/// constraints are reported but marked not enforced.
FeasibilityReport check_feasibility(const Scenario& s, const Allocation& a,
                                    const ConstraintToggles& toggles);

}  // namespace sptrade
