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

#include "sptrade/allocator.hpp"

namespace sptrade {

enum class Scheme { kSptOrder, kExhaustive, kNonSpt, kThroughput };

std::string scheme_name(Scheme s);
Scheme scheme_from_name(const std::string& name);

/// Best trade a single MU can offer: the maximum of the rate its shared
/// band yields for the SC over the power spent serving it and the SU.
struct TradingEeResult {
  int mu = -1;
  double ee = 0.0;        // bits/joule
  double w_opt_hz = 0.0;  // bandwidth kept for the MU at the maximum
  double p_opt_w = 0.0;   // SU power on the shared band at the maximum
  int iterations = 0;     // alternating rounds
};

/// Maximizes the trading EE of MU k by alternating 1-d maximizations:
/// golden-section over the kept bandwidth and derivative bisection over the
/// shared-band power. The objective is strictly jointly quasi-concave, so
/// the alternation reaches its unique maximizer; stops when the relative
/// EE change drops below 1e-10.
TradingEeResult trading_ee(int k, const Scenario& s);

struct SelectionResult {
  std::vector<int> chosen;       // in commit order
  std::vector<double> ee_trace;  // system EE after each committed step
  SolveResult final;
  Scheme scheme = Scheme::kSptOrder;
  std::vector<int> infeasible_skipped;
  std::vector<TradingEeResult> trading;  // per-MU, when the scheme ranks MUs
};

/// Trading-EE-ordered greedy selection: rank MUs by descending trading EE,
/// then commit each one whose addition strictly improves the system EE
/// (by more than 1e-9 relative). MUs whose addition is infeasible are
/// skipped and recorded.
SelectionResult select_spt_order(const Scenario& s, const SolveOptions& opts);

/// Exhaustive oracle over all 2^K selections; infeasible subsets are
/// skipped. Ties break toward the smaller, then lexicographically first
/// subset. Guarded to K <= 20.
SelectionResult select_exhaustive(const Scenario& s, const SolveOptions& opts);

/// Baselines: kNonSpt solves the empty selection with the EE objective;
/// kThroughput runs the same greedy loop ranked by trading EE but commits
/// on strict total-rate improvement with the throughput objective.
SelectionResult select_baseline(const Scenario& s, Scheme scheme,
                                const SolveOptions& opts);

/// Dispatch helper over all four schemes.
SelectionResult run_scheme(const Scenario& s, Scheme scheme,
                           const SolveOptions& opts);

}  // namespace sptrade
