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

#include <array>
#include <functional>
#include <stdexcept>

namespace sptrade::numerics {

/// Principal branch of the Lambert W function, W0(x) e^{W0(x)} = x.
///
/// Halley iteration seeded from a log-based asymptotic guess; falls back to
/// bisection on w e^w - x if Halley stalls. Domain x >= -1/e.
/// Throws std::domain_error outside the domain.
double lambert_w0(double x);

/// Root of f on [lo, hi] by bisection. Requires a sign change (or a zero
/// endpoint). The final bracket width is <= tol; the bracket midpoint is
/// returned. Throws std::invalid_argument on a bad interval or when
/// f(lo) and f(hi) have the same (nonzero) sign.
double bisect(const std::function<double(double)>& f, double lo, double hi,
              double tol);

struct GoldenResult {
  double argmax = 0.0;
  double max = 0.0;
};

/// Maximizer of a quasi-concave f on [lo, hi] by golden-section search.
/// The returned argmax is within tol of the true maximizer and max is
/// f(argmax) evaluated at the returned point.
GoldenResult golden_section_max(const std::function<double(double)>& f,
                                double lo, double hi, double tol);

/// Ellipsoid {z : (z-c)^T S^{-1} (z-c) <= 1} over a 2-d dual space.
/// The shape matrix S stays symmetric positive definite and the center is
/// clamped to the nonnegative orthant after every update (the coordinates
/// are inequality multipliers).
struct Ellipsoid2D {
  std::array<double, 2> center{1.0, 1.0};
  std::array<std::array<double, 2>, 2> shape{{{1e4, 0.0}, {0.0, 1e4}}};

  static Ellipsoid2D sphere(std::array<double, 2> c, double radius);
  /// Default start: sphere of radius 100 centered at (1, 1).
  static Ellipsoid2D initial() { return sphere({1.0, 1.0}, 100.0); }

  double det() const {
    return shape[0][0] * shape[1][1] - shape[0][1] * shape[1][0];
  }
};

/// One central-cut ellipsoid update for minimization along `subgradient`.
/// det(shape) contracts by 16/27 per step; the center moves against the
/// subgradient and is clamped to the nonnegative orthant.
/// Throws std::domain_error on a degenerate (near-zero) subgradient.
Ellipsoid2D ellipsoid_step(const Ellipsoid2D& e,
                           std::array<double, 2> subgradient);

/// True iff sqrt(g^T S g) <= tol, the standard bound on the remaining
/// dual suboptimality over the ellipsoid.
bool ellipsoid_converged(const Ellipsoid2D& e,
                         std::array<double, 2> subgradient, double tol);

struct DinkelbachState {
  double q = 0.0;         // current ratio estimate
  int iterations = 0;     // inner solves performed
  double residual = 0.0;  // R - q*P at the last tested q
};

/// Value, numerator and denominator of one parametric subtractive solve:
/// value = max R(S) - q P(S), with (R, P) taken at the maximizer.
struct DinkelbachStep {
  double value = 0.0;
  double numerator = 0.0;    // R
  double denominator = 0.0;  // P, strictly positive
};

struct MaxIterError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Dinkelbach iteration for maximizing R/P. `inner` must solve the
/// subtractive problem to optimality for the given q. Converged when the
/// residual R - q*P falls below epsilon * max(1, q*P); the returned q is
/// R/P of the last inner solution and the q sequence is nondecreasing
/// whenever q0 is below the optimal ratio. Throws MaxIterError if not
/// converged within max_iter outer iterations.
DinkelbachState dinkelbach_solve(
    const std::function<DinkelbachStep(double)>& inner, double q0,
    double epsilon, int max_iter);

}  // namespace sptrade::numerics
