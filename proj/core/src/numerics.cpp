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

#include "sptrade/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sptrade::numerics {

namespace {

constexpr double kBranchPoint = -0.36787944117144233;  // -1/e

double halley_w0(double x, double w, int max_iter, bool* converged) {
  *converged = false;
  for (int i = 0; i < max_iter; ++i) {
    const double ew = std::exp(w);
    const double f = w * ew - x;
    const double wp1 = w + 1.0;
    const double denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
    if (denom == 0.0 || !std::isfinite(denom)) break;
    const double w_next = w - f / denom;
    if (!std::isfinite(w_next)) break;
    if (std::abs(w_next - w) <= 1e-16 * (1.0 + std::abs(w_next))) {
      *converged = true;
      return w_next;
    }
    w = w_next;
  }
  return w;
}

}  // namespace

double lambert_w0(double x) {
  if (std::isnan(x)) return x;
  if (x < kBranchPoint) {
    throw std::domain_error("lambert_w0: argument below -1/e");
  }
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return x;

  // Asymptotic seed: log(x) - log(log(x)) for large x, x(1 - x) near 0,
  // and a square-root expansion near the branch point.
  double w0;
  if (x > 3.0) {
    const double lx = std::log(x);
    const double llx = std::log(lx);
    w0 = lx - llx + llx / lx;
  } else if (x > -0.25) {
    w0 = x * (1.0 - x);
  } else {
    const double p =
        std::sqrt(std::max(2.0 * (std::exp(1.0) * x + 1.0), 0.0));
    w0 = -1.0 + p - p * p / 3.0;
  }

  bool ok = false;
  const double w = halley_w0(x, w0, 50, &ok);
  if (ok) return w;

  // Fallback: bisection on w e^w - x over a bracket that always contains W0.
  double lo = -1.0;
  double hi = std::max(1.0, std::log(std::max(x, 1.0)) + 1.0);
  auto f = [x](double t) { return t * std::exp(t) - x; };
  return bisect(f, lo, hi, 1e-15);
}

double bisect(const std::function<double(double)>& f, double lo, double hi,
              double tol) {
  if (!(lo < hi)) {
    throw std::invalid_argument("bisect: lo must be below hi");
  }
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0)) {
    throw std::invalid_argument("bisect: f(lo) and f(hi) have the same sign");
  }
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;  // interval at floating-point limit
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

GoldenResult golden_section_max(const std::function<double(double)>& f,
                                double lo, double hi, double tol) {
  if (!(lo <= hi)) {
    throw std::invalid_argument("golden_section_max: lo must be <= hi");
  }
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > tol) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
    if (c >= d) break;  // floating-point limit
  }
  GoldenResult r;
  r.argmax = 0.5 * (a + b);
  r.max = f(r.argmax);
  return r;
}

Ellipsoid2D Ellipsoid2D::sphere(std::array<double, 2> c, double radius) {
  Ellipsoid2D e;
  e.center = c;
  const double r2 = radius * radius;
  e.shape = {{{r2, 0.0}, {0.0, r2}}};
  return e;
}

Ellipsoid2D ellipsoid_step(const Ellipsoid2D& e,
                           std::array<double, 2> subgradient) {
  const double gx = subgradient[0];
  const double gy = subgradient[1];
  const double gnorm = std::hypot(gx, gy);
  if (!(gnorm > 1e-300) || !std::isfinite(gnorm)) {
    throw std::domain_error("ellipsoid_step: degenerate subgradient");
  }
  const auto& s = e.shape;
  const double sg0 = s[0][0] * gx + s[0][1] * gy;
  const double sg1 = s[1][0] * gx + s[1][1] * gy;
  const double gsg = gx * sg0 + gy * sg1;
  if (!(gsg > 0.0) || !std::isfinite(gsg)) {
    throw std::domain_error("ellipsoid_step: shape matrix not positive definite");
  }
  const double denom = std::sqrt(gsg);

  // Central-cut update, n = 2: move 1/(n+1) of the supporting radius against
  // the subgradient and contract the shape by n^2/(n^2-1) after a rank-one
  // downdate of weight 2/(n+1).
  Ellipsoid2D out;
  out.center[0] = std::max(0.0, e.center[0] - (sg0 / denom) / 3.0);
  out.center[1] = std::max(0.0, e.center[1] - (sg1 / denom) / 3.0);
  const double scale = 4.0 / 3.0;
  const double w = 2.0 / 3.0 / gsg;
  out.shape[0][0] = scale * (s[0][0] - w * sg0 * sg0);
  out.shape[0][1] = scale * (s[0][1] - w * sg0 * sg1);
  out.shape[1][0] = scale * (s[1][0] - w * sg1 * sg0);
  out.shape[1][1] = scale * (s[1][1] - w * sg1 * sg1);
  const double sym = 0.5 * (out.shape[0][1] + out.shape[1][0]);
  out.shape[0][1] = sym;
  out.shape[1][0] = sym;
  return out;
}

bool ellipsoid_converged(const Ellipsoid2D& e,
                         std::array<double, 2> subgradient, double tol) {
  const double gx = subgradient[0];
  const double gy = subgradient[1];
  const auto& s = e.shape;
  const double gsg = gx * (s[0][0] * gx + s[0][1] * gy) +
                     gy * (s[1][0] * gx + s[1][1] * gy);
  return std::sqrt(std::max(gsg, 0.0)) <= tol;
}

DinkelbachState dinkelbach_solve(
    const std::function<DinkelbachStep(double)>& inner, double q0,
    double epsilon, int max_iter) {
  double q = q0;
  for (int it = 1; it <= max_iter; ++it) {
    const DinkelbachStep step = inner(q);
    if (!(step.denominator > 0.0)) {
      throw std::domain_error("dinkelbach_solve: nonpositive denominator");
    }
    const double residual = step.numerator - q * step.denominator;
    const double next_q = step.numerator / step.denominator;
    if (std::abs(residual) <=
        epsilon * std::max(1.0, std::abs(q) * step.denominator)) {
      return DinkelbachState{next_q, it, residual};
    }
    q = next_q;
  }
  throw MaxIterError("dinkelbach_solve: no convergence within max_iter");
}

}  // namespace sptrade::numerics
