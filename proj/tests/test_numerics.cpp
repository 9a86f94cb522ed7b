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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "sptrade/numerics.hpp"

using namespace sptrade::numerics;

TEST_CASE("lambert_w0 fixed points") {
  CHECK(lambert_w0(0.0) == 0.0);
  CHECK(lambert_w0(std::exp(1.0)) == doctest::Approx(1.0).epsilon(1e-14));

  // Independent root for W(1): bisection on w e^w - 1 over [0, 1].
  const double w1 = bisect([](double w) { return w * std::exp(w) - 1.0; },
                           0.0, 1.0, 1e-14);
  CHECK(lambert_w0(1.0) == doctest::Approx(w1).epsilon(1e-12));
  CHECK(w1 == doctest::Approx(0.5671432904097838).epsilon(1e-12));
}

TEST_CASE("lambert_w0 residual over log-spaced arguments") {
  for (int i = 0; i < 1000; ++i) {
    const double x = std::pow(10.0, -6.0 + 12.0 * i / 999.0);
    const double w = lambert_w0(x);
    const double resid = std::abs(w * std::exp(w) - x) / std::max(x, 1.0);
    CHECK(resid <= 1e-10);
  }
}

TEST_CASE("lambert_w0 branch behavior") {
  CHECK(lambert_w0(-1.0 / std::exp(1.0)) == doctest::Approx(-1.0).epsilon(1e-6));
  CHECK_THROWS_AS((void)lambert_w0(-0.5), std::domain_error);
  // Near-branch arguments stay on the principal branch (w >= -1).
  for (double x : {-0.367, -0.3, -0.1, -0.01}) {
    const double w = lambert_w0(x);
    CHECK(w >= -1.0);
    CHECK(std::abs(w * std::exp(w) - x) <= 1e-12);
  }
}

TEST_CASE("bisect examples") {
  const double linear = bisect([](double x) { return x - 2.0; }, 0.0, 10.0, 1e-9);
  CHECK(linear == doctest::Approx(2.0).epsilon(1e-9));

  const double root2 = bisect([](double x) { return x * x - 2.0; }, 0.0, 2.0, 1e-9);
  CHECK(root2 == doctest::Approx(std::sqrt(2.0)).epsilon(1e-8));

  CHECK_THROWS_AS(
      (void)bisect([](double x) { return x * x + 1.0; }, 0.0, 1.0, 1e-9),
      std::invalid_argument);
  CHECK_THROWS_AS((void)bisect([](double) { return 0.0; }, 1.0, 1.0, 1e-9),
                  std::invalid_argument);
}

TEST_CASE("bisect final bracket width") {
  // Root at an irrational point; the answer must sit within tol of it.
  for (double tol : {1e-3, 1e-6, 1e-9}) {
    const double r = bisect([](double x) { return std::cos(x) - x; }, 0.0, 1.0, tol);
    CHECK(std::abs(std::cos(r) - r) <= tol);  // |f'| < 2 near the root
  }
}

TEST_CASE("golden_section_max examples") {
  auto parabola = [](double x) { return -(x - 3.0) * (x - 3.0); };
  CHECK(golden_section_max(parabola, 0.0, 10.0, 1e-9).argmax ==
        doctest::Approx(3.0).epsilon(1e-7));

  auto line = [](double x) { return x; };
  const auto at_edge = golden_section_max(line, 0.0, 1.0, 1e-9);
  CHECK(at_edge.argmax == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(at_edge.max == doctest::Approx(1.0).epsilon(1e-7));

  // Oracle: dense grid scan for the maximizer of x e^{-x}.
  auto f = [](double x) { return x * std::exp(-x); };
  double best_x = 0.0, best = -1.0;
  for (int i = 0; i <= 2000000; ++i) {
    const double x = 10.0 * i / 2000000.0;
    if (f(x) > best) {
      best = f(x);
      best_x = x;
    }
  }
  const auto g = golden_section_max(f, 0.0, 10.0, 1e-9);
  CHECK(g.argmax == doctest::Approx(best_x).epsilon(1e-5));
  CHECK(g.max == f(g.argmax));  // returned max is f at the returned point
}

TEST_CASE("ellipsoid_step axis cut") {
  const Ellipsoid2D e = Ellipsoid2D::sphere({1.0, 1.0}, 10.0);
  const Ellipsoid2D next = ellipsoid_step(e, {1.0, 0.0});
  CHECK(next.center[0] < 1.0);
  CHECK(next.center[0] >= 0.0);  // clamped to the feasible orthant
  CHECK(next.center[1] == doctest::Approx(1.0));
  CHECK(next.det() < e.det());
  CHECK(next.det() == doctest::Approx(e.det() * 16.0 / 27.0).epsilon(1e-12));
}

TEST_CASE("ellipsoid volume contraction under random cuts") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Ellipsoid2D e = Ellipsoid2D::initial();
  for (int i = 0; i < 60; ++i) {
    const double before = e.det();
    e = ellipsoid_step(e, {u(rng), u(rng)});
    CHECK(e.det() < before);
    CHECK(e.shape[0][1] == e.shape[1][0]);
    CHECK(e.shape[0][0] > 0.0);
    CHECK(e.det() > 0.0);  // positive definite
  }
}

TEST_CASE("ellipsoid_step degenerate gradient") {
  CHECK_THROWS_AS((void)ellipsoid_step(Ellipsoid2D::initial(), {0.0, 0.0}),
                  std::domain_error);
}

TEST_CASE("ellipsoid toy dual: minimize max(|l-2|, |m-3|)") {
  Ellipsoid2D e = Ellipsoid2D::initial();
  for (int i = 0; i < 200; ++i) {
    const double dl = e.center[0] - 2.0;
    const double dm = e.center[1] - 3.0;
    std::array<double, 2> g{0.0, 0.0};
    if (std::abs(dl) >= std::abs(dm)) {
      g[0] = dl >= 0.0 ? 1.0 : -1.0;
    } else {
      g[1] = dm >= 0.0 ? 1.0 : -1.0;
    }
    e = ellipsoid_step(e, g);
  }
  CHECK(std::abs(e.center[0] - 2.0) <= 1e-3);
  CHECK(std::abs(e.center[1] - 3.0) <= 1e-3);
}

TEST_CASE("ellipsoid_converged threshold") {
  Ellipsoid2D tiny = Ellipsoid2D::initial();
  tiny.shape = {{{1e-20, 0.0}, {0.0, 1e-20}}};
  CHECK(ellipsoid_converged(tiny, {1.0, 0.0}, 1e-6));

  CHECK_FALSE(ellipsoid_converged(Ellipsoid2D::sphere({0, 0}, 10.0),
                                  {1.0, 0.0}, 1e-6));

  Ellipsoid2D four = Ellipsoid2D::initial();
  four.shape = {{{4.0, 0.0}, {0.0, 4.0}}};
  CHECK(ellipsoid_converged(four, {1.0, 0.0}, 2.0));  // bound exactly 2
}

namespace {

// Dinkelbach toy: maximize (2x - x^2)/(1 + x) on [0, 2]. The inner
// subtractive problem has the closed form x*(q) = clamp(1 - q/2, 0, 2).
DinkelbachStep toy_inner(double q) {
  const double x = std::clamp(1.0 - q / 2.0, 0.0, 2.0);
  const double r = 2.0 * x - x * x;
  const double p = 1.0 + x;
  return {r - q * p, r, p};
}

}  // namespace

TEST_CASE("dinkelbach toy ratio against a dense grid oracle") {
  // Oracle: grid over x with step 1e-6.
  double q_star = -1.0;
  for (int i = 0; i <= 2000000; ++i) {
    const double x = 2.0 * i / 2000000.0;
    q_star = std::max(q_star, (2.0 * x - x * x) / (1.0 + x));
  }
  CHECK(q_star == doctest::Approx(0.5358983848622456).epsilon(1e-10));

  const DinkelbachState st = dinkelbach_solve(toy_inner, 1.0, 1e-10, 50);
  CHECK(st.q == doctest::Approx(q_star).epsilon(1e-9));
  CHECK(std::abs(st.residual) <= 1e-9 * std::max(1.0, st.q));
}

TEST_CASE("dinkelbach constant ratio fixes in one update") {
  auto inner = [](double q) { return DinkelbachStep{5.0 - q, 5.0, 1.0}; };
  const DinkelbachState st = dinkelbach_solve(inner, 1.0, 1e-9, 50);
  CHECK(st.q == doctest::Approx(5.0));
  CHECK(st.iterations == 2);  // one q update plus the confirming solve
}

TEST_CASE("dinkelbach loose tolerance stops after the first inner solve") {
  int calls = 0;
  auto inner = [&calls](double q) {
    ++calls;
    return toy_inner(q);
  };
  (void)dinkelbach_solve(inner, 1.0, 1e9, 50);
  CHECK(calls == 1);
}

TEST_CASE("dinkelbach q sequence is nondecreasing from below") {
  double prev_q = 0.05;
  std::vector<double> qs;
  auto inner = [&qs](double q) {
    qs.push_back(q);
    return toy_inner(q);
  };
  (void)dinkelbach_solve(inner, prev_q, 1e-12, 50);
  for (std::size_t i = 1; i < qs.size(); ++i) CHECK(qs[i] >= qs[i - 1]);
  // Residuals are nonnegative before convergence when started from below.
  for (double q : qs) CHECK(toy_inner(q).value >= -1e-12);
}

TEST_CASE("dinkelbach max-iteration error") {
  auto inner = [](double q) { return toy_inner(q); };
  CHECK_THROWS_AS((void)dinkelbach_solve(inner, 1e-3, 1e-14, 2), MaxIterError);
}
