// Copyright 2026 The bfl Authors.
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

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <vector>

#include "bfl/errors.hpp"
#include "bfl/types.hpp"

namespace bfl {

struct GaussLegendre {
  std::vector<double> nodes;    // on [-1, 1], ascending
  std::vector<double> weights;
};

namespace detail {

inline GaussLegendre build_gauss_legendre(int n) {
  GaussLegendre r;
  r.nodes.resize(n);
  r.weights.resize(n);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    // Tricomi initial guess, then Newton on P_n.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.nodes[i] = -x;
    r.nodes[n - 1 - i] = x;
    r.weights[i] = w;
    r.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) r.nodes[m - 1] = 0.0;
  return r;
}

}  // namespace detail

// Rules are built once per order and shared; the returned reference stays valid.
inline const GaussLegendre& gauss_legendre(int n) {
  if (n < 1) throw InvalidArgument("Gauss-Legendre order must be >= 1");
  static std::mutex mu;
  static std::map<int, std::unique_ptr<GaussLegendre>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<GaussLegendre>(detail::build_gauss_legendre(n));
  return *slot;
}

// Panel and truncation policy for semi-infinite (possibly oscillatory) integrals.
struct QuadratureRule {
  int order = 16;                 // Gauss-Legendre nodes per panel
  double tail_epsilon = 1e-17;    // size of the discarded exponential tail
  double safety_factor = 2.0;
  double panels_per_period = 2.0; // panels per oscillation period
  double truncation = 0.0;        // explicit cut-off (Hankel transforms); 0 means derived
  double tail_tolerance = 1e-10;  // last-panel contribution above this raises a warning
  int max_panels = 200000;
};

struct QuadResult {
  double value = 0.0;
  AccuracyFlag flag = AccuracyFlag::ok;
};

// Fixed-order Gauss-Legendre on [a, b].
template <class F>
double integrate_gl(F&& f, double a, double b, int order) {
  const auto& gl = gauss_legendre(order);
  const double h = 0.5 * (b - a), c = 0.5 * (a + b);
  double s = 0.0;
  for (int i = 0; i < order; ++i) s += gl.weights[i] * f(c + h * gl.nodes[i]);
  return s * h;
}

// Composite Gauss-Legendre with n_panels equal panels on [a, b].
template <class F>
double integrate_panels(F&& f, double a, double b, int n_panels, int order) {
  if (n_panels < 1) n_panels = 1;
  const double h = (b - a) / n_panels;
  double s = 0.0;
  for (int p = 0; p < n_panels; ++p) {
    const double lo = a + p * h;
    const double hi = (p + 1 == n_panels) ? b : lo + h;
    s += integrate_gl(f, lo, hi, order);
  }
  return s;
}

// Composite rule over the sorted breakpoints, each piece split into panels no
// wider than max_width.
template <class F>
double integrate_breakpoints(F&& f, std::vector<double> points, double max_width, int order) {
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    const double a = points[i], b = points[i + 1];
    if (!(b > a)) continue;
    const int n = static_cast<int>(std::ceil((b - a) / max_width));
    s += integrate_panels(f, a, b, n, order);
  }
  return s;
}

// Panels of width h from a to b; reports a warning if the last panel still
// contributes more than rule.tail_tolerance relative to max(1, |total|).
template <class F>
QuadResult integrate_truncated(F&& f, double a, double b, double h, const QuadratureRule& rule) {
  QuadResult r;
  if (!(b > a)) return r;
  int n = static_cast<int>(std::ceil((b - a) / h));
  if (n > rule.max_panels) {
    n = rule.max_panels;
    r.flag = AccuracyFlag::tail_warning;
  }
  const double w = (b - a) / n;
  double last = 0.0;
  for (int p = 0; p < n; ++p) {
    const double lo = a + p * w;
    const double hi = (p + 1 == n) ? b : lo + w;
    last = integrate_gl(f, lo, hi, rule.order);
    r.value += last;
  }
  if (std::abs(last) > rule.tail_tolerance * std::max(1.0, std::abs(r.value)))
    r.flag = AccuracyFlag::tail_warning;
  return r;
}

}  // namespace bfl
