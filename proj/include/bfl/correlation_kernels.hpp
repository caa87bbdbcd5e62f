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
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "bfl/errors.hpp"
#include "bfl/quadrature.hpp"
#include "bfl/special_functions.hpp"
#include "bfl/transition_kernels.hpp"
#include "bfl/types.hpp"

namespace bfl {

enum class KernelKind { finite_raw, finite_gauged, bessel_limit };

inline const char* to_string(KernelKind k) {
  switch (k) {
    case KernelKind::finite_raw: return "finite_raw";
    case KernelKind::finite_gauged: return "finite_gauged";
    case KernelKind::bessel_limit: return "bessel_limit";
  }
  return "bessel_limit";
}

// Raw kernels take absolute times t > 0; gauged and Bessel kernels take
// hard-edge times (absolute time 1 + t/4N).
struct KernelSpec {
  KernelKind kind = KernelKind::bessel_limit;
  Ordering ordering = Ordering::time_like;
  std::optional<int> N;
  std::vector<PathPoint> path;
  QuadratureRule quadrature;

  static KernelSpec bessel(Ordering o, std::vector<PathPoint> path, QuadratureRule rule = {}) {
    KernelSpec k{KernelKind::bessel_limit, o, std::nullopt, std::move(path), rule};
    k.validate();
    return k;
  }
  static KernelSpec finite_raw(Ordering o, int N, std::vector<PathPoint> path,
                               QuadratureRule rule = {}) {
    KernelSpec k{KernelKind::finite_raw, o, N, std::move(path), rule};
    k.validate();
    return k;
  }
  static KernelSpec finite_gauged(Ordering o, int N, std::vector<PathPoint> path,
                                  QuadratureRule rule = {}) {
    KernelSpec k{KernelKind::finite_gauged, o, N, std::move(path), rule};
    k.validate();
    return k;
  }

  void validate() const {
    if (path.empty()) throw InvalidArgument("KernelSpec: empty path");
    if ((kind == KernelKind::bessel_limit) == N.has_value())
      throw InvalidArgument("KernelSpec: N must be given exactly for finite kernels");
    if (N && *N < 1) throw InvalidArgument("KernelSpec: N must be >= 1");
    for (const auto& p : path) {
      if (p.alpha < 0) throw InvalidArgument("KernelSpec: negative alpha");
      if (!std::isfinite(p.t)) throw InvalidArgument("KernelSpec: non-finite time");
      if (kind == KernelKind::finite_raw && !(p.t > 0.0))
        throw DomainError("KernelSpec: raw kernels need absolute times t > 0");
      if (kind == KernelKind::finite_gauged && !(1.0 + p.t / (4.0 * *N) > 0.0))
        throw DomainError("KernelSpec: need 1 + t/4N > 0");
    }
    for (std::size_t i = 0; i + 1 < path.size(); ++i)
      if (!precedes(ordering, path[i], path[i + 1]))
        throw OrderingError("KernelSpec: path is not strictly ordered under " +
                            std::string(to_string(ordering)) + " ordering");
  }

  std::size_t size() const { return path.size(); }
};

namespace detail {

inline void check_index(const KernelSpec& k, std::size_t i) {
  if (i >= k.path.size()) throw RangeError("kernel: path index out of range");
}

// sum_{k=1}^N Gamma(k)/Gamma(g+k) r^k L^a_{k-1}(X) L^b_{k-1}(Y), extended precision.
inline long double laguerre_kernel_sum(int a, int b, int g, long double X, long double Y,
                                       long double r, int N) {
  const auto La = laguerre_sequence(a, N, X);
  const auto Lb = laguerre_sequence(b, N, Y);
  long double c = r / std::tgamma(static_cast<long double>(g) + 1.0L);
  long double s = 0.0L;
  for (int k = 1; k <= N; ++k) {
    s += c * La[k - 1] * Lb[k - 1];
    c *= r * k / static_cast<long double>(g + k);
  }
  return s;
}

// a^{a_ord/2} b^{b_ord/2} with 0^0 = 1
inline double half_powers(int ao, double a, int bo, double b) {
  return std::pow(a, 0.5 * ao) * std::pow(b, 0.5 * bo);
}

}  // namespace detail

// int_lo^hi e^{-pu} u^{-|b-a|/2} J_a(2 sqrt(x u)) J_b(2 sqrt(y u)) du, where the
// power is u^{-(b-a)/2} time-like and u^{-(a-b)/2} space-like (a sign, not |.|,
// so the head integral on [0, 1/4] is also valid for reversed orders).
inline QuadResult bessel_pair_integral(Ordering o, int a, int b, double p, double x, double y,
                                       double lo, double hi, const QuadratureRule& rule) {
  const int m = o == Ordering::time_like ? a : b;
  auto r = bessel_g_product_integral(a, b, m, p, x, y, lo, hi, rule);
  r.value *= detail::half_powers(a, x, b, y);
  return r;
}

// Same integral over [0, inf) with the closed forms where they exist.
inline QuadResult bessel_pair_integral_full(Ordering o, int a, int b, double p, double x,
                                            double y, const QuadratureRule& rule) {
  if (a == b) {
    if (!(p > 0.0)) throw InvalidArgument("bessel_pair_integral_full: equal orders need p > 0");
    const double sx = std::sqrt(x), sy = std::sqrt(y);
    const double v = std::exp(-(sx - sy) * (sx - sy) / p) *
                     bessel_i_scaled(a, 2.0 * sx * sy / p) / p;
    return {v, AccuracyFlag::ok};
  }
  if (p == 0.0) {
    const bool tl = o == Ordering::time_like;
    if (tl != (a < b)) throw OrderingError("bessel_pair_integral_full: orders against ordering");
    const int n = std::abs(b - a);
    // support x <= y (time-like) or y <= x (space-like)
    const double lo = tl ? x : y, hi = tl ? y : x;
    if (lo > hi || hi == 0.0) return {0.0, AccuracyFlag::ok};
    const double d = hi - lo;
    if (d == 0.0 && n > 1) return {0.0, AccuracyFlag::ok};
    const double ld = n > 1 ? (n - 1) * std::log(d) : 0.0;
    // time-like: x^{a/2} y^{-b/2}; space-like: x^{-a/2} y^{b/2}
    const double sgn = tl ? 1.0 : -1.0;
    const double lx = x > 0.0 ? sgn * 0.5 * a * std::log(x) : (a == 0 ? 0.0 : -INFINITY);
    const double ly = y > 0.0 ? -sgn * 0.5 * b * std::log(y) : (b == 0 ? 0.0 : -INFINITY);
    return {std::exp(lx + ly + ld - log_factorial(n - 1)), AccuracyFlag::ok};
  }
  if (!(p > 0.0)) throw InvalidArgument("bessel_pair_integral_full: need p >= 0");
  return bessel_pair_integral(o, a, b, p, x, y, 0.0, std::numeric_limits<double>::infinity(),
                              rule);
}

inline KernelValue kernel_finite(const KernelSpec& k, std::size_t i, double x, std::size_t j,
                                 double y) {
  if (k.kind != KernelKind::finite_raw) throw InvalidArgument("kernel_finite: needs finite_raw");
  detail::check_index(k, i);
  detail::check_index(k, j);
  if (!(x >= 0.0) || !(y >= 0.0)) throw DomainError("kernel_finite: need x, y >= 0");
  const PathPoint A = k.path[i], B = k.path[j];
  const int N = *k.N;
  const bool tl = k.ordering == Ordering::time_like;
  const long double T = A.t, S = B.t, X = x / T, Y = y / S;
  const long double core =
      detail::laguerre_kernel_sum(A.alpha, B.alpha, tl ? B.alpha : A.alpha, X, Y, T / S, N);
  const long double yb = B.alpha == 0 ? 1.0L : std::pow(Y, static_cast<long double>(B.alpha));
  KernelValue out{static_cast<double>(yb * std::exp(-Y) / T * core), AccuracyFlag::ok};
  if (i < j) {
    const auto q = transition(k.ordering, A, B, x, y, k.quadrature);
    out.value -= q.value;
    out.flag = q.flag;
  }
  return out;
}

inline KernelValue kernel_gauged(const KernelSpec& k, std::size_t i, double x, std::size_t j,
                                 double y) {
  if (k.kind != KernelKind::finite_gauged)
    throw InvalidArgument("kernel_gauged: needs finite_gauged");
  detail::check_index(k, i);
  detail::check_index(k, j);
  if (!(x >= 0.0) || !(y >= 0.0)) throw DomainError("kernel_gauged: need x, y >= 0");
  const PathPoint A = k.path[i], B = k.path[j];
  const int N = *k.N, a = A.alpha, b = B.alpha;
  const double n4 = 4.0 * N;
  const double T = 1.0 + A.t / n4, S = 1.0 + B.t / n4;
  const double X = x / (n4 * T), Y = y / (n4 * S);
  const bool tl = k.ordering == Ordering::time_like;
  const long double core = detail::laguerre_kernel_sum(a, b, tl ? b : a, X, Y,
                                                       static_cast<long double>(T) / S, N);
  double pre;
  if (tl)
    pre = std::pow(n4, 0.5 * (b - a) - 1.0) * detail::half_powers(a, X, b, Y);
  else
    pre = detail::half_powers(a, x, b, y) * std::pow(n4 * S, -b) / n4;
  pre *= std::exp(-0.5 * (X + Y)) / T;
  KernelValue out{static_cast<double>(pre * core), AccuracyFlag::ok};
  if (i < j) {
    const double p = B.t - A.t;
    QuadResult I;
    double g;
    if (tl) {
      I = bessel_pair_integral_full(k.ordering, a, b, p, x * S / T, y * T / S, k.quadrature);
      g = std::pow(T, -0.5 * b) * std::pow(S, 0.5 * a) * std::exp(0.5 * (X - Y));
    } else {
      I = bessel_pair_integral_full(k.ordering, a, b, p, x, y, k.quadrature);
      g = std::exp(0.5 * (Y - X));
    }
    out.value -= g * I.value;
    out.flag = I.flag;
  }
  return out;
}

inline KernelValue kernel_bessel(const KernelSpec& k, std::size_t i, double x, std::size_t j,
                                 double y) {
  if (k.kind != KernelKind::bessel_limit)
    throw InvalidArgument("kernel_bessel: needs bessel_limit");
  detail::check_index(k, i);
  detail::check_index(k, j);
  if (!(x >= 0.0) || !(y >= 0.0)) throw DomainError("kernel_bessel: need x, y >= 0");
  const PathPoint A = k.path[i], B = k.path[j];
  const double p = B.t - A.t;
  const auto o = k.ordering;
  if (i < j) {
    QuadResult tail;
    if (p > 0.0) {
      tail = bessel_pair_integral(o, A.alpha, B.alpha, p, x, y, 0.25,
                                  std::numeric_limits<double>::infinity(), k.quadrature);
    } else {
      // No exponential decay: closed form of the full integral minus the head.
      const auto full = bessel_pair_integral_full(o, A.alpha, B.alpha, 0.0, x, y, k.quadrature);
      const auto head = bessel_pair_integral(o, A.alpha, B.alpha, 0.0, x, y, 0.0, 0.25,
                                             k.quadrature);
      tail = {full.value - head.value, worst(full.flag, head.flag)};
    }
    return {-tail.value, tail.flag};
  }
  const auto head = bessel_pair_integral(o, A.alpha, B.alpha, p, x, y, 0.0, 0.25, k.quadrature);
  return {head.value, head.flag};
}

inline KernelValue evaluate(const KernelSpec& k, std::size_t i, double x, std::size_t j,
                            double y) {
  switch (k.kind) {
    case KernelKind::finite_raw: return kernel_finite(k, i, x, j, y);
    case KernelKind::finite_gauged: return kernel_gauged(k, i, x, j, y);
    case KernelKind::bessel_limit: return kernel_bessel(k, i, x, j, y);
  }
  return {};
}

// Gauge factor f with K_gauged = f(i, x) / f(j, y) * (4N)^{-1} K_raw at
// absolute times 1 + t/4N and arguments x/4N, y/4N.
inline double gauge_factor(Ordering o, int N, PathPoint p, double x) {
  const double n4 = 4.0 * N;
  const double e = std::exp(-x / (2.0 * n4 + 2.0 * p.t));
  if (o == Ordering::time_like)
    return std::pow(n4, -0.5 * p.alpha) * std::pow(x / (n4 + p.t), 0.5 * p.alpha) * e;
  return std::pow(x, 0.5 * p.alpha) * e;
}

// Raw spec at the absolute times a gauged spec refers to.
inline KernelSpec raw_counterpart(const KernelSpec& gauged) {
  if (gauged.kind != KernelKind::finite_gauged)
    throw InvalidArgument("raw_counterpart: needs finite_gauged");
  std::vector<PathPoint> path;
  for (auto p : gauged.path) path.push_back({p.alpha, 1.0 + p.t / (4.0 * *gauged.N)});
  return KernelSpec::finite_raw(gauged.ordering, *gauged.N, path, gauged.quadrature);
}

}  // namespace bfl
