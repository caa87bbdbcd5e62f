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

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "bfl/errors.hpp"
#include "bfl/quadrature.hpp"

namespace bfl {

struct SeriesPolicy {
  double series_cutoff = 12.0;   // power series for z <= cutoff
  double target_rel_err = 1e-15;
  int max_terms = 500;

  void validate() const {
    if (!(series_cutoff > 0.0)) throw InvalidArgument("series_cutoff must be > 0");
    if (!(target_rel_err > 0.0 && target_rel_err < 1e-6))
      throw InvalidArgument("target_rel_err must lie in (0, 1e-6)");
    if (max_terms < 50) throw InvalidArgument("max_terms must be >= 50");
  }
};

namespace detail {

inline void check_order_arg(int order, double z, const char* who) {
  if (order < 0) throw InvalidArgument(std::string(who) + ": negative order");
  if (!std::isfinite(z)) throw InvalidArgument(std::string(who) + ": non-finite argument");
}

// sum_k (-s)^k / (k! (n+k)!) with s = (z/2)^2 style argument, in long double.
inline long double entire_series(int n, long double s, int max_terms, double tol) {
  long double term = 1.0L / std::tgamma(static_cast<long double>(n) + 1.0L);
  long double sum = term, amax = std::abs(term);
  for (int k = 1; k < max_terms; ++k) {
    term *= -s / (static_cast<long double>(k) * (n + k));
    sum += term;
    amax = std::max(amax, std::abs(term));
    if (std::abs(term) < tol * 1e-3 * amax && k > std::abs(s)) break;
  }
  return sum;
}

inline double j_series(int n, double z, const SeriesPolicy& pol) {
  const long double h = 0.5L * z;
  const long double s = entire_series(n, h * h, pol.max_terms, pol.target_rel_err);
  return static_cast<double>(std::pow(h, static_cast<long double>(n)) * s);
}

// Hankel asymptotic expansion; returns false if it cannot reach the target.
inline bool j_asymptotic(int n, double z, const SeriesPolicy& pol, double& out) {
  const double mu = 4.0 * n * n;
  double P = 1.0, Q = 0.0, term = 1.0, prev = std::numeric_limits<double>::infinity();
  bool converged = false;
  for (int k = 1; k < pol.max_terms; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= (mu - odd * odd) / (k * 8.0 * z);
    if (term == 0.0) { converged = true; break; }
    if (std::abs(term) > prev) break;  // expansion started diverging
    prev = std::abs(term);
    // a_k/z^k enters P (k even) or Q (k odd) with alternating signs.
    const int r = k % 4;
    if (r == 1) Q += term;
    else if (r == 2) P -= term;
    else if (r == 3) Q -= term;
    else P += term;
    if (std::abs(term) < pol.target_rel_err * 0.1 * std::max(std::abs(P), std::abs(Q))) {
      converged = true;
      break;
    }
  }
  if (!converged) return false;
  // chi = z - (2n+1) pi/4, expanded to keep full precision for large z.
  const double phase = (2.0 * n + 1.0) * std::numbers::pi / 4.0;
  const double c = std::cos(z) * std::cos(phase) + std::sin(z) * std::sin(phase);
  const double s = std::sin(z) * std::cos(phase) - std::cos(z) * std::sin(phase);
  out = std::sqrt(2.0 / (std::numbers::pi * z)) * (P * c - Q * s);
  return true;
}

// Miller backward recurrence normalized by J_0 + 2 sum J_2k = 1.
inline double j_miller(int n, double z) {
  const int top = std::max(n, static_cast<int>(z));
  int m = top + 40 + static_cast<int>(std::sqrt(60.0 * top));
  if (m % 2) ++m;
  long double jp1 = 0.0L, j = 1e-300L, result = 0.0L, norm = 0.0L;
  for (int k = m; k >= 1; --k) {
    const long double jm1 = (2.0L * k / z) * j - jp1;
    jp1 = j;
    j = jm1;
    // j now holds the unnormalized J_{k-1}
    if (k - 1 == n) result = j;
    if ((k - 1) % 2 == 0 && k - 1 > 0) norm += 2.0L * j;
    if (std::abs(j) > 1e300L) {
      j *= 1e-300L;
      jp1 *= 1e-300L;
      result *= 1e-300L;
      norm *= 1e-300L;
    }
  }
  norm += j;
  return static_cast<double>(result / norm);
}

// e^{-z} I_n(z) by the power series in long double.
inline double i_scaled_series(int n, double z, const SeriesPolicy& pol) {
  const long double h = 0.5L * z;
  const long double s = entire_series(n, -(h * h), pol.max_terms + 4 * static_cast<int>(z),
                                      pol.target_rel_err);
  return static_cast<double>(
      std::exp(n * std::log(h) - static_cast<long double>(z)) * s);
}

inline bool i_scaled_asymptotic(int n, double z, const SeriesPolicy& pol, double& out) {
  const double mu = 4.0 * n * n;
  double sum = 1.0, term = 1.0, prev = std::numeric_limits<double>::infinity();
  for (int k = 1; k < pol.max_terms; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= -(mu - odd * odd) / (k * 8.0 * z);
    if (std::abs(term) > prev) return false;
    prev = std::abs(term);
    sum += term;
    if (std::abs(term) < pol.target_rel_err * 0.1 * std::abs(sum)) {
      out = sum / std::sqrt(2.0 * std::numbers::pi * z);
      return true;
    }
  }
  return false;
}

}  // namespace detail

inline double bessel_j(int order, double z, const SeriesPolicy& pol = {}) {
  detail::check_order_arg(order, z, "bessel_j");
  if (z < 0.0) throw InvalidArgument("bessel_j: negative argument");
  if (z == 0.0) return order == 0 ? 1.0 : 0.0;
  if (z <= pol.series_cutoff) return detail::j_series(order, z, pol);
  double v;
  if (detail::j_asymptotic(order, z, pol, v)) return v;
  return detail::j_miller(order, z);
}

// e^{-z} I_order(z).
inline double bessel_i_scaled(int order, double z, const SeriesPolicy& pol = {}) {
  detail::check_order_arg(order, z, "bessel_i_scaled");
  if (z < 0.0) throw InvalidArgument("bessel_i_scaled: negative argument");
  if (z == 0.0) return order == 0 ? 1.0 : 0.0;
  double v;
  if (z > 30.0 && detail::i_scaled_asymptotic(order, z, pol, v)) return v;
  if (z > 11000.0) throw RangeError("bessel_i_scaled: argument too large for series fallback");
  return detail::i_scaled_series(order, z, pol);
}

inline double bessel_i(int order, double z, const SeriesPolicy& pol = {}) {
  const double s = bessel_i_scaled(order, z, pol);
  const double v = s * std::exp(z);
  if (!std::isfinite(v)) throw RangeError("bessel_i: result overflows; use bessel_i_scaled");
  return v;
}

// g_a(z) = sum_k (-z)^k / (k! Gamma(a+k+1)); equals z^{-a/2} J_a(2 sqrt z) for z > 0.
inline double g_alpha(int order, double z, const SeriesPolicy& pol = {}) {
  detail::check_order_arg(order, z, "g_alpha");
  const double lim = 0.25 * pol.series_cutoff * pol.series_cutoff;
  if (z >= -lim && z <= lim)
    return static_cast<double>(detail::entire_series(order, z, pol.max_terms, pol.target_rel_err));
  if (z > 0.0) return std::pow(z, -0.5 * order) * bessel_j(order, 2.0 * std::sqrt(z), pol);
  const double r = std::sqrt(-z);
  return std::exp(2.0 * r - order * std::log(r)) * bessel_i_scaled(order, 2.0 * r, pol);
}

inline double laguerre(int alpha, int degree, double x) {
  if (degree < 0) throw InvalidArgument("laguerre: negative degree");
  if (degree == 0) return 1.0;
  double p0 = 1.0, p1 = 1.0 + alpha - x;
  for (int k = 1; k < degree; ++k) {
    const double p2 = ((2.0 * k + 1.0 + alpha - x) * p1 - (k + alpha) * p0) / (k + 1.0);
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

// L^alpha_0(x), ..., L^alpha_{count-1}(x) in extended precision.
inline std::vector<long double> laguerre_sequence(int alpha, int count, long double x) {
  std::vector<long double> L(std::max(count, 0));
  if (count > 0) L[0] = 1.0L;
  if (count > 1) L[1] = 1.0L + alpha - x;
  for (int k = 1; k + 1 < count; ++k)
    L[k + 1] = ((2.0L * k + 1.0L + alpha - x) * L[k] - (k + alpha) * L[k - 1]) / (k + 1.0L);
  return L;
}

// log(Gamma(j) / Gamma(beta + j)) as an explicit sum.
inline double log_gamma_ratio(long long j, int beta) {
  if (j < 1) throw InvalidArgument("log_gamma_ratio: j must be >= 1");
  if (beta < 0) throw InvalidArgument("log_gamma_ratio: negative shift");
  double s = 0.0;
  for (int i = 0; i < beta; ++i) s -= std::log(static_cast<double>(j + i));
  return s;
}

// log(n!), exact summation for small n.
inline double log_factorial(int n) {
  if (n < 0) throw InvalidArgument("log_factorial: negative argument");
  if (n < 30) {
    double s = 0.0;
    for (int i = 2; i <= n; ++i) s += std::log(static_cast<double>(i));
    return s;
  }
  return std::lgamma(n + 1.0);
}

// int_0^inf sqrt(zu) J_a(zu) f(u) du on [0, rule.truncation].
template <class F>
QuadResult hankel_transform(F&& f, int order, double z, const QuadratureRule& rule,
                            const SeriesPolicy& pol = {}) {
  if (!(z > 0.0)) throw InvalidArgument("hankel_transform: z must be > 0");
  if (!(rule.truncation > 0.0))
    throw InvalidArgument("hankel_transform: rule.truncation must be set");
  const double h = std::min(std::numbers::pi / (rule.panels_per_period * z), 0.25);
  auto integrand = [&](double u) { return std::sqrt(z * u) * bessel_j(order, z * u, pol) * f(u); };
  return integrate_truncated(integrand, 0.0, rule.truncation, h, rule);
}

// int_{u0}^{u1} e^{-p u} u^m g_a(a u) g_b(b u) du, evaluated in v = sqrt(u) so the
// oscillation period is uniform. u1 = +inf requires p > 0 and truncates where the
// exponential has decayed below rule.tail_epsilon.
inline QuadResult bessel_g_product_integral(int alpha, int beta, int m, double p, double a,
                                            double b, double u0, double u1,
                                            const QuadratureRule& rule,
                                            const SeriesPolicy& pol = {}) {
  const bool infinite = std::isinf(u1);
  if (infinite && !(p > 0.0))
    throw InvalidArgument("bessel_g_product_integral: infinite range needs p > 0");
  if (infinite) {
    const double L = -std::log(rule.tail_epsilon);
    double U = std::max(1.0, L / p);
    for (int it = 0; it < 4; ++it) U = std::max(1.0, (L + m * std::log(U)) / p);
    u1 = std::max(u0, U * rule.safety_factor);
  }
  const double v0 = std::sqrt(u0), v1 = std::sqrt(u1);
  const double freq = std::max({std::sqrt(std::abs(a)), std::sqrt(std::abs(b)), 1e-300});
  double h = std::min(std::numbers::pi / (rule.panels_per_period * freq), 0.5);
  if (p != 0.0) h = std::min(h, 0.5 / std::sqrt(std::abs(p)));
  auto f = [&](double v) {
    const double u = v * v;
    return 2.0 * v * std::exp(-p * u) * std::pow(u, m) * g_alpha(alpha, a * u, pol) *
           g_alpha(beta, b * u, pol);
  };
  if (infinite) return integrate_truncated(f, v0, v1, h, rule);
  QuadResult r;
  const int n = std::max(1, static_cast<int>(std::ceil((v1 - v0) / h)));
  r.value = integrate_panels(f, v0, v1, n, rule.order);
  return r;
}

}  // namespace bfl
