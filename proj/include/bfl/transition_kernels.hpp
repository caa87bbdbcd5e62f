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
#include <vector>

#include "bfl/errors.hpp"
#include "bfl/quadrature.hpp"
#include "bfl/special_functions.hpp"
#include "bfl/types.hpp"

namespace bfl {

struct TimelikePair {
  PathPoint from, to;

  TimelikePair(PathPoint a, PathPoint b) : from(a), to(b) {
    if (!(a.t > 0.0) || !(b.t > 0.0)) throw DomainError("TimelikePair: times must be > 0");
    if (!precedes(Ordering::time_like, a, b))
      throw OrderingError("TimelikePair: need alpha <= beta, t <= s and distinct points");
  }
};

struct SpacelikePair {
  PathPoint from, to;

  SpacelikePair(PathPoint a, PathPoint b) : from(a), to(b) {
    if (!(a.t > 0.0) || !(b.t > 0.0)) throw DomainError("SpacelikePair: times must be > 0");
    if (!precedes(Ordering::space_like, a, b))
      throw OrderingError("SpacelikePair: need alpha >= beta, t <= s and distinct points");
  }
};

// Squared-Bessel transition density over the time gap s - t; x = 0 or y = 0 give
// the continuous limits.
inline double t_kernel(int alpha, double t, double x, double s, double y) {
  if (!(t < s)) throw OrderingError("t_kernel: need t < s");
  if (!(x >= 0.0) || !(y >= 0.0)) throw DomainError("t_kernel: need x >= 0 and y >= 0");
  const double p = s - t;
  if (y == 0.0) return alpha == 0 ? std::exp(-x / p) / p : 0.0;
  if (x == 0.0)
    return std::exp(alpha * std::log(y / p) - y / p - log_factorial(alpha)) / p;
  const double sx = std::sqrt(x), sy = std::sqrt(y);
  const double z = 2.0 * sx * sy / p;
  const double logf = 0.5 * alpha * (std::log(y) - std::log(x)) - (sx - sy) * (sx - sy) / p;
  return std::exp(logf) * bessel_i_scaled(alpha, z) / p;
}

inline double w_kernel(int alpha, int beta, double t, double x, double y) {
  if (!(beta > alpha)) throw OrderingError("w_kernel: need beta > alpha");
  if (!(t > 0.0)) throw DomainError("w_kernel: need t > 0");
  if (!(x >= 0.0)) throw DomainError("w_kernel: need x >= 0");
  if (x > y) return 0.0;
  const int n = beta - alpha;
  const double d = y - x;
  if (d == 0.0) return n == 1 ? 1.0 / t : 0.0;
  return std::exp((n - 1) * std::log(d) - n * std::log(t) - d / t - log_factorial(n - 1));
}

// Does not depend on t. At x = 0 the law is a point mass at 0, reported as
// density 0.
inline double w_bar_kernel(int alpha, int beta, double x, double y) {
  if (!(alpha > beta)) throw OrderingError("w_bar_kernel: need alpha > beta");
  if (!(x >= 0.0)) throw DomainError("w_bar_kernel: need x >= 0");
  if (x == 0.0) return 0.0;
  if (y > x || y < 0.0) return 0.0;
  const int n = alpha - beta;
  if (y == 0.0 && beta > 0) return 0.0;
  const double d = x - y;
  if (d == 0.0 && n > 1) return 0.0;
  const double ly = beta > 0 ? beta * std::log(y) : 0.0;
  const double ld = n > 1 ? (n - 1) * std::log(d) : 0.0;
  return std::exp(-alpha * std::log(x) + ly + ld - log_factorial(n - 1));
}

namespace detail {

// int_0^end f(v) dv for f concentrated within a few sigma of `center`; panels
// of width sigma/2 cover center +- (10 + sqrt(2 deg)) sigma clipped to [0, end],
// or the same width below `end` when the peak lies beyond it.
template <class F>
double windowed(F&& f, double end, double center, double sigma, int deg, int order) {
  const double w = sigma * (10.0 + std::sqrt(2.0 * deg));
  double lo = std::max(0.0, center - w), hi = std::min(end, center + w);
  if (lo >= hi) {
    hi = end;
    lo = std::max(0.0, end - w);
  }
  const int panels = std::max(1, static_cast<int>(std::ceil((hi - lo) / (0.5 * sigma))));
  return integrate_panels(f, lo, hi, panels, order);
}

}  // namespace detail

inline KernelValue q_kernel(const TimelikePair& pair, double x, double y,
                            const QuadratureRule& rule = {}) {
  const int a = pair.from.alpha, b = pair.to.alpha;
  const double t = pair.from.t, s = pair.to.t;
  if (a == b) return {t_kernel(a, t, x, s, y), AccuracyFlag::ok};
  if (t == s) return {w_kernel(a, b, t, x, y), AccuracyFlag::ok};
  if (!(x >= 0.0) || !(y >= 0.0)) throw DomainError("q_kernel: need x >= 0 and y >= 0");
  if (y == 0.0) return {0.0, AccuracyFlag::ok};
  // Convolution int_0^y T_a W_s dz in v = sqrt(z). The Bessel-integral form carries
  // a factor e^{x/t} against a cancelling oscillatory integral and loses all
  // accuracy once x/t is large; this integrand is positive. Its log is
  // -(v - sqrt x)^2/p + v^2/s up to slowly varying factors.
  const double p = s - t;
  auto f = [&](double v) {
    if (v <= 0.0) return 0.0;
    const double z = v * v;
    return 2.0 * v * t_kernel(a, t, x, s, z) * w_kernel(a, b, s, z, y);
  };
  const double sigma = std::sqrt(p * s / t);
  return {detail::windowed(f, std::sqrt(y), std::sqrt(x) * s / t, sigma, a + b, rule.order),
          AccuracyFlag::ok};
}

inline KernelValue q_bar_kernel(const SpacelikePair& pair, double x, double y,
                                const QuadratureRule& rule = {}) {
  const int a = pair.from.alpha, b = pair.to.alpha;
  const double t = pair.from.t, s = pair.to.t;
  if (a == b) return {t_kernel(a, t, x, s, y), AccuracyFlag::ok};
  if (t == s) return {w_bar_kernel(a, b, x, y), AccuracyFlag::ok};
  if (!(x >= 0.0) || !(y >= 0.0)) throw DomainError("q_bar_kernel: need x >= 0 and y >= 0");
  // Wbar from 0 is a point mass at 0 carrying b!/a!
  if (x == 0.0) return {std::exp(log_factorial(b) - log_factorial(a)) * t_kernel(b, t, 0.0, s, y), AccuracyFlag::ok};
  // Convolution int_0^x Wbar T_b dz in v = sqrt(z); positive integrand.
  auto f = [&](double v) {
    if (v <= 0.0) return 0.0;
    const double z = v * v;
    return 2.0 * v * w_bar_kernel(a, b, x, z) * t_kernel(b, t, z, s, y);
  };
  return {detail::windowed(f, std::sqrt(x), std::sqrt(y), std::sqrt(s - t), a + b, rule.order),
          AccuracyFlag::ok};
}

// Transition density along either ordering.
inline KernelValue transition(Ordering o, PathPoint from, PathPoint to, double x, double y,
                              const QuadratureRule& rule = {}) {
  if (o == Ordering::time_like) return q_kernel(TimelikePair(from, to), x, y, rule);
  return q_bar_kernel(SpacelikePair(from, to), x, y, rule);
}

namespace detail {

inline double pow_ratio_exp(int alpha, double t, double x) {
  // (x/t)^alpha e^{-x/t}, with 0^0 = 1
  if (x == 0.0) return alpha == 0 ? 1.0 : 0.0;
  return std::exp(alpha * std::log(x / t) - x / t);
}

}  // namespace detail

inline double phi(int j, int alpha, double t, double x) {
  if (j < 1) throw InvalidArgument("phi: j must be >= 1");
  if (!(t > 0.0)) throw DomainError("phi: need t > 0");
  const double w = detail::pow_ratio_exp(alpha, t, x);
  return std::exp(log_gamma_ratio(j, alpha) - j * std::log(t)) * w *
         laguerre(alpha, j - 1, x / t);
}

inline double psi(int j, int alpha, double t, double x) {
  if (j < 1) throw InvalidArgument("psi: j must be >= 1");
  if (!(t > 0.0)) throw DomainError("psi: need t > 0");
  return std::pow(t, j - 1) * laguerre(alpha, j - 1, x / t);
}

inline double phi_bar(int j, int alpha, double t, double x) {
  if (j < 1) throw InvalidArgument("phi_bar: j must be >= 1");
  if (!(t > 0.0)) throw DomainError("phi_bar: need t > 0");
  const double w = detail::pow_ratio_exp(alpha, t, x);
  return std::exp(log_factorial(j - 1) - j * std::log(t)) * w * laguerre(alpha, j - 1, x / t);
}

inline double psi_bar(int j, int alpha, double t, double x) {
  if (j < 1) throw InvalidArgument("psi_bar: j must be >= 1");
  if (!(t > 0.0)) throw DomainError("psi_bar: need t > 0");
  return std::exp((j - 1) * std::log(t) - log_factorial(alpha + j - 1)) *
         laguerre(alpha, j - 1, x / t);
}

// Numeric checks of the transition identities. Integrals over the half line are
// truncated at `upper` and split at the supplied breakpoints.
namespace identities {

template <class F>
double half_line(F&& f, std::vector<double> breaks, double upper, double width = 0.25,
                 int order = 20) {
  breaks.push_back(0.0);
  breaks.push_back(upper);
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::remove_if(breaks.begin(), breaks.end(),
                              [&](double b) { return b < 0.0 || b > upper; }),
               breaks.end());
  return integrate_breakpoints(f, breaks, width, order);
}

inline double default_upper(double x, double y, double p) {
  return 2.0 * std::max(x, y) + 60.0 * std::max(p, 0.5) + 20.0;
}

// |int Q(p0,x;p1,y) Q(p1,y;p2,z) dy - Q(p0,x;p2,z)|
inline double chapman_kolmogorov_residual(Ordering o, PathPoint p0, PathPoint p1, PathPoint p2,
                                          double x, double z, const QuadratureRule& rule = {}) {
  auto f = [&](double y) {
    if (y <= 0.0) return 0.0;
    return transition(o, p0, p1, x, y, rule).value * transition(o, p1, p2, y, z, rule).value;
  };
  const double up = default_upper(x, z, p2.t - p0.t);
  const double lhs = half_line(f, {x, z}, up);
  return std::abs(lhs - transition(o, p0, p2, x, z, rule).value);
}

// Time-like: |int T_a W_s dz - int W_t T_b dz|; space-like: the barred analogue.
inline double commutation_residual(Ordering o, int alpha, int beta, double t, double s,
                                   double x, double y) {
  double lhs, rhs;
  const double up = default_upper(x, y, s - t);
  if (o == Ordering::time_like) {
    auto f = [&](double z) {
      return z <= 0.0 ? 0.0 : t_kernel(alpha, t, x, s, z) * w_kernel(alpha, beta, s, z, y);
    };
    auto g = [&](double z) {
      return z <= 0.0 ? 0.0 : w_kernel(alpha, beta, t, x, z) * t_kernel(beta, t, z, s, y);
    };
    lhs = half_line(f, {x, y}, y);
    rhs = half_line(g, {x, y}, up);
  } else {
    auto f = [&](double z) {
      return z <= 0.0 ? 0.0 : t_kernel(alpha, t, x, s, z) * w_bar_kernel(alpha, beta, z, y);
    };
    auto g = [&](double z) {
      return z <= 0.0 ? 0.0 : w_bar_kernel(alpha, beta, x, z) * t_kernel(beta, t, z, s, y);
    };
    lhs = half_line(f, {x, y}, up);
    rhs = half_line(g, {x, y}, x);
  }
  return std::abs(lhs - rhs);
}

// |int phi_i phi_j - delta_ij| with the barred families for space-like paths.
inline double biorthogonality_residual(Ordering o, int i, int j, int alpha, double t) {
  auto f = [&](double x) {
    return o == Ordering::time_like ? phi(i, alpha, t, x) * psi(j, alpha, t, x)
                                    : phi_bar(i, alpha, t, x) * psi_bar(j, alpha, t, x);
  };
  const double up = t * (80.0 + 4.0 * (i + j + alpha));
  return std::abs(half_line(f, {}, up, 0.5 * t) - (i == j ? 1.0 : 0.0));
}

// |int phi_j(a,t,x) Q(x,y) dx - phi_j(b,s,y)|
inline double phi_intertwining_residual(Ordering o, int j, PathPoint from, PathPoint to,
                                        double y, const QuadratureRule& rule = {}) {
  const bool tl = o == Ordering::time_like;
  auto f = [&](double x) {
    if (x <= 0.0) return 0.0;
    const double ph = tl ? phi(j, from.alpha, from.t, x) : phi_bar(j, from.alpha, from.t, x);
    return ph * transition(o, from, to, x, y, rule).value;
  };
  const double up = default_upper(y, from.t * (60.0 + 4.0 * (j + from.alpha)), to.t - from.t);
  const double lhs = half_line(f, {y}, up, 1.0);
  const double rhs = tl ? phi(j, to.alpha, to.t, y) : phi_bar(j, to.alpha, to.t, y);
  return std::abs(lhs - rhs);
}

// |int Q(x,y) psi_j(b,s,y) dy - psi_j(a,t,x)|
inline double psi_intertwining_residual(Ordering o, int j, PathPoint from, PathPoint to,
                                        double x, const QuadratureRule& rule = {}) {
  const bool tl = o == Ordering::time_like;
  auto f = [&](double y) {
    if (y <= 0.0) return 0.0;
    const double ps = tl ? psi(j, to.alpha, to.t, y) : psi_bar(j, to.alpha, to.t, y);
    return transition(o, from, to, x, y, rule).value * ps;
  };
  const double up = default_upper(x, to.t * (40.0 + 4.0 * (j + to.alpha)), to.t - from.t);
  const double lhs = half_line(f, {x}, up, 1.0);
  const double rhs = tl ? psi(j, from.alpha, from.t, x) : psi_bar(j, from.alpha, from.t, x);
  return std::abs(lhs - rhs);
}

}  // namespace identities

}  // namespace bfl
