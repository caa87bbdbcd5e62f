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

#include <gtest/gtest.h>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <limits>

#include "bfl/transition_kernels.hpp"
#include "oracles.hpp"

using namespace bfl;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Bessel-integral representations, evaluated with Boost J.
double q_bessel_form(int a, int b, double t, double s, double x, double y) {
  const double I = oracle::bessel_laplace(a, b, -0.5 * (b - a), s - t, s * x / t, t * y / s);
  return std::pow(s * t, -0.5 * (b - a)) * std::exp(-y / s + x / t) * std::pow(x, -0.5 * a) *
         std::pow(y, 0.5 * b) * I;
}

double q_bar_bessel_form(int a, int b, double t, double s, double x, double y) {
  const double I = oracle::bessel_laplace(a, b, -0.5 * (a - b), s - t, x, y);
  return std::pow(x, -0.5 * a) * std::pow(y, 0.5 * b) * I;
}

}  // namespace

TEST(TKernel, ExampleValue) {
  // e^{-2} I_0(2), frozen from Boost
  EXPECT_NEAR(t_kernel(0, 1.0, 1.0, 2.0, 1.0), 0.30850832255367105, 1e-15);
}

TEST(TKernel, IsADensity) {
  boost::math::quadrature::exp_sinh<double> q;
  for (int a : {0, 2, 5}) {
    const double v = q.integrate([&](double y) { return y > 0.0 ? t_kernel(a, 1.0, 1.0, 2.0, y) : 0.0; }, 0.0, kInf, 1e-13);
    EXPECT_NEAR(v, 1.0, 1e-8) << a;
  }
}

TEST(TKernel, MatchesDirectFormulaAndBesselIntegral) {
  for (int a : {0, 1, 4})
    for (double x : {0.05, 0.7, 3.0})
      for (double y : {0.2, 1.1, 6.0})
        EXPECT_NEAR(t_kernel(a, 0.5, x, 1.3, y) / oracle::besq_density(a, 0.8, x, y), 1.0, 1e-12);
  // time-like representation at (a, t, s, x, y) = (1, 1, 2, 0.5, 1.5)
  {
    const double t = 1.0, s = 2.0, x = 0.5, y = 1.5;
    const double I = oracle::bessel_laplace(1, 1, 0.0, s - t, s * x / t, t * y / s);
    const double rhs = std::exp(-y / s + x / t) * std::sqrt(y / x) * I;
    EXPECT_NEAR(t_kernel(1, t, x, s, y), rhs, 1e-8);
  }
  // space-like representation
  for (int a : {0, 2}) {
    const double t = 1.0, s = 1.6, x = 0.9, y = 2.1;
    const double rhs = std::pow(y / x, 0.5 * a) * oracle::bessel_laplace(a, a, 0.0, s - t, x, y);
    EXPECT_NEAR(t_kernel(a, t, x, s, y), rhs, 1e-8);
  }
}

TEST(TKernel, StableForShortTimeGaps) {
  const double v = t_kernel(3, 1.0, 400.0, 1.0 + 1e-6, 400.0);
  EXPECT_TRUE(std::isfinite(v));
  EXPECT_GT(v, 0.0);
  EXPECT_THROW(t_kernel(0, 2.0, 1.0, 1.0, 1.0), OrderingError);
  EXPECT_THROW(t_kernel(0, 1.0, -1.0, 2.0, 1.0), DomainError);
}

TEST(TKernel, BoundaryLimits) {
  for (int a : {0, 1, 3}) {
    EXPECT_NEAR(t_kernel(a, 1.0, 0.0, 1.8, 1.3), t_kernel(a, 1.0, 1e-12, 1.8, 1.3), 1e-10);
    EXPECT_NEAR(t_kernel(a, 1.0, 0.9, 1.8, 0.0), t_kernel(a, 1.0, 0.9, 1.8, 1e-13), 1e-10);
  }
  // Wbar from 0 is a point mass carrying b!/a!
  const double q0 = q_bar_kernel(SpacelikePair({3, 1.0}, {1, 1.6}), 0.0, 0.7).value;
  const double q1 = q_bar_kernel(SpacelikePair({3, 1.0}, {1, 1.6}), 1e-9, 0.7).value;
  EXPECT_NEAR(q0, q1, 1e-8);
  EXPECT_NEAR(q_kernel(TimelikePair({0, 1.0}, {2, 1.6}), 0.0, 0.7).value,
              q_kernel(TimelikePair({0, 1.0}, {2, 1.6}), 1e-12, 0.7).value, 1e-10);
}

TEST(WKernel, ExampleValues) {
  EXPECT_NEAR(w_kernel(0, 1, 1.0, 1.0, 2.0), 0.36787944117144233, 1e-16);
  EXPECT_EQ(w_kernel(0, 1, 1.0, 2.0, 1.0), 0.0);
  EXPECT_THROW(w_kernel(1, 1, 1.0, 1.0, 2.0), OrderingError);
}

TEST(WKernel, NormalizationIsGammaLaw) {
  for (int n : {1, 2, 5, 30})
    for (double t : {0.4, 1.0, 2.5}) {
      const double x = 0.8, L = 7.0 * t;
      const double v = oracle::panels([&](double y) { return w_kernel(0, n, t, x, y); }, x, x + L, 0.05 * t);
      EXPECT_NEAR(v, boost::math::gamma_p(static_cast<double>(n), L / t), 1e-10) << n << " " << t;
    }
}

TEST(WKernel, LargeShiftStaysFinite) {
  const double v = w_kernel(0, 300, 1.0, 1.0, 301.0);
  EXPECT_TRUE(std::isfinite(v));
  EXPECT_GT(v, 0.0);
}

TEST(WBarKernel, ExampleValues) {
  EXPECT_DOUBLE_EQ(w_bar_kernel(1, 0, 2.0, 1.0), 0.5);
  EXPECT_EQ(w_bar_kernel(1, 0, 1.0, 2.0), 0.0);
  EXPECT_THROW(w_bar_kernel(0, 1, 1.0, 0.5), OrderingError);
}

TEST(WBarKernel, BetaIntegral) {
  // int_0^x x^{-a} y^b (x-y)^{a-b-1} / (a-b-1)! dy = b! / a!
  for (auto [a, b] : {std::pair{3, 1}, {1, 0}, {4, 0}, {5, 3}}) {
    const double v = oracle::adaptive([&](double y) { return w_bar_kernel(a, b, 5.0, y); }, 0.0, 5.0);
    EXPECT_NEAR(v, std::tgamma(b + 1.0) / std::tgamma(a + 1.0), 1e-10) << a << " " << b;
  }
}

TEST(QKernel, PureBranchesAreExact) {
  EXPECT_EQ(q_kernel(TimelikePair({2, 1.0}, {2, 1.7}), 0.8, 1.9).value, t_kernel(2, 1.0, 0.8, 1.7, 1.9));
  EXPECT_EQ(q_kernel(TimelikePair({1, 1.0}, {3, 1.0}), 0.8, 1.9).value, w_kernel(1, 3, 1.0, 0.8, 1.9));
  EXPECT_EQ(q_bar_kernel(SpacelikePair({2, 1.0}, {2, 1.7}), 0.8, 1.9).value, t_kernel(2, 1.0, 0.8, 1.7, 1.9));
  EXPECT_EQ(q_bar_kernel(SpacelikePair({3, 1.0}, {1, 1.0}), 1.9, 0.8).value, w_bar_kernel(3, 1, 1.9, 0.8));
}

TEST(QKernel, MixedBranchMatchesConvolution) {
  auto conv = [](double x, double y) {
    return oracle::adaptive([&](double z) { return z > 0.0 ? oracle::besq_density(0, 1.0, x, z) * w_kernel(0, 1, 2.0, z, y) : 0.0; }, 0.0, y);
  };
  EXPECT_NEAR(q_kernel(TimelikePair({0, 1.0}, {1, 2.0}), 1.0, 2.0).value, conv(1.0, 2.0), 1e-6);
  auto conv_bar = [](double x, double y) {
    return oracle::adaptive([&](double z) { return z > 0.0 ? w_bar_kernel(2, 1, x, z) * oracle::besq_density(1, 1.0, z, y) : 0.0; }, 0.0, x);
  };
  EXPECT_NEAR(q_bar_kernel(SpacelikePair({2, 1.0}, {1, 2.0}), 2.0, 1.0).value, conv_bar(2.0, 1.0), 1e-6);
}

TEST(QKernel, MixedBranchMatchesBesselIntegral) {
  for (auto [a, b] : {std::pair{0, 1}, {1, 3}, {2, 4}})
    for (double x : {0.3, 1.2, 2.5})
      for (double y : {0.5, 2.0, 4.0}) {
        const double t = 1.0, s = 1.6;
        EXPECT_NEAR(q_kernel(TimelikePair({a, t}, {b, s}), x, y).value, q_bessel_form(a, b, t, s, x, y), 1e-8)
            << a << b << " " << x << " " << y;
        EXPECT_NEAR(q_bar_kernel(SpacelikePair({b, t}, {a, s}), y, x).value, q_bar_bessel_form(b, a, t, s, y, x), 1e-8)
            << b << a << " " << y << " " << x;
      }
}

TEST(QKernel, LargeStartingPointHasNoCancellationError) {
  // transition from far above the target: tiny, positive, and equal to the convolution
  const double x = 60.0, y = 2.0;
  const double v = q_kernel(TimelikePair({1, 1.0}, {3, 1.7}), x, y).value;
  const double conv = oracle::panels(
      [&](double z) { return z > 0.0 ? oracle::besq_density(1, 0.7, x, z) * w_kernel(1, 3, 1.7, z, y) : 0.0; }, 0.0, y, 0.01);
  EXPECT_GT(v, 0.0);
  EXPECT_NEAR(v / conv, 1.0, 1e-10);
}

TEST(TransitionPairs, RejectBadOrdering) {
  EXPECT_THROW(TimelikePair({2, 1.0}, {1, 2.0}), OrderingError);
  EXPECT_THROW(TimelikePair({1, 2.0}, {2, 1.0}), OrderingError);
  EXPECT_THROW(TimelikePair({1, 1.0}, {1, 1.0}), OrderingError);
  EXPECT_THROW(SpacelikePair({1, 1.0}, {2, 2.0}), OrderingError);
  EXPECT_THROW(TimelikePair({0, 0.0}, {1, 1.0}), DomainError);
}

TEST(Families, ExampleValues) {
  for (int a : {0, 3})
    for (double x : {0.1, 2.0}) EXPECT_EQ(psi(1, a, 1.7, x), 1.0);
  for (double x : {0.0, 0.4, 3.0}) EXPECT_NEAR(phi(1, 0, 1.0, x), std::exp(-x), 1e-16);
}

TEST(Families, Biorthogonality) {
  for (int a : {0, 2})
    for (double t : {0.6, 1.5})
      for (int i = 1; i <= 10; ++i)
        for (int j = 1; j <= 10; ++j) {
          auto f = [&](double x) { return phi(i, a, t, x) * psi(j, a, t, x); };
          auto g = [&](double x) { return phi_bar(i, a, t, x) * psi_bar(j, a, t, x); };
          const double d = i == j ? 1.0 : 0.0;
          EXPECT_NEAR(oracle::panels(f, 0.0, 200.0 * t, 0.5 * t), d, 1e-8) << a << " " << t << " " << i << " " << j;
          EXPECT_NEAR(oracle::panels(g, 0.0, 200.0 * t, 0.5 * t), d, 1e-8) << a << " " << t << " " << i << " " << j;
        }
}

TEST(Identities, ChapmanKolmogorov) {
  using identities::chapman_kolmogorov_residual;
  const auto tl = Ordering::time_like, sl = Ordering::space_like;
  EXPECT_LT(chapman_kolmogorov_residual(tl, {0, 1.0}, {0, 1.4}, {0, 2.0}, 0.7, 1.3), 1e-6);
  EXPECT_LT(chapman_kolmogorov_residual(tl, {0, 1.0}, {1, 1.0}, {2, 1.0}, 0.7, 2.3), 1e-6);
  EXPECT_LT(chapman_kolmogorov_residual(tl, {0, 1.0}, {1, 1.0}, {1, 1.5}, 0.7, 1.3), 1e-6);
  EXPECT_LT(chapman_kolmogorov_residual(sl, {2, 1.0}, {1, 1.0}, {1, 1.5}, 1.6, 0.9), 1e-6);
  EXPECT_LT(chapman_kolmogorov_residual(sl, {3, 1.0}, {2, 1.0}, {0, 1.0}, 2.6, 0.9), 1e-6);
}

TEST(Identities, Commutation) {
  for (auto o : {Ordering::time_like, Ordering::space_like})
    for (auto [lo, hi] : {std::pair{0, 1}, {1, 3}})
      for (double x : {0.4, 1.5})
        for (double y : {0.8, 2.6}) {
          const int a = o == Ordering::time_like ? lo : hi, b = o == Ordering::time_like ? hi : lo;
          EXPECT_LT(identities::commutation_residual(o, a, b, 1.0, 1.8, x, y), 1e-6)
              << to_string(o) << " " << a << b << " " << x << " " << y;
        }
}

TEST(Identities, Intertwining) {
  const auto tl = Ordering::time_like, sl = Ordering::space_like;
  for (int j : {1, 4}) {
    EXPECT_LT(identities::phi_intertwining_residual(tl, j, {0, 1.0}, {2, 1.5}, 1.1), 1e-6);
    EXPECT_LT(identities::psi_intertwining_residual(tl, j, {0, 1.0}, {2, 1.5}, 1.1), 1e-6);
    EXPECT_LT(identities::phi_intertwining_residual(tl, j, {1, 1.0}, {3, 1.0}, 0.6), 1e-6);
    EXPECT_LT(identities::psi_intertwining_residual(tl, j, {1, 1.0}, {3, 1.0}, 0.6), 1e-6);
    EXPECT_LT(identities::phi_intertwining_residual(sl, j, {2, 1.0}, {0, 1.5}, 1.1), 1e-6);
    EXPECT_LT(identities::psi_intertwining_residual(sl, j, {2, 1.0}, {0, 1.5}, 1.1), 1e-6);
    EXPECT_LT(identities::phi_intertwining_residual(sl, j, {3, 1.0}, {1, 1.0}, 0.6), 1e-6);
    EXPECT_LT(identities::psi_intertwining_residual(sl, j, {3, 1.0}, {1, 1.0}, 0.6), 1e-6);
  }
}

TEST(Identities, WAsLimitOfBesselIntegral) {
  // W and Wbar as the p -> 0 limit of their regulated Bessel integrals
  for (auto [a, b] : {std::pair{0, 1}, {1, 3}}) {
    const double x = 0.7, y = 1.9, t = 1.3;
    const int n = b - a;
    const double I0 = oracle::extrapolate_to_zero(
        [&](double p) { return oracle::bessel_laplace(a, b, -0.5 * n, p, x, y); }, 0.05, 6);
    const double rhs = std::pow(t, -n) * std::exp(-(y - x) / t) * std::pow(y, 0.5 * b) * std::pow(x, -0.5 * a) * I0;
    EXPECT_NEAR(w_kernel(a, b, t, x, y), rhs, 1e-7) << a << b;
    const double J0 = oracle::extrapolate_to_zero(
        [&](double p) { return oracle::bessel_laplace(b, a, -0.5 * n, p, y, x); }, 0.05, 6);
    EXPECT_NEAR(w_bar_kernel(b, a, y, x), std::pow(x, 0.5 * a) * std::pow(y, -0.5 * b) * J0, 1e-7) << b << a;
  }
}
