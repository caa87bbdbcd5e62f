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

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "bfl/correlation_kernels.hpp"
#include "bfl/errors.hpp"
#include "bfl/parallel.hpp"
#include "bfl/quadrature.hpp"

namespace bfl {

struct Interval {
  std::size_t slot = 0;  // path index
  double lower = 0.0;
  double upper = 0.0;
  int group = 0;         // count_distribution groups; ignored by gap_probability
};

struct IntervalSet {
  std::vector<Interval> intervals;

  IntervalSet() = default;
  IntervalSet(std::initializer_list<Interval> l) : intervals(l) {}

  bool empty() const { return intervals.empty(); }

  int group_count() const {
    int g = 0;
    for (const auto& i : intervals) g = std::max(g, i.group + 1);
    return g;
  }

  void validate() const {
    for (std::size_t a = 0; a < intervals.size(); ++a) {
      const auto& I = intervals[a];
      if (!std::isfinite(I.lower) || !std::isfinite(I.upper))
        throw InvalidArgument("IntervalSet: bounds must be finite");
      if (I.lower < 0.0) throw DomainError("IntervalSet: lower bound must be >= 0");
      if (!(I.lower < I.upper)) throw InvalidArgument("IntervalSet: need lower < upper");
      if (I.group < 0) throw InvalidArgument("IntervalSet: negative group");
      for (std::size_t b = 0; b < a; ++b) {
        const auto& J = intervals[b];
        if (I.slot == J.slot && I.lower < J.upper && J.lower < I.upper)
          throw InvalidArgument("IntervalSet: overlapping intervals at one path index");
      }
    }
  }
};

struct DiscretizedOperator {
  struct Node {
    std::size_t slot;
    double x;
    double w;
    int group;
  };
  std::vector<Node> nodes;
  Eigen::MatrixXd matrix;
  std::size_t warnings = 0;  // kernel evaluations that raised a tail warning

  AccuracyFlag flag() const { return warnings ? AccuracyFlag::tail_warning : AccuracyFlag::ok; }
};

// Nystrom discretization with weight-symmetrized entries sqrt(w_a) K sqrt(w_b).
inline DiscretizedOperator discretize(const KernelSpec& kernel, const IntervalSet& E,
                                      int order_per_interval, unsigned workers = 0) {
  E.validate();
  if (order_per_interval < 1) throw InvalidArgument("discretize: order must be >= 1");
  for (const auto& I : E.intervals)
    if (I.slot >= kernel.size()) throw RangeError("discretize: interval slot outside path");
  DiscretizedOperator op;
  const auto& gl = gauss_legendre(order_per_interval);
  for (const auto& I : E.intervals) {
    const double h = 0.5 * (I.upper - I.lower), c = 0.5 * (I.upper + I.lower);
    for (int q = 0; q < order_per_interval; ++q)
      op.nodes.push_back({I.slot, c + h * gl.nodes[q], h * gl.weights[q], I.group});
  }
  const std::size_t n = op.nodes.size();
  op.matrix.resize(n, n);
  std::vector<std::size_t> warn(n, 0);
  parallel_for(n, [&](std::size_t a) {
    const auto& A = op.nodes[a];
    for (std::size_t b = 0; b < n; ++b) {
      const auto& B = op.nodes[b];
      const auto kv = evaluate(kernel, A.slot, A.x, B.slot, B.x);
      op.matrix(a, b) = std::sqrt(A.w) * kv.value * std::sqrt(B.w);
      if (kv.flag != AccuracyFlag::ok) ++warn[a];
    }
  }, workers);
  for (auto w : warn) op.warnings += w;
  return op;
}

struct GapResult {
  double gap = 1.0;
  AccuracyFlag flag = AccuracyFlag::ok;
  double expected_count = 0.0;  // trace of the discretized operator
};

inline GapResult gap_probability_detailed(const KernelSpec& kernel, const IntervalSet& E,
                                          int order, unsigned workers = 0) {
  if (order < 4) throw InvalidArgument("gap_probability: order must be >= 4");
  if (E.empty()) return {};
  const auto op = discretize(kernel, E, order, workers);
  const Eigen::MatrixXd A = Eigen::MatrixXd::Identity(op.matrix.rows(), op.matrix.cols()) - op.matrix;
  return {A.partialPivLu().determinant(), op.flag(), op.matrix.trace()};
}

inline double gap_probability(const KernelSpec& kernel, const IntervalSet& E, int order,
                              unsigned workers = 0) {
  return gap_probability_detailed(kernel, E, order, workers).gap;
}

struct CountTable {
  std::vector<int> n_max;             // per group
  std::vector<double> probabilities;  // row-major, last group fastest
  std::vector<double> expected;       // per group, trace of the group block
  std::vector<int> nodes_per_group;   // interpolation points used per group
  AccuracyFlag flag = AccuracyFlag::ok;

  double at(const std::vector<int>& n) const {
    std::size_t idx = 0;
    for (std::size_t g = 0; g < n_max.size(); ++g) {
      if (n[g] < 0 || n[g] > n_max[g]) throw RangeError("CountTable: index out of range");
      idx = idx * (n_max[g] + 1) + n[g];
    }
    return probabilities[idx];
  }
};

// D(z) = det(I + sum_g (z_g - 1) M_g) is a polynomial in each z_g of degree at most
// the node count of group g. It is sampled on roots of unity and the Taylor
// coefficients are read off with a discrete Fourier transform.
inline CountTable count_distribution(const KernelSpec& kernel, const IntervalSet& E,
                                     const std::vector<int>& n_max, int order,
                                     unsigned workers = 0) {
  if (order < 4) throw InvalidArgument("count_distribution: order must be >= 4");
  const int G = E.group_count();
  if (static_cast<int>(n_max.size()) != G)
    throw InvalidArgument("count_distribution: need one n_max per group");
  const auto op = discretize(kernel, E, order, workers);
  CountTable out;
  out.n_max = n_max;
  out.flag = op.flag();
  out.expected.assign(G, 0.0);
  std::vector<int> degree(G, 0);
  for (std::size_t a = 0; a < op.nodes.size(); ++a) {
    ++degree[op.nodes[a].group];
    out.expected[op.nodes[a].group] += op.matrix(a, a);
  }
  std::vector<int> m(G);
  for (int g = 0; g < G; ++g) {
    if (n_max[g] < 0) throw InvalidArgument("count_distribution: negative n_max");
    if (n_max[g] > degree[g])
      throw RangeError("count_distribution: n_max exceeds the polynomial degree of group " +
                       std::to_string(g));
    const double mu = std::max(0.0, out.expected[g]);
    const int enough = static_cast<int>(std::ceil(mu + 12.0 * std::sqrt(mu) + 16.0));
    m[g] = std::min(degree[g] + 1, std::max(n_max[g] + 1, enough));
  }
  out.nodes_per_group = m;
  std::size_t total = 1;
  for (int g = 0; g < G; ++g) total *= m[g];
  std::vector<std::complex<double>> D(total);
  const Eigen::MatrixXcd Mc = op.matrix.cast<std::complex<double>>();
  const auto n = op.nodes.size();
  parallel_for(total, [&](std::size_t flat) {
    std::vector<std::complex<double>> z(G);
    std::size_t r = flat;
    for (int g = G - 1; g >= 0; --g) {
      const int k = static_cast<int>(r % m[g]);
      r /= m[g];
      z[g] = std::polar(1.0, 2.0 * std::numbers::pi * k / m[g]);
    }
    Eigen::MatrixXcd A = Mc;
    for (std::size_t a = 0; a < n; ++a) A.row(a) *= (z[op.nodes[a].group] - 1.0);
    A += Eigen::MatrixXcd::Identity(n, n);
    D[flat] = A.partialPivLu().determinant();
  }, workers);
  std::size_t out_size = 1;
  for (int g = 0; g < G; ++g) out_size *= n_max[g] + 1;
  out.probabilities.assign(out_size, 0.0);
  for (std::size_t o = 0; o < out_size; ++o) {
    std::vector<int> nn(G);
    std::size_t r = o;
    for (int g = G - 1; g >= 0; --g) {
      nn[g] = static_cast<int>(r % (n_max[g] + 1));
      r /= n_max[g] + 1;
    }
    std::complex<double> acc = 0.0;
    for (std::size_t flat = 0; flat < total; ++flat) {
      std::size_t rr = flat;
      double phase = 0.0;
      for (int g = G - 1; g >= 0; --g) {
        const int k = static_cast<int>(rr % m[g]);
        rr /= m[g];
        phase -= 2.0 * std::numbers::pi * static_cast<double>((static_cast<long long>(k) * nn[g]) % m[g]) / m[g];
      }
      acc += D[flat] * std::polar(1.0, phase);
    }
    out.probabilities[o] = acc.real() / static_cast<double>(total);
  }
  return out;
}

}  // namespace bfl
