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
#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "bfl/errors.hpp"
#include "bfl/rng.hpp"
#include "bfl/types.hpp"

namespace bfl {

struct FieldGrid {
  int N = 1;
  std::vector<int> alphas;
  std::vector<double> times;  // absolute times

  void validate() const {
    if (N < 1) throw InvalidArgument("FieldGrid: N must be >= 1");
    if (alphas.empty() || times.empty()) throw InvalidArgument("FieldGrid: empty grid");
    for (std::size_t i = 0; i < alphas.size(); ++i) {
      if (alphas[i] < 0) throw InvalidArgument("FieldGrid: negative alpha");
      if (i && !(alphas[i] > alphas[i - 1]))
        throw InvalidArgument("FieldGrid: alphas must be strictly increasing");
    }
    for (std::size_t i = 0; i < times.size(); ++i) {
      if (!std::isfinite(times[i]) || !(times[i] > 0.0))
        throw InvalidArgument("FieldGrid: times must be finite and > 0");
      if (i && !(times[i] > times[i - 1]))
        throw InvalidArgument("FieldGrid: times must be strictly increasing");
    }
  }

  // Grid at the absolute times 1 + t/4N of the given hard-edge times.
  static FieldGrid hard_edge(int N, std::vector<int> alphas, const std::vector<double>& scaled) {
    FieldGrid g{N, std::move(alphas), {}};
    for (double t : scaled) {
      if (!(t > -4.0 * N)) throw DomainError("hard-edge time must exceed -4N");
      g.times.push_back(1.0 + t / (4.0 * N));
    }
    g.validate();
    return g;
  }

  int max_alpha() const { return alphas.back(); }
};

struct FieldSample {
  FieldGrid grid;
  std::uint64_t seed = 0, stream = 0;
  // increments[k] holds B(t_k) - B(t_{k-1}) (t_{-1} = 0), (N + max alpha) x N.
  std::vector<Eigen::MatrixXcd> increments;
  // eigenvalues[a * times + k]: ascending eigenvalues of A*A at (alphas[a], times[k]).
  std::vector<std::vector<double>> eigenvalues;

  const std::vector<double>& at(std::size_t alpha_index, std::size_t time_index) const {
    return eigenvalues.at(alpha_index * grid.times.size() + time_index);
  }

  std::size_t alpha_index(int alpha) const {
    const auto it = std::find(grid.alphas.begin(), grid.alphas.end(), alpha);
    if (it == grid.alphas.end()) throw RangeError("FieldSample: alpha not on grid");
    return static_cast<std::size_t>(it - grid.alphas.begin());
  }

  // A^N(alpha, t_k): first N + alpha rows of the cumulative increments.
  Eigen::MatrixXcd matrix(std::size_t alpha_index, std::size_t time_index) const {
    Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(increments.at(0).rows(), grid.N);
    for (std::size_t k = 0; k <= time_index; ++k) A += increments[k];
    return A.topRows(grid.N + grid.alphas.at(alpha_index));
  }
};

inline FieldSample sample_field(const FieldGrid& grid, RngStream rng) {
  grid.validate();
  FieldSample s;
  s.grid = grid;
  s.seed = rng.seed();
  s.stream = rng.stream();
  const int N = grid.N, rows = N + grid.max_alpha();
  double prev = 0.0;
  for (double t : grid.times) {
    const double sd = std::sqrt(0.5 * (t - prev));
    prev = t;
    Eigen::MatrixXcd d(rows, N);
    for (int c = 0; c < N; ++c)
      for (int r = 0; r < rows; ++r) {
        const double re = rng.normal(), im = rng.normal();
        d(r, c) = {sd * re, sd * im};
      }
    s.increments.push_back(std::move(d));
  }
  const std::size_t nt = grid.times.size();
  s.eigenvalues.resize(grid.alphas.size() * nt);
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(rows, N);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver;
  for (std::size_t k = 0; k < nt; ++k) {
    A += s.increments[k];
    // Gram matrix for the largest alpha, then downdated row block by row block.
    Eigen::MatrixXcd H = A.adjoint() * A;
    for (std::size_t a = grid.alphas.size(); a-- > 0;) {
      if (a + 1 < grid.alphas.size()) {
        const auto blk = A.middleRows(N + grid.alphas[a], grid.alphas[a + 1] - grid.alphas[a]);
        H.noalias() -= blk.adjoint() * blk;
      }
      solver.compute(H, Eigen::EigenvaluesOnly);
      if (solver.info() != Eigen::Success)
        throw SimulationError("eigensolver failed at alpha=" + std::to_string(grid.alphas[a]) +
                              ", t=" + std::to_string(grid.times[k]));
      const auto& ev = solver.eigenvalues();
      s.eigenvalues[a * nt + k].assign(ev.data(), ev.data() + ev.size());
    }
  }
  return s;
}

// 4N X(alpha, 1 + t/4N) at the requested hard-edge times.
struct ScaledSample {
  int N = 1;
  std::vector<int> alphas;
  std::vector<double> times;               // hard-edge times
  std::vector<std::vector<double>> lines;  // lines[a * times + k]

  const std::vector<double>& at(std::size_t alpha_index, std::size_t time_index) const {
    return lines.at(alpha_index * times.size() + time_index);
  }
};

inline std::size_t match_time(const FieldGrid& grid, double absolute) {
  for (std::size_t k = 0; k < grid.times.size(); ++k)
    if (std::abs(grid.times[k] - absolute) <= 1e-12 * std::max(1.0, absolute)) return k;
  throw RangeError("hard_edge_rescale: absolute time " + std::to_string(absolute) +
                   " is not on the sampled grid");
}

inline ScaledSample hard_edge_rescale(const FieldSample& sample,
                                      const std::vector<double>& t_targets) {
  const int N = sample.grid.N;
  ScaledSample out{N, sample.grid.alphas, t_targets, {}};
  std::vector<std::size_t> idx;
  for (double t : t_targets) {
    if (!(t >= -4.0 * N)) throw RangeError("hard_edge_rescale: need t >= -4N");
    idx.push_back(match_time(sample.grid, 1.0 + t / (4.0 * N)));
  }
  out.lines.resize(sample.grid.alphas.size() * t_targets.size());
  for (std::size_t a = 0; a < sample.grid.alphas.size(); ++a)
    for (std::size_t k = 0; k < t_targets.size(); ++k) {
      auto v = sample.at(a, idx[k]);
      for (auto& x : v) x *= 4.0 * N;
      out.lines[a * t_targets.size() + k] = std::move(v);
    }
  return out;
}

}  // namespace bfl
