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
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bfl/errors.hpp"
#include "bfl/rng.hpp"

namespace bfl {

namespace detail {

inline void require_sorted(const std::vector<double>& v, const char* who) {
  if (!std::is_sorted(v.begin(), v.end()))
    throw DomainError(std::string(who) + ": input must be sorted");
}

}  // namespace detail

// Strict: a1 < b1 < a2 < ... < aN < bN. Weak: the same chain with <=.
inline bool interlaces(const std::vector<double>& a, const std::vector<double>& b, bool strict) {
  if (a.size() != b.size()) throw InvalidArgument("interlaces: lengths differ");
  detail::require_sorted(a, "interlaces");
  detail::require_sorted(b, "interlaces");
  auto ok = [strict](double lo, double hi) { return strict ? lo < hi : lo <= hi; };
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!ok(a[i], b[i])) return false;
    if (i + 1 < a.size() && !ok(b[i], a[i + 1])) return false;
  }
  return true;
}

// det[1(a_i < b_j)] by fraction-free (Bareiss) elimination.
inline int sasamoto_det(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw InvalidArgument("sasamoto_det: lengths differ");
  detail::require_sorted(a, "sasamoto_det");
  detail::require_sorted(b, "sasamoto_det");
  for (double u : a)
    for (double v : b)
      if (u == v) throw PreconditionError("sasamoto_det: a and b share a value");
  const std::size_t n = a.size();
  if (n == 0) return 1;
  std::vector<std::vector<std::int64_t>> M(n, std::vector<std::int64_t>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) M[i][j] = a[i] < b[j] ? 1 : 0;
  std::int64_t sign = 1, prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (M[k][k] == 0) {
      std::size_t p = k + 1;
      while (p < n && M[p][k] == 0) ++p;
      if (p == n) return 0;
      std::swap(M[k], M[p]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j)
        M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) / prev;
    prev = M[k][k];
  }
  return static_cast<int>(sign * M[n - 1][n - 1]);
}

struct InterlacingWindow {
  int k = 1;
  int a = 0, b = 1;
  std::vector<double> x, y;
  std::optional<std::vector<double>> z;  // z^a, ..., z^b

  int interior() const { return b - a - 1; }

  void validate() const {
    if (k < 1) throw InvalidArgument("InterlacingWindow: k must be >= 1");
    if (a < 0 || !(a < b)) throw InvalidArgument("InterlacingWindow: need 0 <= a < b");
    if (static_cast<int>(x.size()) != k || static_cast<int>(y.size()) != k)
      throw InvalidArgument("InterlacingWindow: x and y must have k entries");
    detail::require_sorted(x, "InterlacingWindow");
    detail::require_sorted(y, "InterlacingWindow");
    if (z && static_cast<int>(z->size()) != b - a + 1)
      throw InvalidArgument("InterlacingWindow: z must have b - a + 1 entries");
  }
};

struct BridgeConfiguration {
  int a = 0, b = 1;
  std::vector<std::vector<double>> lines;  // lines[l - a - 1] = w^l
};

namespace detail {

// The chain V_a <= V_{a+1} <= ... <= V_b, where V_l = (w^l, z^l), as a list of
// pairwise constraints lhs <= rhs on slots. Slot (l, j): l in [0, b-a], j in
// [0, K); rows 0 and b-a are the constants x, y.
struct Chain {
  int rows, K, k;
  std::vector<std::pair<int, int>> leq;  // flat slot indices

  explicit Chain(const InterlacingWindow& w) : rows(w.b - w.a + 1), K(w.k + (w.z ? 1 : 0)), k(w.k) {
    auto id = [&](int l, int j) { return l * K + j; };
    for (int l = 0; l + 1 < rows; ++l)
      for (int j = 0; j < K; ++j) {
        leq.push_back({id(l, j), id(l + 1, j)});
        if (j + 1 < K) leq.push_back({id(l + 1, j), id(l, j + 1)});
      }
  }

  std::vector<double> fill(const InterlacingWindow& w, const std::vector<std::vector<double>>& lines) const {
    std::vector<double> v(rows * K);
    for (int l = 0; l < rows; ++l) {
      for (int j = 0; j < k; ++j) {
        if (l == 0) v[l * K + j] = w.x[j];
        else if (l == rows - 1) v[l * K + j] = w.y[j];
        else v[l * K + j] = lines[l - 1][j];
      }
      if (w.z) v[l * K + k] = (*w.z)[l];
    }
    return v;
  }

  bool fixed(int slot) const {
    const int l = slot / K, j = slot % K;
    return l == 0 || l == rows - 1 || j == k;
  }

  bool holds(const std::vector<double>& v) const {
    for (auto [lo, hi] : leq)
      if (!(v[lo] <= v[hi])) return false;
    return true;
  }
};

}  // namespace detail

inline bool satisfies_chain(const InterlacingWindow& w, const BridgeConfiguration& c) {
  const detail::Chain ch(w);
  if (static_cast<int>(c.lines.size()) != w.interior()) return false;
  return ch.holds(ch.fill(w, c.lines));
}

// Non-emptiness of the interlacing set: propagate the least lower bounds
// through the chain and check the resulting assignment.
inline bool window_compatible(const InterlacingWindow& w) {
  w.validate();
  const detail::Chain ch(w);
  std::vector<std::vector<double>> lines(w.interior(),
                                         std::vector<double>(w.k, -std::numeric_limits<double>::infinity()));
  auto v = ch.fill(w, lines);
  for (std::size_t pass = 0; pass <= v.size(); ++pass) {
    bool changed = false;
    for (auto [lo, hi] : ch.leq)
      if (!ch.fixed(hi) && v[lo] > v[hi]) {
        v[hi] = v[lo];
        changed = true;
      }
    if (!changed) break;
  }
  return ch.holds(v);
}

struct BridgeDraw {
  BridgeConfiguration config;
  std::uint64_t attempts = 0;
};

// Rejection sampler: per line, sorted uniforms on [x_j, y_j]; accept iff the
// full chain holds. Exactly uniform on the interlacing set.
inline BridgeDraw sample_bridge(const InterlacingWindow& w, RngStream& rng,
                                std::uint64_t max_attempts = 10'000'000) {
  if (!window_compatible(w)) throw PreconditionError("sample_bridge: empty interlacing set");
  const int m = w.interior();
  BridgeDraw out;
  out.config.a = w.a;
  out.config.b = w.b;
  out.config.lines.assign(m, std::vector<double>(w.k));
  if (m == 0) return out;
  const detail::Chain ch(w);
  std::vector<double> u(m);
  for (std::uint64_t attempt = 1; attempt <= max_attempts; ++attempt) {
    for (int j = 0; j < w.k; ++j) {
      for (int l = 0; l < m; ++l) u[l] = rng.uniform(w.x[j], w.y[j]);
      std::sort(u.begin(), u.end());
      for (int l = 0; l < m; ++l) out.config.lines[l][j] = u[l];
    }
    if (ch.holds(ch.fill(w, out.config.lines))) {
      out.attempts = attempt;
      return out;
    }
  }
  throw StarvationError("sample_bridge: no acceptance in " + std::to_string(max_attempts) +
                            " attempts (empirical acceptance rate 0)",
                        0.0);
}

// Lines of the field at one time, rows[alpha - alpha_min] ascending.
struct LineEnsemble {
  int alpha_min = 0;
  std::vector<std::vector<double>> rows;
};

inline InterlacingWindow gibbs_window(const LineEnsemble& f, int a, int b, int k) {
  if (a < f.alpha_min || b >= f.alpha_min + static_cast<int>(f.rows.size()) || !(a < b))
    throw RangeError("gibbs_window: alpha window outside the ensemble");
  const auto& ra = f.rows[a - f.alpha_min];
  const auto& rb = f.rows[b - f.alpha_min];
  const int N = static_cast<int>(ra.size());
  if (k < 1 || k > N) throw RangeError("gibbs_window: k must lie in [1, N]");
  InterlacingWindow w;
  w.k = k;
  w.a = a;
  w.b = b;
  w.x.assign(ra.begin(), ra.begin() + k);
  w.y.assign(rb.begin(), rb.begin() + k);
  if (k < N) {
    std::vector<double> z;
    for (int l = a; l <= b; ++l) z.push_back(f.rows[l - f.alpha_min].at(k));
    w.z = std::move(z);
  }
  return w;
}

struct GibbsResult {
  LineEnsemble field;
  std::uint64_t attempts = 0;
};

// Replaces lines 1..k at alphas a+1..b-1 by a uniform bridge draw.
inline GibbsResult gibbs_resample(const LineEnsemble& f, int a, int b, int k, RngStream& rng,
                                  std::uint64_t max_attempts = 10'000'000) {
  const auto w = gibbs_window(f, a, b, k);
  auto draw = sample_bridge(w, rng, max_attempts);
  GibbsResult out{f, draw.attempts};
  for (int l = a + 1; l < b; ++l) {
    auto& row = out.field.rows[l - f.alpha_min];
    for (int j = 0; j < k; ++j) row[j] = draw.config.lines[l - a - 1][j];
  }
  return out;
}

}  // namespace bfl
