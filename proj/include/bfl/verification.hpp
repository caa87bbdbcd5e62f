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
#include <functional>
#include <numbers>
#include <utility>
#include <vector>

#include "bfl/errors.hpp"
#include "bfl/fredholm.hpp"
#include "bfl/quadrature.hpp"

namespace bfl {

struct BinnedEstimate {
  std::vector<double> edges;
  std::vector<double> estimate;
  std::vector<double> std_error;
  std::size_t replicas = 0;

  std::size_t bins() const { return estimate.size(); }
};

// Bin-pair estimate, row-major over (x bin, y bin).
struct BinnedEstimate2D {
  std::vector<double> edges_x, edges_y;
  std::vector<double> estimate;
  std::vector<double> std_error;
  std::size_t replicas = 0;

  std::size_t nx() const { return edges_x.size() - 1; }
  std::size_t ny() const { return edges_y.size() - 1; }
};

struct ComparisonReport {
  std::vector<double> z;       // per bin; NaN for excluded bins
  double max_abs_z = 0.0;
  double fraction_within_3 = 1.0;
  std::size_t excluded = 0;    // zero-SE bins
  bool pass = true;
};

namespace detail {

inline void check_edges(const std::vector<double>& e) {
  if (e.size() < 2) throw InvalidArgument("bins: need at least two edges");
  for (std::size_t i = 0; i + 1 < e.size(); ++i)
    if (!(e[i] < e[i + 1])) throw InvalidArgument("bins: edges must be strictly increasing");
}

inline long bin_of(const std::vector<double>& e, double x) {
  if (x < e.front() || x >= e.back()) return -1;
  return static_cast<long>(std::upper_bound(e.begin(), e.end(), x) - e.begin()) - 1;
}

// Per-replica values -> mean and standard error of the mean.
struct Moments {
  std::vector<double> sum, sum2;
  explicit Moments(std::size_t n) : sum(n, 0.0), sum2(n, 0.0) {}
  void add(std::size_t i, double v) {
    sum[i] += v;
    sum2[i] += v * v;
  }
  void finish(std::size_t R, std::vector<double>& mean, std::vector<double>& se) const {
    mean.resize(sum.size());
    se.resize(sum.size());
    for (std::size_t i = 0; i < sum.size(); ++i) {
      mean[i] = sum[i] / R;
      const double var = R > 1 ? std::max(0.0, (sum2[i] - R * mean[i] * mean[i]) / (R - 1)) : 0.0;
      se[i] = std::sqrt(var / R);
    }
  }
};

inline ComparisonReport report(std::vector<double> z) {
  ComparisonReport r;
  std::size_t used = 0, within = 0;
  for (double v : z) {
    if (std::isnan(v)) {
      ++r.excluded;
      continue;
    }
    ++used;
    if (std::abs(v) <= 3.0) ++within;
    r.max_abs_z = std::max(r.max_abs_z, std::abs(v));
  }
  r.fraction_within_3 = used ? static_cast<double>(within) / used : 1.0;
  r.pass = r.fraction_within_3 >= 0.95 && r.max_abs_z <= 5.0;
  r.z = std::move(z);
  return r;
}

}  // namespace detail

// samples[r] holds the points of replica r.
inline BinnedEstimate empirical_rho1(const std::vector<std::vector<double>>& samples,
                                     const std::vector<double>& edges) {
  if (samples.size() < 100) throw PreconditionError("empirical_rho1: need >= 100 replicas");
  detail::check_edges(edges);
  const std::size_t B = edges.size() - 1, R = samples.size();
  detail::Moments mom(B);
  std::vector<double> c(B);
  for (const auto& rep : samples) {
    std::fill(c.begin(), c.end(), 0.0);
    for (double x : rep) {
      const long b = detail::bin_of(edges, x);
      if (b >= 0) c[b] += 1.0;
    }
    for (std::size_t b = 0; b < B; ++b) mom.add(b, c[b] / (edges[b + 1] - edges[b]));
  }
  BinnedEstimate out{edges, {}, {}, R};
  mom.finish(R, out.estimate, out.std_error);
  return out;
}

// Ordered pairs of distinct particles. With same_slot, first and second are
// the same configurations and self-pairs are excluded.
inline BinnedEstimate2D empirical_rho2(const std::vector<std::vector<double>>& first,
                                       const std::vector<std::vector<double>>& second,
                                       const std::vector<double>& edges_x,
                                       const std::vector<double>& edges_y, bool same_slot) {
  if (first.size() < 1000) throw PreconditionError("empirical_rho2: need >= 1000 replicas");
  if (first.size() != second.size()) throw InvalidArgument("empirical_rho2: replica counts differ");
  detail::check_edges(edges_x);
  detail::check_edges(edges_y);
  const std::size_t nx = edges_x.size() - 1, ny = edges_y.size() - 1, R = first.size();
  detail::Moments mom(nx * ny);
  std::vector<double> cx(nx), cy(ny);
  for (std::size_t r = 0; r < R; ++r) {
    std::fill(cx.begin(), cx.end(), 0.0);
    std::fill(cy.begin(), cy.end(), 0.0);
    for (double x : first[r]) {
      const long b = detail::bin_of(edges_x, x);
      if (b >= 0) cx[b] += 1.0;
    }
    for (double y : second[r]) {
      const long b = detail::bin_of(edges_y, y);
      if (b >= 0) cy[b] += 1.0;
    }
    for (std::size_t i = 0; i < nx; ++i)
      for (std::size_t j = 0; j < ny; ++j) {
        double pairs = cx[i] * cy[j];
        if (same_slot) {
          // subtract self-pairs: points lying in both bin i (x edges) and bin j (y edges)
          const double lo = std::max(edges_x[i], edges_y[j]);
          const double hi = std::min(edges_x[i + 1], edges_y[j + 1]);
          if (lo < hi)
            for (double x : first[r])
              if (x >= lo && x < hi) pairs -= 1.0;
        }
        const double area = (edges_x[i + 1] - edges_x[i]) * (edges_y[j + 1] - edges_y[j]);
        mom.add(i * ny + j, pairs / area);
      }
  }
  BinnedEstimate2D out{edges_x, edges_y, {}, {}, R};
  mom.finish(R, out.estimate, out.std_error);
  return out;
}

struct GapEstimate {
  double probability = 1.0;
  double std_error = 0.0;
};

// samples[r][slot]; interval slots index the inner vector.
inline GapEstimate empirical_gap(const std::vector<std::vector<std::vector<double>>>& samples,
                                 const IntervalSet& E) {
  E.validate();
  if (E.empty()) return {1.0, 0.0};
  if (samples.size() < 1000) throw PreconditionError("empirical_gap: need >= 1000 replicas");
  std::size_t empty = 0;
  for (const auto& rep : samples) {
    bool hit = false;
    for (const auto& I : E.intervals) {
      for (double x : rep.at(I.slot))
        if (x >= I.lower && x <= I.upper) {
          hit = true;
          break;
        }
      if (hit) break;
    }
    if (!hit) ++empty;
  }
  const double R = static_cast<double>(samples.size());
  const double p = empty / R;
  return {p, std::sqrt(std::max(p * (1.0 - p), 0.0) / R)};
}

inline GapEstimate empirical_gap(const std::vector<std::vector<double>>& single_slot,
                                 const IntervalSet& E) {
  std::vector<std::vector<std::vector<double>>> s;
  s.reserve(single_slot.size());
  for (const auto& r : single_slot) s.push_back({r});
  return empirical_gap(s, E);
}

// Prediction is averaged over each bin with 3-point Gauss-Legendre applied on
// `panels` equal sub-panels (wide tail bins are biased with a single panel).
inline ComparisonReport compare(const BinnedEstimate& est,
                                const std::function<double(double)>& density, int panels = 4) {
  const auto& gl = gauss_legendre(3);
  std::vector<double> z(est.bins());
  for (std::size_t b = 0; b < est.bins(); ++b) {
    const double lo = est.edges[b], h = (est.edges[b + 1] - lo) / panels;
    double avg = 0.0;
    for (int p = 0; p < panels; ++p)
      for (int q = 0; q < 3; ++q)
        avg += 0.5 * gl.weights[q] * density(lo + h * (p + 0.5 + 0.5 * gl.nodes[q])) / panels;
    z[b] = est.std_error[b] > 0.0 ? (est.estimate[b] - avg) / est.std_error[b] : NAN;
  }
  return detail::report(std::move(z));
}

inline ComparisonReport compare(const BinnedEstimate2D& est,
                                const std::function<double(double, double)>& density,
                                int panels = 4) {
  const auto& gl = gauss_legendre(3);
  std::vector<double> z(est.nx() * est.ny());
  std::vector<double> xs, ys, wx, wy;
  auto nodes = [&](double lo, double hi, std::vector<double>& pts, std::vector<double>& w) {
    pts.clear();
    w.clear();
    const double h = (hi - lo) / panels;
    for (int p = 0; p < panels; ++p)
      for (int q = 0; q < 3; ++q) {
        pts.push_back(lo + h * (p + 0.5 + 0.5 * gl.nodes[q]));
        w.push_back(0.5 * gl.weights[q] / panels);
      }
  };
  for (std::size_t i = 0; i < est.nx(); ++i)
    for (std::size_t j = 0; j < est.ny(); ++j) {
      nodes(est.edges_x[i], est.edges_x[i + 1], xs, wx);
      nodes(est.edges_y[j], est.edges_y[j + 1], ys, wy);
      double avg = 0.0;
      for (std::size_t p = 0; p < xs.size(); ++p)
        for (std::size_t q = 0; q < ys.size(); ++q) avg += wx[p] * wy[q] * density(xs[p], ys[q]);
      const std::size_t k = i * est.ny() + j;
      z[k] = est.std_error[k] > 0.0 ? (est.estimate[k] - avg) / est.std_error[k] : NAN;
    }
  return detail::report(std::move(z));
}

// Equal-count edges on [lo, hi] from pooled pilot points.
inline std::vector<double> quantile_edges(const std::vector<std::vector<double>>& pilot,
                                          double lo, double hi, std::size_t bins) {
  std::vector<double> pts;
  for (const auto& r : pilot)
    for (double x : r)
      if (x >= lo && x < hi) pts.push_back(x);
  std::sort(pts.begin(), pts.end());
  std::vector<double> e{lo};
  for (std::size_t b = 1; b < bins && !pts.empty(); ++b) {
    const double q = pts[std::min(pts.size() - 1, b * pts.size() / bins)];
    if (q > e.back()) e.push_back(q);
  }
  if (hi > e.back()) e.push_back(hi);
  return e;
}

// Starting at max_bins per axis, reduce until
// every bin pair is expected to hold >= min_pairs pairs at `replicas` replicas,
// judged from the pilot run.
inline std::pair<std::vector<double>, std::vector<double>> pair_edges_from_pilot(
    const std::vector<std::vector<double>>& pilot_first,
    const std::vector<std::vector<double>>& pilot_second, bool same_slot, double lo_x,
    double hi_x, double lo_y, double hi_y, std::size_t replicas, double min_pairs = 10.0,
    std::size_t max_bins = 12) {
  for (std::size_t nb = max_bins; nb >= 1; --nb) {
    auto ex = quantile_edges(pilot_first, lo_x, hi_x, nb);
    auto ey = quantile_edges(pilot_second, lo_y, hi_y, nb);
    const std::size_t nx = ex.size() - 1, ny = ey.size() - 1;
    std::vector<double> cnt(nx * ny, 0.0);
    for (std::size_t r = 0; r < pilot_first.size(); ++r)
      for (std::size_t p = 0; p < pilot_first[r].size(); ++p)
        for (std::size_t q = 0; q < pilot_second[r].size(); ++q) {
          if (same_slot && p == q) continue;
          const long i = detail::bin_of(ex, pilot_first[r][p]);
          const long j = detail::bin_of(ey, pilot_second[r][q]);
          if (i >= 0 && j >= 0) cnt[i * ny + j] += 1.0;
        }
    const double scale = static_cast<double>(replicas) / pilot_first.size();
    if (*std::min_element(cnt.begin(), cnt.end()) * scale >= min_pairs || nb == 1)
      return {ex, ey};
  }
  return {};
}

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

// Asymptotic Kolmogorov tail with the usual small-sample correction.
inline double kolmogorov_q(double lambda) {
  if (lambda < 1e-3) return 1.0;
  double s = 0.0;
  for (int k = 1; k <= 200; ++k) {
    const double t = 2.0 * ((k % 2) ? 1.0 : -1.0) * std::exp(-2.0 * k * k * lambda * lambda);
    s += t;
    if (std::abs(t) < 1e-17) break;
  }
  return std::clamp(s, 0.0, 1.0);
}

inline KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw InvalidArgument("ks_two_sample: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= v) ++i;
    while (j < b.size() && b[j] <= v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / a.size() - static_cast<double>(j) / b.size()));
  }
  const double ne = static_cast<double>(a.size()) * b.size() / (a.size() + b.size());
  const double sn = std::sqrt(ne);
  return {d, kolmogorov_q((sn + 0.12 + 0.11 / sn) * d)};
}

inline KsResult ks_one_sample(std::vector<double> a, const std::function<double(double)>& cdf) {
  if (a.empty()) throw InvalidArgument("ks_one_sample: empty sample");
  std::sort(a.begin(), a.end());
  const double n = static_cast<double>(a.size());
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double F = cdf(a[i]);
    d = std::max({d, (i + 1) / n - F, F - i / n});
  }
  const double sn = std::sqrt(n);
  return {d, kolmogorov_q((sn + 0.12 + 0.11 / sn) * d)};
}

}  // namespace bfl
