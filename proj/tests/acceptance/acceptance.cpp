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

// Acceptance run: one PASS/FAIL line per criterion. Optional arguments pick a
// subset by number, e.g. `acceptance 1 3 10`.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <set>
#include <string>

#include "../oracles.hpp"
#include "bfl/bfl.hpp"

using namespace bfl;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, auto... v) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, v...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

const IntervalSet hard_edge_interval(double s) { return IntervalSet{{0, 0.0, s}}; }

// C1: Bessel gap on [0, s] against exp(-s/4).
Outcome c1() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto k = KernelSpec::bessel(Ordering::time_like, {{0, 0.0}});
  double worst = 0.0;
  for (double s : {1.0, 2.0, 4.0, 8.0})
    worst = std::max(worst, std::abs(gap_probability(k, hard_edge_interval(s), 100) - std::exp(-s / 4)));
  const double secs = seconds_since(t0);
  return {worst < 1e-6 && secs < 5.0, fmt("max |gap - e^{-s/4}| = %.2e, %.2f s", worst, secs)};
}

// C2: Monte Carlo gap at N = 200 against the Fredholm value.
Outcome c2() {
  const auto t0 = std::chrono::steady_clock::now();
  const int N = 200;
  const std::size_t R = 10000;
  const auto grid = FieldGrid::hard_edge(N, {0}, {0.0});
  std::vector<std::vector<double>> s(R);
  parallel_for(R, [&](std::size_t r) {
    s[r] = hard_edge_rescale(sample_field(grid, RngStream(2024, r)), {0.0}).at(0, 0);
  });
  const auto g = empirical_gap(s, hard_edge_interval(4.0));
  const double fred = gap_probability(KernelSpec::bessel(Ordering::time_like, {{0, 0.0}}), hard_edge_interval(4.0), 100);
  const double z = (g.probability - fred) / g.std_error;
  const double secs = seconds_since(t0);
  return {std::abs(z) < 3.0 && secs < 600.0,
          fmt("empirical %.5f +- %.5f, Fredholm %.7f, z = %.2f, %.0f s", g.probability, g.std_error, fred, z, secs)};
}

// C3: gauged kernel approaches the Bessel kernel.
Outcome c3() {
  const auto b = KernelSpec::bessel(Ordering::time_like, {{0, 0.0}});
  std::vector<double> err;
  for (int N : {50, 100, 200}) {
    const auto g = KernelSpec::finite_gauged(Ordering::time_like, N, {{0, 0.0}});
    double worst = 0.0;
    for (int i = 0; i < 16; ++i)
      for (int j = 0; j < 16; ++j) {
        const double x = 10.0 * i / 15, y = 10.0 * j / 15;
        worst = std::max(worst, std::abs(kernel_gauged(g, 0, x, 0, y).value - kernel_bessel(b, 0, x, 0, y).value));
      }
    err.push_back(worst);
  }
  const bool pass = err[0] > err[1] && err[1] > err[2] && err[2] < 0.05;
  return {pass, fmt("max error N=50: %.2e, N=100: %.2e, N=200: %.2e", err[0], err[1], err[2])};
}

struct Transition {
  Ordering o;
  PathPoint from, to;
};

// Declared intertwining grid: pure T, pure W, and two mixed steps per ordering.
const std::vector<Transition> intertwining_grid = {
    {Ordering::time_like, {0, 1.0}, {0, 1.5}},  {Ordering::time_like, {1, 1.0}, {3, 1.0}},
    {Ordering::time_like, {0, 1.0}, {2, 1.5}},  {Ordering::time_like, {2, 1.0}, {4, 1.7}},
    {Ordering::space_like, {0, 1.0}, {0, 1.5}}, {Ordering::space_like, {3, 1.0}, {1, 1.0}},
    {Ordering::space_like, {2, 1.0}, {0, 1.5}}, {Ordering::space_like, {4, 1.0}, {2, 1.7}},
};

// C4: biorthogonality and intertwining.
Outcome c4() {
  double bio = 0.0, ph = 0.0, ps = 0.0;
  for (auto o : {Ordering::time_like, Ordering::space_like})
    for (int a = 0; a <= 4; ++a)
      for (int i = 1; i <= 8; ++i)
        for (int j = 1; j <= 8; ++j) bio = std::max(bio, identities::biorthogonality_residual(o, i, j, a, 1.3));
  for (const auto& tr : intertwining_grid)
    for (int j = 1; j <= 8; ++j) {
      ph = std::max(ph, identities::phi_intertwining_residual(tr.o, j, tr.from, tr.to, 1.1));
      ps = std::max(ps, identities::psi_intertwining_residual(tr.o, j, tr.from, tr.to, 0.8));
    }
  return {bio < 1e-6 && ph < 1e-6 && ps < 1e-6,
          fmt("biorthogonality %.2e, phi intertwining %.2e, psi intertwining %.2e", bio, ph, ps)};
}

// C5: Chapman-Kolmogorov and commutation.
Outcome c5() {
  const auto tl = Ordering::time_like, sl = Ordering::space_like;
  struct Triple {
    Ordering o;
    PathPoint p0, p1, p2;
  };
  const std::vector<Triple> triples = {
      {tl, {0, 1.0}, {0, 1.4}, {0, 2.0}}, {tl, {0, 1.0}, {1, 1.0}, {2, 1.0}}, {tl, {0, 1.0}, {1, 1.0}, {1, 1.5}},
      {tl, {0, 1.0}, {1, 1.3}, {2, 1.8}}, {sl, {2, 1.0}, {1, 1.0}, {1, 1.5}}, {sl, {3, 1.0}, {2, 1.0}, {0, 1.0}},
      {sl, {2, 1.0}, {1, 1.3}, {0, 1.8}}, {sl, {1, 1.0}, {1, 1.4}, {0, 2.0}},
  };
  double ck = 0.0, cm = 0.0;
  for (const auto& t : triples)
    for (double x : {0.7, 2.6})
      for (double z : {0.9, 1.3}) ck = std::max(ck, identities::chapman_kolmogorov_residual(t.o, t.p0, t.p1, t.p2, x, z));
  for (auto o : {tl, sl})
    for (auto [lo, hi] : {std::pair{0, 1}, {1, 3}, {0, 4}})
      for (double x : {0.4, 1.5})
        for (double y : {0.8, 2.6}) {
          const int a = o == tl ? lo : hi, b = o == tl ? hi : lo;
          cm = std::max(cm, identities::commutation_residual(o, a, b, 1.0, 1.8, x, y));
        }
  return {ck < 1e-6 && cm < 1e-6, fmt("Chapman-Kolmogorov %.2e, commutation %.2e", ck, cm)};
}

// C6: Bessel-integral representations against Boost-based oracles, and Parseval.
// The W forms are limits of e^{-pu}-regulated integrals; near x = y the
// regulated value bends on the scale p ~ (y - x)^2, hence the small p0.
Outcome c6() {
  double worst_t = 0.0, worst_w = 0.0, worst_p = 0.0;
  for (int a : {0, 1, 3})
    for (double x : {0.5, 1.7})
      for (double y : {0.4, 2.2}) {
        const double t = 1.0, s = 1.8;
        const double I = oracle::bessel_laplace(a, a, 0.0, s - t, s * x / t, t * y / s);
        const double tl = std::exp(-y / s + x / t) * std::pow(y / x, 0.5 * a) * I;
        const double sl = std::pow(y / x, 0.5 * a) * oracle::bessel_laplace(a, a, 0.0, s - t, x, y);
        const double T = t_kernel(a, t, x, s, y);
        worst_t = std::max({worst_t, std::abs(T - tl), std::abs(T - sl)});
      }
  for (auto [a, b] : {std::pair{0, 1}, {1, 3}, {2, 4}})
    for (double x : {0.7, 1.5})
      for (double y : {1.9, 3.1}) {
        const double t = 1.3;
        const int n = b - a;
        const double I0 = oracle::extrapolate_to_zero(
            [&](double p) { return oracle::bessel_laplace(a, b, -0.5 * n, p, x, y); }, 0.01, 8);
        const double w = std::pow(t, -n) * std::exp(-(y - x) / t) * std::pow(y, 0.5 * b) * std::pow(x, -0.5 * a) * I0;
        // barred kernel from y down to x
        const double J0 = oracle::extrapolate_to_zero(
            [&](double p) { return oracle::bessel_laplace(b, a, -0.5 * n, p, y, x); }, 0.01, 8);
        const double wb = std::pow(x, 0.5 * a) * std::pow(y, -0.5 * b) * J0;
        worst_w = std::max({worst_w, std::abs(w_kernel(a, b, t, x, y) - w), std::abs(w_bar_kernel(b, a, y, x) - wb)});
      }
  QuadratureRule r;
  r.truncation = 14.0;
  for (int a : {0, 2}) {
    auto f = [a](double u) { return std::pow(u, a + 0.5) * std::exp(-u * u); };
    auto g = [a](double u) { return std::pow(u, a + 0.5) * (1.0 + u * u) * std::exp(-u * u / 2); };
    auto prod = [&](double z) {
      return z <= 0.0 ? 0.0 : hankel_transform(f, a, z, r).value * hankel_transform(g, a, z, r).value;
    };
    const double lhs = integrate_panels(prod, 0.0, 16.0, 64, 16);
    const double rhs = oracle::adaptive([&](double u) { return f(u) * g(u); }, 0.0, 20.0, 1e-14);
    worst_p = std::max(worst_p, std::abs(lhs - rhs));
  }
  return {worst_t < 1e-7 && worst_w < 1e-7 && worst_p < 1e-7,
          fmt("T forms %.2e, W and Wbar forms %.2e, Parseval %.2e", worst_t, worst_w, worst_p)};
}

// C7: Sasamoto determinant against the interlacing predicate.
Outcome c7() {
  RngStream rng(7, 0);
  int mismatches = 0, ones = 0;
  for (int it = 0; it < 10000; ++it) {
    const int n = 1 + static_cast<int>(rng.next_u32() % 6);
    std::vector<int> pool(2 * n + 2);
    for (std::size_t i = 0; i < pool.size(); ++i) pool[i] = static_cast<int>(i);
    for (std::size_t i = pool.size() - 1; i > 0; --i) std::swap(pool[i], pool[rng.next_u32() % (i + 1)]);
    std::vector<double> a(pool.begin(), pool.begin() + n), b(pool.begin() + n, pool.begin() + 2 * n);
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const int d = sasamoto_det(a, b);
    mismatches += d != (interlaces(a, b, true) ? 1 : 0);
    ones += d;
  }
  return {mismatches == 0, fmt("%d mismatches in 10000 instances (%d interlacing)", mismatches, ones)};
}

// C8: empirical one- and two-point functions against det[K] at N = 5.
Outcome c8() {
  struct Case {
    const char* name;
    Ordering o;
    std::vector<PathPoint> path;
  };
  const std::vector<Case> cases = {{"single", Ordering::time_like, {{2, 1.0}}},
                                   {"time-like", Ordering::time_like, {{0, 1.0}, {1, 1.5}}},
                                   {"space-like", Ordering::space_like, {{2, 1.0}, {1, 1.5}}}};
  const int N = 5;
  const std::size_t R = 10000;
  bool pass = true;
  std::string detail;
  for (const auto& c : cases) {
    std::vector<int> al;
    std::vector<double> ts;
    for (auto p : c.path) {
      al.push_back(p.alpha);
      ts.push_back(p.t);
    }
    std::sort(al.begin(), al.end());
    al.erase(std::unique(al.begin(), al.end()), al.end());
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
    const FieldGrid g{N, al, ts};
    const std::size_t P = c.path.size();
    std::vector<std::vector<std::vector<double>>> slots(P, std::vector<std::vector<double>>(R));
    parallel_for(R, [&](std::size_t r) {
      const auto s = sample_field(g, RngStream(11, r));
      for (std::size_t i = 0; i < P; ++i) {
        const auto ti = static_cast<std::size_t>(std::find(ts.begin(), ts.end(), c.path[i].t) - ts.begin());
        slots[i][r] = s.at(s.alpha_index(c.path[i].alpha), ti);
      }
    });
    const auto K = KernelSpec::finite_raw(c.o, N, c.path);
    auto k = [&](std::size_t i, double x, std::size_t j, double y) { return kernel_finite(K, i, x, j, y).value; };
    double worst_frac = 1.0, worst_z = 0.0;
    for (std::size_t i = 0; i < P; ++i) {
      const auto est = empirical_rho1(slots[i], quantile_edges(slots[i], 0.0, 40.0, 20));
      const auto rep = compare(est, [&](double x) { return k(i, x, i, x); });
      pass = pass && rep.pass;
      worst_frac = std::min(worst_frac, rep.fraction_within_3);
      worst_z = std::max(worst_z, rep.max_abs_z);
    }
    const std::size_t i = 0, j = P - 1;
    const bool same = i == j;
    const std::vector<std::vector<double>> pf(slots[i].begin(), slots[i].begin() + 1000),
        ps(slots[j].begin(), slots[j].begin() + 1000);
    const auto [ex, ey] = pair_edges_from_pilot(pf, ps, same, 0.0, 40.0, 0.0, 40.0, R);
    const auto est = empirical_rho2(slots[i], slots[j], ex, ey, same);
    const auto rep =
        compare(est, [&](double x, double y) { return k(i, x, i, x) * k(j, y, j, y) - k(i, x, j, y) * k(j, y, i, x); });
    pass = pass && rep.pass;
    detail += fmt("%s: rho1 worst fraction %.3f max|z| %.2f, rho2 %zux%zu fraction %.3f max|z| %.2f; ", c.name,
                  worst_frac, worst_z, est.nx(), est.ny(), rep.fraction_within_3, rep.max_abs_z);
  }
  detail.resize(detail.size() - 2);
  return {pass, detail};
}

// C9: Gibbs resampling invariance at N = 100.
Outcome c9() {
  const auto t0 = std::chrono::steady_clock::now();
  const int N = 100, a = 0, b = 3, k = 2, runs = 20;
  const std::size_t R = 1000;
  const auto grid = FieldGrid::hard_edge(N, {0, 1, 2, 3}, {0.0});
  int passes = 0;
  double mean_acc = 0.0;
  for (int run = 0; run < runs; ++run) {
    std::vector<double> orig(R / 2), res(R / 2), acc(R / 2);
    parallel_for(R, [&](std::size_t r) {
      const auto s = hard_edge_rescale(sample_field(grid, RngStream(1000 + run, r)), {0.0});
      const LineEnsemble f{0, {s.at(0, 0), s.at(1, 0), s.at(2, 0), s.at(3, 0)}};
      if (r < R / 2) {
        orig[r] = f.rows[1][0];
      } else {
        RngStream g(5000 + run, r);
        const auto gr = gibbs_resample(f, a, b, k, g);
        res[r - R / 2] = gr.field.rows[1][0];
        acc[r - R / 2] = 1.0 / gr.attempts;
      }
    });
    passes += ks_two_sample(orig, res).p_value > 0.01;
    for (double v : acc) mean_acc += v / (runs * (R / 2));
  }
  return {passes >= 16, fmt("%d of %d runs with KS p > 0.01, mean 1/attempts %.3f, %.0f s", passes, runs, mean_acc,
                            seconds_since(t0))};
}

// C10: doubling the quadrature order moves every reported gap by < 1e-7.
Outcome c10() {
  double worst = 0.0;
  const auto b = KernelSpec::bessel(Ordering::time_like, {{0, 0.0}});
  for (double s : {1.0, 2.0, 4.0, 8.0})
    worst = std::max(worst, std::abs(gap_probability(b, hard_edge_interval(s), 200) -
                                     gap_probability(b, hard_edge_interval(s), 100)));
  struct Config {
    KernelSpec k;
    IntervalSet E;
  };
  const std::vector<Config> multi = {
      {KernelSpec::bessel(Ordering::time_like, {{0, 0.0}, {1, 0.5}}), IntervalSet{{0, 0.0, 2.0}, {1, 0.0, 3.0}}},
      {KernelSpec::bessel(Ordering::space_like, {{1, 0.0}, {0, 0.5}}), IntervalSet{{0, 0.0, 3.0}, {1, 0.0, 2.0}}},
      {KernelSpec::finite_gauged(Ordering::time_like, 40, {{0, 0.0}}), hard_edge_interval(4.0)},
  };
  for (const auto& c : multi) worst = std::max(worst, std::abs(gap_probability(c.k, c.E, 100) - gap_probability(c.k, c.E, 50)));
  return {worst < 1e-7, fmt("max refinement change %.2e", worst)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"C1 hard-edge gap law", c1},         {"C2 Monte Carlo vs Fredholm gap", c2},
      {"C3 kernel convergence", c3},        {"C4 biorthogonality and intertwining", c4},
      {"C5 semigroup and commutation", c5}, {"C6 Bessel integral identities", c6},
      {"C7 Sasamoto identity", c7},         {"C8 determinantal structure", c8},
      {"C9 Gibbs invariance", c9},          {"C10 refinement stability", c10},
  };
  std::set<int> pick;
  for (int i = 1; i < argc; ++i) pick.insert(std::atoi(argv[i]));
  int failed = 0;
  for (std::size_t c = 0; c < criteria.size(); ++c) {
    if (!pick.empty() && !pick.count(static_cast<int>(c + 1))) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[c].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("[%s] %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", criteria[c].first, o.detail.c_str(),
                seconds_since(t0));
    std::fflush(stdout);
  }
  return failed ? 1 : 0;
}
