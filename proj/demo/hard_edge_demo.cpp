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

// Simulates the field near the hard edge and compares the smallest scaled
// eigenvalues against the Bessel kernel: one-point density and gap law.
//
//   hard_edge_demo [N] [replicas]

#include <cstdio>
#include <cstdlib>

#include "bfl/bfl.hpp"

using namespace bfl;

int main(int argc, char** argv) {
  const int N = argc > 1 ? std::atoi(argv[1]) : 50;
  const std::size_t R = argc > 2 ? std::strtoul(argv[2], nullptr, 10) : 2000;
  const auto grid = FieldGrid::hard_edge(N, {0}, {0.0});
  std::vector<std::vector<double>> pts(R);
  parallel_for(R, [&](std::size_t r) {
    pts[r] = hard_edge_rescale(sample_field(grid, RngStream(1, r)), {0.0}).at(0, 0);
  });

  const auto bessel = KernelSpec::bessel(Ordering::time_like, {{0, 0.0}});
  const auto est = empirical_rho1(pts, {0.0, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0});
  const auto rep = compare(est, [&](double x) { return kernel_bessel(bessel, 0, x, 0, x).value; });
  std::printf("one-point density, N = %d, %zu replicas\n", N, R);
  std::printf("%8s %8s %12s %12s %8s\n", "lower", "upper", "estimate", "std.err", "z");
  for (std::size_t b = 0; b < est.bins(); ++b)
    std::printf("%8.2f %8.2f %12.5f %12.5f %8.2f\n", est.edges[b], est.edges[b + 1], est.estimate[b],
                est.std_error[b], rep.z[b]);
  std::printf("comparison %s (max |z| = %.2f)\n\n", rep.pass ? "passes" : "fails", rep.max_abs_z);

  std::printf("%6s %12s %12s %12s\n", "s", "empirical", "Fredholm", "exp(-s/4)");
  for (double s : {1.0, 2.0, 4.0, 8.0}) {
    const IntervalSet E{{0, 0.0, s}};
    const auto g = empirical_gap(pts, E);
    std::printf("%6.1f %12.5f %12.8f %12.8f\n", s, g.probability, gap_probability(bessel, E, 60), std::exp(-s / 4));
  }
}
