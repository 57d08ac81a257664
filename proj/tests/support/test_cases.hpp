#pragma once

// Shared toy systems and a random connected-case generator for the tests.

#include <algorithm>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "izone/network_model.hpp"

namespace testcases {

inline std::filesystem::path fixture(const std::string& name) {
  return std::filesystem::path(IZONE_FIXTURE_DIR) / name;
}

// Two generators (buses 1, 2) joined through one load bus (3) by identical
// branches with B = 5, flat voltage profile. Full Laplacian:
//   [  5   0  -5 ]
//   [  0   5  -5 ]
//   [ -5  -5  10 ]
// Kron reduction of bus 3 gives [[2.5, -2.5], [-2.5, 2.5]].
inline izone::NetworkCase chain_case(double h1 = 5.0, double h2 = 5.0,
                                     double f_n = 50.0) {
  izone::NetworkCase c;
  c.nominal_freq = f_n;
  c.buses = {{1, izone::BusKind::generator, 1.0, 0.0, 0.0},
             {2, izone::BusKind::generator, 1.0, 0.0, 0.0},
             {3, izone::BusKind::load, 1.0, 0.0, 100.0}};
  c.branches = {{1, 3, 5.0}, {2, 3, 5.0}};
  c.generators = {{1, h1, 100.0, izone::GenTech::synchronous},
                  {2, h2, 100.0, izone::GenTech::synchronous}};
  return c;
}

// Three generators in a triangle, no load buses, unequal couplings.
inline izone::NetworkCase triangle_case() {
  izone::NetworkCase c;
  c.nominal_freq = 50.0;
  c.buses = {{1, izone::BusKind::generator, 1.0, 0.0, 0.0},
             {2, izone::BusKind::generator, 1.0, 0.1, 0.0},
             {3, izone::BusKind::generator, 1.05, -0.05, 0.0}};
  c.branches = {{1, 2, 4.0}, {2, 3, 2.0}, {1, 3, 1.0}};
  c.generators = {{1, 4.0, 100.0, izone::GenTech::synchronous},
                  {2, 3.0, 100.0, izone::GenTech::synchronous},
                  {3, 6.0, 100.0, izone::GenTech::synchronous}};
  return c;
}

// Random connected case: spanning tree plus extra branches, angles kept
// within +-0.3 rad so every synchronizing coefficient is positive.
inline izone::NetworkCase random_case(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> ngd(2, 10);
  const int ng = ngd(rng);
  std::uniform_int_distribution<int> nd(std::max(3, ng), 30);
  const int n = nd(rng);

  std::uniform_real_distribution<double> vmag(0.9, 1.1), vang(-0.3, 0.3),
      b(0.5, 10.0), h(1.0, 8.0), uni(0.0, 1.0);

  std::vector<int> bus_ids(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) bus_ids[size_t(i)] = i + 1;
  std::shuffle(bus_ids.begin(), bus_ids.end(), rng);

  izone::NetworkCase c;
  c.nominal_freq = uni(rng) < 0.5 ? 50.0 : 60.0;
  for (int i = 0; i < n; ++i) {
    const bool gen = i < ng;
    c.buses.push_back({bus_ids[size_t(i)],
                       gen ? izone::BusKind::generator : izone::BusKind::load,
                       vmag(rng), vang(rng), gen ? 0.0 : 50.0});
    if (gen)
      c.generators.push_back(
          {bus_ids[size_t(i)], h(rng), 100.0, izone::GenTech::synchronous});
  }
  for (int i = 1; i < n; ++i) {
    std::uniform_int_distribution<int> prev(0, i - 1);
    c.branches.push_back(
        {bus_ids[size_t(prev(rng))], bus_ids[size_t(i)], b(rng)});
  }
  const int extra = n / 2;
  for (int e = 0; e < extra; ++e) {
    std::uniform_int_distribution<int> pick(0, n - 1);
    const int i = pick(rng), j = pick(rng);
    if (i == j) continue;
    c.branches.push_back({bus_ids[size_t(i)], bus_ids[size_t(j)], b(rng)});
  }
  return c;
}

}  // namespace testcases
