#pragma once

// Small crafted landscapes used by the verification suites.

#include <cstdint>
#include <vector>

#include "rsa/core/rng.hpp"
#include "rsa/core/spin.hpp"
#include "rsa/exact/problem.hpp"

namespace rsa::exact::fixtures {

/// N = 1: E(+1) = 0, E(-1) = h.
inline std::vector<double> two_state(double h = 1.0) {
  // index 1 is sigma = +1
  return {h, 0.0};
}

/// N = 2: wells at (1,1) and (-1,-1), E = 1 elsewhere.
inline std::vector<double> double_well_2() { return {0.0, 1.0, 1.0, 0.0}; }

/// N = 3: energy by the number k of +1 spins, {0, 0.5, 1, 0}. Two wells at
/// all-minus and all-plus separated by a barrier of height 1.
inline std::vector<double> gap_double_well() {
  const double by_count[4] = {0.0, 0.5, 1.0, 0.0};
  std::vector<double> e(8);
  for (std::size_t s = 0; s < e.size(); ++s) e[s] = by_count[__builtin_popcountll(s)];
  return e;
}

/// N = 4: zero energy on the radius-1 ball around all-plus (5 minima) and at
/// all-minus (isolated, distance 3 from the cluster); E = 1 elsewhere.
inline std::vector<double> cluster_and_isolated() {
  std::vector<double> e(16, 1.0);
  for (std::size_t s = 0; s < e.size(); ++s)
    if (__builtin_popcountll(s) >= 3 || s == 0) e[s] = 0.0;
  return e;
}
inline constexpr std::size_t kClusterCentre = 15;   // all-plus
inline constexpr std::size_t kIsolatedMinimum = 0;  // all-minus

/// Integer energies in {0, ..., max_value}, with at least one zero.
inline std::vector<double> random_integer(std::size_t n, std::uint64_t seed, std::uint32_t max_value = 3) {
  Philox rng(seed);
  std::vector<double> e(std::size_t{1} << n);
  for (double& v : e) v = static_cast<double>(rng.uniform_index(max_value + 1));
  e[rng.uniform_index(static_cast<std::uint32_t>(e.size()))] = 0.0;
  return e;
}

}  // namespace rsa::exact::fixtures
