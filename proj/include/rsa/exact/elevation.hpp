#pragma once

// Elevation constant m = max over pairs (s, t) of H(s, t) - W(s) - W(t), where
// W is the total replica energy and H(s, t) is the smallest achievable maximum
// of W along a single-flip path from s to t (endpoints included).

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "rsa/exact/problem.hpp"

namespace rsa::exact {

inline constexpr std::size_t kMaxElevationBits = 12;

/// Bottleneck search by activating states in increasing W (a Kruskal-style
/// sweep): two components joined through a state of weight h are connected at
/// minimax level exactly h, so each merge contributes h - min_A - min_B.
inline double compute_elevation_m(const Problem& p) {
  if (p.bits() > kMaxElevationBits)
    throw std::invalid_argument("compute_elevation_m: N*y = " + std::to_string(p.bits()) + " exceeds 12");
  const std::size_t states = p.state_count();
  std::vector<std::size_t> order(states);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return p.total_energy(a) < p.total_energy(b); });

  std::vector<std::size_t> parent(states);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  std::vector<double> comp_min(states, 0.0);
  std::vector<char> active(states, 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };

  double m = -INFINITY;
  for (std::size_t v : order) {
    const double h = p.total_energy(v);
    active[v] = 1;
    comp_min[v] = h;
    m = std::max(m, -h);  // the pair (v, v)
    for (std::size_t b = 0; b < p.bits(); ++b) {
      const std::size_t u = v ^ (std::size_t{1} << b);
      if (!active[u]) continue;
      const std::size_t ru = find(u);
      const std::size_t rv = find(v);
      if (ru == rv) continue;
      m = std::max(m, h - comp_min[ru] - comp_min[rv]);
      parent[ru] = rv;
      comp_min[rv] = std::min(comp_min[rv], comp_min[ru]);
    }
  }
  return m;
}

}  // namespace rsa::exact
