#pragma once

// Low-temperature limit laws and dense-region statistics.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "rsa/core/spin.hpp"
#include "rsa/exact/constants.hpp"
#include "rsa/exact/measures.hpp"
#include "rsa/exact/problem.hpp"

namespace rsa::exact {

struct LimitReport {
  double beta = 50.0;
  double gamma = 0.0;
  double gamma_large = 50.0;
  std::size_t n0_size = 0;
  std::size_t tilde_n0_size = 0;
  double mass_outside_n0 = 0.0;
  /// e^{-beta B} |states|; infinite when B is undefined (E == 0).
  double mass_bound = 0.0;
  /// L_inf between Qbar conditioned on N_0 and mu_0 conditioned on N_0.
  double conditional_error = 0.0;
  /// L_inf between Qbar at (beta, gamma_large) and the uniform law on the aligned minimizers.
  double uniform_error = 0.0;

  [[nodiscard]] bool pass(double tol = 1e-6) const {
    return mass_outside_n0 <= std::max(tol, mass_bound) && conditional_error <= tol && uniform_error <= tol;
  }
};

namespace detail {

inline std::vector<double> conditional_on(const std::vector<double>& law, const std::vector<std::size_t>& support) {
  double mass = 0.0;
  for (std::size_t s : support) mass += law[s];
  std::vector<double> out;
  out.reserve(support.size());
  for (std::size_t s : support) out.push_back(mass > 0.0 ? law[s] / mass : 0.0);
  return out;
}

}  // namespace detail

inline LimitReport limit_distribution_check(const Problem& p, double gamma, double beta_large = 50.0,
                                            double gamma_large = 50.0) {
  LimitReport r;
  r.beta = beta_large;
  r.gamma = gamma;
  r.gamma_large = gamma_large;
  const auto n0 = zero_energy_states(p);
  const auto tilde = aligned_zero_energy_states(p);
  r.n0_size = n0.size();
  r.tilde_n0_size = tilde.size();

  const auto q = qbar(p, beta_large, gamma);
  double inside = 0.0;
  for (std::size_t s : n0) inside += q[s];
  r.mass_outside_n0 = std::max(0.0, 1.0 - inside);
  const auto b = smallest_nonzero_energy(p.energies());
  r.mass_bound = b ? std::exp(-beta_large * *b) * static_cast<double>(p.state_count()) : INFINITY;
  if (!b) r.mass_outside_n0 = 0.0;

  if (!n0.empty()) {
    r.conditional_error = linf_distance(detail::conditional_on(q, n0), detail::conditional_on(mu0(p, gamma), n0));
  }

  if (!tilde.empty()) {
    const auto qg = qbar(p, beta_large, gamma_large);
    std::vector<double> uniform(p.state_count(), 0.0);
    for (std::size_t s : tilde) uniform[s] = 1.0 / static_cast<double>(tilde.size());
    r.uniform_error = linf_distance(qg, uniform);
  }
  return r;
}

inline std::size_t hamming_index_distance(std::size_t a, std::size_t b) {
  return static_cast<std::size_t>(__builtin_popcountll(static_cast<unsigned long long>(a ^ b)));
}

/// Qbar_{beta,gamma} mass of {every replica within Hamming distance R of centre}.
inline double dense_region_mass(const Problem& p, double gamma, std::size_t centre, std::size_t radius,
                                double beta_large = 50.0) {
  if (centre >= p.config_count()) throw std::invalid_argument("dense_region_mass: centre out of range");
  const auto q = qbar(p, beta_large, gamma);
  double mass = 0.0;
  for (std::size_t s = 0; s < q.size(); ++s) {
    bool inside = true;
    for (std::size_t a = 0; a < p.y() && inside; ++a)
      inside = hamming_index_distance(p.replica_index(s, a), centre) <= radius;
    if (inside) mass += q[s];
  }
  return mass;
}

inline double dense_region_mass(const Problem& p, double gamma, const SpinVector& centre, std::size_t radius,
                                double beta_large = 50.0) {
  if (centre.size() != p.n()) throw std::invalid_argument("dense_region_mass: centre has wrong length");
  return dense_region_mass(p, gamma, static_cast<std::size_t>(centre.index()), radius, beta_large);
}

struct MinimumClass {
  std::size_t index = 0;
  /// counts[r] = number of global minima within distance radii[r] (centre included).
  std::vector<std::size_t> counts;
  /// Largest R in the grid with count 1, or -1 if none.
  long isolation_radius = -1;
};

struct MinimaReport {
  double min_energy = 0.0;
  std::vector<std::size_t> radii;
  std::vector<MinimumClass> minima;

  [[nodiscard]] const MinimumClass& at(std::size_t index) const {
    for (const auto& m : minima)
      if (m.index == index) return m;
    throw std::out_of_range("MinimaReport: not a global minimum");
  }
  /// (R, k)-dense: the ball of radius R around the minimum holds k minima.
  [[nodiscard]] bool dense(std::size_t index, std::size_t radius, std::size_t k) const {
    const auto& m = at(index);
    for (std::size_t r = 0; r < radii.size(); ++r)
      if (radii[r] == radius) return m.counts[r] == k;
    throw std::invalid_argument("MinimaReport: radius not in grid");
  }
  [[nodiscard]] bool isolated(std::size_t index, std::size_t radius) const { return dense(index, radius, 1); }
};

inline MinimaReport classify_minima(const std::vector<double>& energies, std::size_t n,
                                    const std::vector<std::size_t>& radii) {
  if (energies.size() != (std::size_t{1} << n)) throw std::invalid_argument("classify_minima: need 2^N energies");
  MinimaReport r;
  r.radii = radii;
  r.min_energy = energies.front();
  for (double e : energies) r.min_energy = std::min(r.min_energy, e);
  std::vector<std::size_t> minima;
  for (std::size_t s = 0; s < energies.size(); ++s)
    if (energies[s] == r.min_energy) minima.push_back(s);
  for (std::size_t s : minima) {
    MinimumClass c;
    c.index = s;
    for (std::size_t radius : radii) {
      std::size_t k = 0;
      for (std::size_t t : minima)
        if (hamming_index_distance(s, t) <= radius) ++k;
      c.counts.push_back(k);
      if (k == 1) c.isolation_radius = std::max(c.isolation_radius, static_cast<long>(radius));
    }
    r.minima.push_back(std::move(c));
  }
  return r;
}

}  // namespace rsa::exact
