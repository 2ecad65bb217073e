#pragma once

// Convergence constants of the replicated chain on an enumerable instance.

#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "rsa/anneal/kernel.hpp"
#include "rsa/exact/elevation.hpp"
#include "rsa/exact/measures.hpp"
#include "rsa/exact/problem.hpp"
#include "rsa/exact/spectral.hpp"

namespace rsa::exact {

/// Smallest nonzero single-replica energy; empty if E is identically zero.
inline std::optional<double> smallest_nonzero_energy(const std::vector<double>& energies) {
  std::optional<double> b;
  for (double e : energies)
    if (e != 0.0 && (!b || e < *b)) b = e;
  return b;
}

/// B' = log cosh(gamma y) - log cosh(gamma (y - 2)), the smallest interaction
/// jump; tends to 2 gamma for large gamma when y >= 2.
inline double interaction_jump(double gamma, std::size_t y) {
  const double yy = static_cast<double>(y);
  return log_cosh_stable(gamma * yy) - log_cosh_stable(gamma * (yy - 2.0));
}

/// Ensembles with zero total energy.
inline std::vector<std::size_t> zero_energy_states(const Problem& p) {
  std::vector<std::size_t> out;
  for (std::size_t s = 0; s < p.state_count(); ++s)
    if (p.total_energy(s) == 0.0) out.push_back(s);
  return out;
}

/// Zero-energy ensembles whose replicas all coincide.
inline std::vector<std::size_t> aligned_zero_energy_states(const Problem& p) {
  std::vector<std::size_t> out;
  for (std::size_t s : zero_energy_states(p))
    if (p.aligned(s)) out.push_back(s);
  return out;
}

struct ConvergenceConstants {
  std::optional<double> B;
  double Bprime = 0.0;
  double m = 0.0;
  double kappa1 = 1.0;
  std::vector<double> betas;
  std::vector<double> psi_values;
  double c = 0.0;  // min psi e^{beta m} over the grid
  double C = 0.0;  // max psi e^{beta m} over the grid
  std::vector<std::size_t> N0;
  std::vector<std::size_t> tildeN0;
};

/// kappa1 fitted as the smallest constant with
/// ||Qbar_beta - Qbar_beta'||_inf <= kappa1 e^{-beta B} on consecutive grid points.
inline double fit_kappa1(const Problem& p, double gamma, const std::vector<double>& betas, double b) {
  double k = 1.0;
  for (std::size_t j = 0; j + 1 < betas.size(); ++j) {
    const double d = linf_distance(qbar(p, betas[j], gamma), qbar(p, betas[j + 1], gamma));
    k = std::max(k, d * std::exp(betas[j] * b));
  }
  return k;
}

inline ConvergenceConstants compute_constants(const Problem& p, double gamma, const std::vector<double>& betas,
                                              KernelKind kind = KernelKind::combined) {
  ConvergenceConstants c;
  c.B = smallest_nonzero_energy(p.energies());
  c.Bprime = interaction_jump(gamma, p.y());
  c.N0 = zero_energy_states(p);
  c.tildeN0 = aligned_zero_energy_states(p);
  if (p.bits() > kMaxKernelBits) return c;
  c.m = compute_elevation_m(p);
  c.betas = betas;
  if (!betas.empty()) {
    c.kappa1 = c.B ? fit_kappa1(p, gamma, betas, *c.B) : 1.0;
    c.c = INFINITY;
    for (double beta : betas) {
      const double psi = spectral_gap(p, beta, gamma, kind);
      c.psi_values.push_back(psi);
      const double scaled = psi * std::exp(beta * c.m);
      c.c = std::min(c.c, scaled);
      c.C = std::max(c.C, scaled);
    }
  }
  return c;
}

}  // namespace rsa::exact
