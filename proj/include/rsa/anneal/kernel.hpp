#pragma once

// Acceptance rules of the replicated chain. The target law on {-1,+1}^{Ny} is
//
//   Qbar(s) ∝ exp(-beta * sum_a E(s^a) + sum_i log cosh(gamma * sum_a s_i^a)).
//
// Two Metropolis kernels share it: the two-stage kernel first accepts with the
// cosh ratio (a Metropolis step for the interaction alone) and then with the
// energy factor; the combined kernel accepts once with the full exponent.

#include <algorithm>
#include <cmath>

#include "rsa/core/spin.hpp"

namespace rsa {

enum class KernelKind { two_stage, combined };

/// log(cosh(x)), finite for every finite x.
inline double log_cosh_stable(double x) noexcept {
  const double a = std::abs(x);
  return a - std::log(2.0) + std::log1p(std::exp(-2.0 * a));
}

/// Change of sum_i log cosh(gamma * field_i) caused by the move.
inline double interaction_delta(const ReplicaEnsemble& e, double gamma, const FlipMove& m) {
  const int before = e.replica_field(m.coordinate);
  const int after = e.field_after(m);
  if (gamma == 0.0) return 0.0;
  return log_cosh_stable(gamma * after) - log_cosh_stable(gamma * before);
}

/// min(1, cosh ratio) * exp(-beta (dE)^+).
inline double two_stage_acceptance(double delta_energy, double delta_interaction, double beta) noexcept {
  const double p1 = std::exp(std::min(delta_interaction, 0.0));
  const double p2 = std::exp(-beta * std::max(delta_energy, 0.0));
  return p1 * p2;
}

/// min(1, exp(-beta dE + dH)).
inline double combined_acceptance(double delta_energy, double delta_interaction, double beta) noexcept {
  return std::exp(std::min(-beta * delta_energy + delta_interaction, 0.0));
}

inline double acceptance(KernelKind kind, double delta_energy, double delta_interaction, double beta) noexcept {
  return kind == KernelKind::two_stage ? two_stage_acceptance(delta_energy, delta_interaction, beta)
                                       : combined_acceptance(delta_energy, delta_interaction, beta);
}

inline const char* to_string(KernelKind k) noexcept {
  return k == KernelKind::two_stage ? "two-stage" : "combined";
}

}  // namespace rsa
