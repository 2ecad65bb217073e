#pragma once

// Stationary laws by brute-force enumeration.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "rsa/exact/problem.hpp"

namespace rsa::exact {

struct QbarTables {
  /// Marginal of Q over the replicas, summing the centre configuration explicitly.
  std::vector<double> direct;
  /// Closed form with the centre folded into log cosh terms.
  std::vector<double> folded;
  /// log Z(y, beta, gamma), the double sum over (centre, replicas).
  double log_z = 0.0;
  /// log Z' of the folded weights; Z = 2^N Z'.
  double log_z_folded = 0.0;
};

/// Maximum N for which the centre configuration is enumerated.
inline constexpr std::size_t kMaxDirectN = 10;

/// Log-weights of the folded form: -beta sum_a E + sum_i log cosh(gamma field_i).
inline std::vector<double> folded_log_weights(const Problem& p, double beta, double gamma) {
  std::vector<double> lw(p.state_count());
  for (std::size_t s = 0; s < lw.size(); ++s) {
    const double e = beta == 0.0 ? 0.0 : -beta * p.total_energy(s);
    lw[s] = e + p.interaction(s, gamma);
  }
  return lw;
}

inline QbarTables enumerate_qbar(const Problem& p, double beta, double gamma) {
  if (p.n() > kMaxDirectN) throw std::invalid_argument("enumerate_qbar: direct route needs N <= 10");
  QbarTables t;
  const std::size_t states = p.state_count();
  const std::size_t centres = p.config_count();
  std::vector<double> lw(states);
  std::vector<double> terms(centres);
  for (std::size_t s = 0; s < states; ++s) {
    const double e = beta == 0.0 ? 0.0 : -beta * p.total_energy(s);
    // log sum_sigma exp(gamma sum_a <sigma, sigma^a>)
    double m = -INFINITY;
    for (std::size_t c = 0; c < centres; ++c) {
      int overlap = 0;
      for (std::size_t i = 0; i < p.n(); ++i) {
        const int si = ((c >> i) & 1u) ? 1 : -1;
        overlap += si * p.field(s, i);
      }
      terms[c] = gamma * overlap;
      m = std::max(m, terms[c]);
    }
    double acc = 0.0;
    for (double v : terms) acc += std::exp(v - m);
    lw[s] = e + m + std::log(acc);
  }
  t.log_z = normalize_log_weights(lw, t.direct);
  t.log_z_folded = normalize_log_weights(folded_log_weights(p, beta, gamma), t.folded);
  return t;
}

/// Qbar_{beta,gamma} via the folded form only (no size limit on N beyond Problem's).
inline std::vector<double> qbar(const Problem& p, double beta, double gamma) {
  std::vector<double> q;
  normalize_log_weights(folded_log_weights(p, beta, gamma), q);
  return q;
}

/// mu_0: the interaction-only law (beta = 0).
inline std::vector<double> mu0(const Problem& p, double gamma) { return qbar(p, 0.0, gamma); }

inline double linf_distance(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("linf_distance: size mismatch");
  double d = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) d = std::max(d, std::abs(a[k] - b[k]));
  return d;
}

inline double max_relative_difference(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("max_relative_difference: size mismatch");
  double d = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double scale = std::max(std::abs(a[k]), std::abs(b[k]));
    if (scale > 0.0) d = std::max(d, std::abs(a[k] - b[k]) / scale);
  }
  return d;
}

inline double total_variation(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("total_variation: size mismatch");
  double d = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) d += std::abs(a[k] - b[k]);
  return 0.5 * d;
}

}  // namespace rsa::exact
