#pragma once

// A tiny instance for exact analysis: a single-replica energy table on
// {-1,+1}^N and a replica count y. States of {-1,+1}^{Ny} use the canonical
// ReplicaEnsemble index (bit a*N + i set iff sigma_i^a = +1).

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "rsa/anneal/kernel.hpp"
#include "rsa/core/spin.hpp"
#include "rsa/energy/model.hpp"
#include "rsa/energy/table.hpp"

namespace rsa::exact {

inline constexpr std::size_t kMaxEnumeratedBits = 16;

class Problem {
 public:
  Problem(std::size_t n, std::size_t y, std::vector<double> energies)
      : n_(n), y_(y), energies_(std::move(energies)) {
    if (n == 0 || y == 0) throw std::invalid_argument("exact::Problem: N and y must be positive");
    if (n * y > kMaxEnumeratedBits)
      throw std::invalid_argument("exact::Problem: N*y = " + std::to_string(n * y) + " exceeds " +
                                  std::to_string(kMaxEnumeratedBits));
    if (energies_.size() != (std::size_t{1} << n))
      throw std::invalid_argument("exact::Problem: need 2^N single-replica energies");
    const std::size_t states = state_count();
    totals_.resize(states);
    fields_.resize(states * n_);
    for (std::size_t s = 0; s < states; ++s) {
      double e = 0.0;
      for (std::size_t a = 0; a < y_; ++a) e += energies_[replica_index(s, a)];
      totals_[s] = e;
      for (std::size_t i = 0; i < n_; ++i) {
        int f = 0;
        for (std::size_t a = 0; a < y_; ++a) f += ((s >> (a * n_ + i)) & 1u) ? 1 : -1;
        fields_[s * n_ + i] = f;
      }
    }
  }

  Problem(const TableEnergy& table, std::size_t y) : Problem(table.dimension(), y, table.values()) {}

  /// Tabulates any energy model on a small cube.
  template <EnergyModel M>
  static Problem from_model(const M& model, std::size_t y) {
    const std::size_t n = model.dimension();
    if (n > kMaxEnumeratedBits) throw std::invalid_argument("exact::Problem: model too large to enumerate");
    std::vector<double> e(std::size_t{1} << n);
    for (std::size_t s = 0; s < e.size(); ++s) e[s] = model.energy(SpinVector::from_index(s, n));
    return Problem(n, y, std::move(e));
  }

  [[nodiscard]] std::size_t n() const noexcept { return n_; }
  [[nodiscard]] std::size_t y() const noexcept { return y_; }
  [[nodiscard]] std::size_t bits() const noexcept { return n_ * y_; }
  [[nodiscard]] std::size_t state_count() const noexcept { return std::size_t{1} << (n_ * y_); }
  [[nodiscard]] std::size_t config_count() const noexcept { return std::size_t{1} << n_; }
  [[nodiscard]] const std::vector<double>& energies() const noexcept { return energies_; }

  [[nodiscard]] std::size_t replica_index(std::size_t state, std::size_t a) const noexcept {
    return (state >> (a * n_)) & (config_count() - 1);
  }
  [[nodiscard]] double total_energy(std::size_t state) const noexcept { return totals_[state]; }
  [[nodiscard]] int field(std::size_t state, std::size_t i) const noexcept { return fields_[state * n_ + i]; }

  /// sum_i log cosh(gamma * field_i).
  [[nodiscard]] double interaction(std::size_t state, double gamma) const noexcept {
    double h = 0.0;
    for (std::size_t i = 0; i < n_; ++i) h += log_cosh_stable(gamma * field(state, i));
    return h;
  }

  [[nodiscard]] bool aligned(std::size_t state) const noexcept {
    const std::size_t first = replica_index(state, 0);
    for (std::size_t a = 1; a < y_; ++a)
      if (replica_index(state, a) != first) return false;
    return true;
  }

  [[nodiscard]] double min_energy() const noexcept {
    double m = energies_.front();
    for (double e : energies_) m = std::min(m, e);
    return m;
  }

 private:
  std::size_t n_;
  std::size_t y_;
  std::vector<double> energies_;
  std::vector<double> totals_;
  std::vector<int> fields_;
};

/// Normalizes log-weights into a probability vector; returns log of the sum.
inline double normalize_log_weights(const std::vector<double>& logw, std::vector<double>& out) {
  double m = -INFINITY;
  for (double v : logw) m = std::max(m, v);
  double s = 0.0;
  out.resize(logw.size());
  for (std::size_t k = 0; k < logw.size(); ++k) {
    out[k] = std::exp(logw[k] - m);
    s += out[k];
  }
  for (double& v : out) v /= s;
  return m + std::log(s);
}

}  // namespace rsa::exact
