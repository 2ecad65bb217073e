#pragma once

// Spin configurations on {-1,+1}^N and the replicated state of the chain.

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "rsa/core/rng.hpp"

namespace rsa {

using Spin = std::int8_t;

/// A point of {-1,+1}^N, stored as ±1 integers.
class SpinVector {
 public:
  SpinVector() = default;

  /// All spins up.
  explicit SpinVector(std::size_t n) : values_(n, Spin{1}) {
    if (n == 0) throw std::invalid_argument("SpinVector: length must be positive");
  }

  SpinVector(std::initializer_list<int> values) : SpinVector(std::vector<int>(values)) {}

  explicit SpinVector(const std::vector<int>& values) {
    if (values.empty()) throw std::invalid_argument("SpinVector: length must be positive");
    values_.reserve(values.size());
    for (int v : values) {
      if (v != 1 && v != -1)
        throw std::invalid_argument("SpinVector: entries must be -1 or +1, got " +
                                    std::to_string(v));
      values_.push_back(static_cast<Spin>(v));
    }
  }

  /// Configuration with bit i of `index` set meaning spin i is +1.
  static SpinVector from_index(std::uint64_t index, std::size_t n) {
    SpinVector s(n);
    for (std::size_t i = 0; i < n; ++i) s.values_[i] = ((index >> i) & 1u) ? Spin{1} : Spin{-1};
    return s;
  }

  static SpinVector random(std::size_t n, Philox& rng) {
    SpinVector s(n);
    for (auto& v : s.values_) v = rng.coin() ? Spin{1} : Spin{-1};
    return s;
  }

  [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
  [[nodiscard]] int operator[](std::size_t i) const noexcept { return values_[i]; }
  [[nodiscard]] int at(std::size_t i) const {
    if (i >= values_.size()) throw std::out_of_range("SpinVector: coordinate out of range");
    return values_[i];
  }
  [[nodiscard]] std::span<const Spin> values() const noexcept { return values_; }

  void flip(std::size_t i) {
    if (i >= values_.size()) throw std::out_of_range("SpinVector: coordinate out of range");
    values_[i] = static_cast<Spin>(-values_[i]);
  }

  /// Inverse of from_index.
  [[nodiscard]] std::uint64_t index() const noexcept {
    std::uint64_t idx = 0;
    for (std::size_t i = 0; i < values_.size() && i < 64; ++i)
      if (values_[i] > 0) idx |= std::uint64_t{1} << i;
    return idx;
  }

  [[nodiscard]] SpinVector negated() const {
    SpinVector s = *this;
    for (auto& v : s.values_) v = static_cast<Spin>(-v);
    return s;
  }

  friend bool operator==(const SpinVector&, const SpinVector&) = default;

 private:
  std::vector<Spin> values_;
};

inline void require_same_length(const SpinVector& x, const SpinVector& z) {
  if (x.size() != z.size())
    throw std::invalid_argument("spin vectors differ in length: " + std::to_string(x.size()) +
                                " vs " + std::to_string(z.size()));
}

/// <x, z> = sum_i x_i z_i.
inline int inner_product(const SpinVector& x, const SpinVector& z) {
  require_same_length(x, z);
  int sum = 0;
  for (std::size_t i = 0; i < x.size(); ++i) sum += x[i] * z[i];
  return sum;
}

/// Number of differing coordinates, (N - <x,z>) / 2.
inline int hamming_distance(const SpinVector& x, const SpinVector& z) {
  return (static_cast<int>(x.size()) - inner_product(x, z)) / 2;
}

struct FlipMove {
  std::size_t replica = 0;
  std::size_t coordinate = 0;
  friend bool operator==(const FlipMove&, const FlipMove&) = default;
};

/// y replicas of length N together with the per-coordinate replica field
/// fields[i] = sum_a sigma_i^a. N and y are fixed at construction.
class ReplicaEnsemble {
 public:
  ReplicaEnsemble() = default;

  explicit ReplicaEnsemble(std::vector<SpinVector> replicas) : replicas_(std::move(replicas)) {
    if (replicas_.empty()) throw std::invalid_argument("ReplicaEnsemble: need at least one replica");
    const std::size_t n = replicas_.front().size();
    if (n == 0) throw std::invalid_argument("ReplicaEnsemble: empty replica");
    for (const auto& r : replicas_)
      if (r.size() != n) throw std::invalid_argument("ReplicaEnsemble: replicas differ in length");
    fields_ = recompute_fields();
  }

  static ReplicaEnsemble random(std::size_t y, std::size_t n, Philox& rng) {
    std::vector<SpinVector> reps;
    reps.reserve(y);
    for (std::size_t a = 0; a < y; ++a) reps.push_back(SpinVector::random(n, rng));
    return ReplicaEnsemble(std::move(reps));
  }

  /// Canonical ordering: bit (a*N + i) set iff sigma_i^a = +1.
  static ReplicaEnsemble from_index(std::uint64_t index, std::size_t n, std::size_t y) {
    std::vector<SpinVector> reps;
    reps.reserve(y);
    const std::uint64_t mask = (n >= 64) ? ~std::uint64_t{0} : ((std::uint64_t{1} << n) - 1);
    for (std::size_t a = 0; a < y; ++a) reps.push_back(SpinVector::from_index((index >> (a * n)) & mask, n));
    return ReplicaEnsemble(std::move(reps));
  }

  [[nodiscard]] std::uint64_t index() const noexcept {
    std::uint64_t idx = 0;
    for (std::size_t a = 0; a < replicas_.size(); ++a) idx |= replicas_[a].index() << (a * size());
    return idx;
  }

  [[nodiscard]] std::size_t replica_count() const noexcept { return replicas_.size(); }
  [[nodiscard]] std::size_t size() const noexcept {
    return replicas_.empty() ? 0 : replicas_.front().size();
  }
  [[nodiscard]] const SpinVector& replica(std::size_t a) const { return replicas_.at(a); }
  [[nodiscard]] const std::vector<SpinVector>& replicas() const noexcept { return replicas_; }
  [[nodiscard]] std::span<const int> fields() const noexcept { return fields_; }

  [[nodiscard]] int replica_field(std::size_t i) const {
    if (i >= fields_.size()) throw std::out_of_range("replica_field: coordinate out of range");
    return fields_[i];
  }

  void check_move(const FlipMove& m) const {
    if (m.replica >= replicas_.size()) throw std::out_of_range("FlipMove: replica index out of range");
    if (m.coordinate >= size()) throw std::out_of_range("FlipMove: coordinate index out of range");
  }

  /// Field at the move's coordinate after the move is applied.
  [[nodiscard]] int field_after(const FlipMove& m) const {
    check_move(m);
    return fields_[m.coordinate] - 2 * replicas_[m.replica][m.coordinate];
  }

  void apply_flip(const FlipMove& m) {
    const int after = field_after(m);
    replicas_[m.replica].flip(m.coordinate);
    fields_[m.coordinate] = after;
  }

  [[nodiscard]] std::vector<int> recompute_fields() const {
    std::vector<int> f(size(), 0);
    for (const auto& r : replicas_)
      for (std::size_t i = 0; i < f.size(); ++i) f[i] += r[i];
    return f;
  }

  /// Cached fields agree with a fresh sum, and carry the range/parity of y.
  [[nodiscard]] bool fields_consistent() const {
    const auto y = static_cast<int>(replicas_.size());
    if (recompute_fields() != fields_) return false;
    for (int f : fields_)
      if (f > y || f < -y || ((f - y) % 2) != 0) return false;
    return true;
  }

  friend bool operator==(const ReplicaEnsemble&, const ReplicaEnsemble&) = default;

 private:
  std::vector<SpinVector> replicas_;
  std::vector<int> fields_;
};

/// Functional form of ReplicaEnsemble::apply_flip.
inline ReplicaEnsemble apply_flip(ReplicaEnsemble e, const FlipMove& m) {
  e.apply_flip(m);
  return e;
}

}  // namespace rsa
