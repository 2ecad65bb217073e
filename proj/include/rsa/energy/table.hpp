#pragma once

// Arbitrary energy landscape on a small cube, given as a lookup table indexed
// by SpinVector::index(). Used for crafted landscapes and exact analysis.

#include <cmath>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "rsa/core/spin.hpp"

namespace rsa {

class TableEnergy {
 public:
  TableEnergy(std::size_t n, std::vector<double> values)
      : n_(n), values_(std::make_shared<const std::vector<double>>(std::move(values))) {
    if (n == 0 || n > 20) throw std::invalid_argument("TableEnergy: need 1 <= N <= 20");
    if (values_->size() != (std::size_t{1} << n))
      throw std::invalid_argument("TableEnergy: expected 2^N = " + std::to_string(std::size_t{1} << n) +
                                  " values, got " + std::to_string(values_->size()));
  }

  /// Tabulates any callable double(const SpinVector&).
  template <class F>
  static TableEnergy tabulate(std::size_t n, F&& f) {
    std::vector<double> v(std::size_t{1} << n);
    for (std::size_t s = 0; s < v.size(); ++s) v[s] = f(SpinVector::from_index(s, n));
    return TableEnergy(n, std::move(v));
  }

  [[nodiscard]] std::size_t dimension() const noexcept { return n_; }
  [[nodiscard]] const std::vector<double>& values() const noexcept { return *values_; }
  [[nodiscard]] double at(std::uint64_t index) const { return values_->at(index); }

  [[nodiscard]] double energy(const SpinVector& w) const {
    check(w);
    return (*values_)[w.index()];
  }

  /// 1 at a zero-energy configuration, 0 otherwise.
  [[nodiscard]] double accuracy(const SpinVector& w) const { return energy(w) == 0.0 ? 1.0 : 0.0; }

  void bind(const SpinVector& w) {
    check(w);
    index_ = w.index();
  }

  [[nodiscard]] double delta(const SpinVector& w, std::size_t i) const {
    if (i >= n_) throw std::out_of_range("TableEnergy: coordinate out of range");
    (void)w;
    return (*values_)[index_ ^ (std::uint64_t{1} << i)] - (*values_)[index_];
  }

  void commit_flip(const SpinVector& w, std::size_t i) {
    (void)w;
    index_ ^= std::uint64_t{1} << i;
  }

  [[nodiscard]] double cached_energy() const { return (*values_)[index_]; }
  [[nodiscard]] double cached_accuracy() const { return cached_energy() == 0.0 ? 1.0 : 0.0; }

  void verify_cache(const SpinVector& w) const {
    if (w.index() != index_) throw std::logic_error("TableEnergy: stale index cache");
  }

 private:
  void check(const SpinVector& w) const {
    if (w.size() != n_) throw std::invalid_argument("TableEnergy: dimension mismatch");
  }

  std::size_t n_;
  std::shared_ptr<const std::vector<double>> values_;
  std::uint64_t index_ = 0;
};

}  // namespace rsa
