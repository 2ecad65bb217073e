#pragma once

// Multinomial logistic classifier with a K x d sign matrix as weights. The
// energy is the (scaled) cross-entropy of the softmax of the K row scores.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "rsa/core/spin.hpp"

namespace rsa {

/// n samples of d features in [0,1] with class targets in [0, K).
struct ClassifierDataset {
  std::size_t n = 0;
  std::size_t d = 0;
  std::size_t classes = 0;
  std::vector<float> features;  // row-major n x d
  std::vector<int> targets;

  ClassifierDataset() = default;
  ClassifierDataset(std::size_t d_, std::size_t k_, std::vector<float> x, std::vector<int> t)
      : d(d_), classes(k_), features(std::move(x)), targets(std::move(t)) {
    n = targets.size();
    validate();
  }

  [[nodiscard]] std::span<const float> row(std::size_t s) const {
    return {features.data() + s * d, d};
  }

  void validate() const {
    if (n == 0 || d == 0 || classes == 0)
      throw std::invalid_argument("ClassifierDataset: n, d and K must be positive");
    if (features.size() != n * d)
      throw std::invalid_argument("ClassifierDataset: expected " + std::to_string(n * d) +
                                  " feature values, got " + std::to_string(features.size()));
    if (targets.size() != n) throw std::invalid_argument("ClassifierDataset: target count mismatch");
    for (float v : features)
      if (!(v >= 0.0f && v <= 1.0f)) throw std::invalid_argument("ClassifierDataset: feature outside [0,1]");
    for (int t : targets)
      if (t < 0 || static_cast<std::size_t>(t) >= classes)
        throw std::invalid_argument("ClassifierDataset: target " + std::to_string(t) + " out of range");
  }

  /// Subset of the given sample indices, in that order.
  [[nodiscard]] ClassifierDataset subset(std::span<const std::size_t> idx) const {
    std::vector<float> x;
    x.reserve(idx.size() * d);
    std::vector<int> t;
    t.reserve(idx.size());
    for (std::size_t s : idx) {
      if (s >= n) throw std::out_of_range("ClassifierDataset::subset: index out of range");
      auto r = row(s);
      x.insert(x.end(), r.begin(), r.end());
      t.push_back(targets[s]);
    }
    return ClassifierDataset(d, classes, std::move(x), std::move(t));
  }
};

inline double log_sum_exp(std::span<const double> v) {
  double m = -std::numeric_limits<double>::infinity();
  for (double x : v) m = std::max(m, x);
  double s = 0.0;
  for (double x : v) s += std::exp(x - m);
  return m + std::log(s);
}

/// -log softmax(logits)[target].
inline double softmax_cross_entropy(std::span<const double> logits, std::size_t target) {
  return log_sum_exp(logits) - logits[target];
}

/// Index of the largest logit; ties go to the smallest class index.
inline std::size_t argmax_class(std::span<const double> logits) {
  std::size_t best = 0;
  for (std::size_t k = 1; k < logits.size(); ++k)
    if (logits[k] > logits[best]) best = k;
  return best;
}

class CrossEntropyEnergy {
 public:
  /// Energy = scale * sum_i -log y_{i,t_i}. scale = 1 is the plain sum;
  /// scale = 1/n gives the mean loss.
  explicit CrossEntropyEnergy(ClassifierDataset data, double scale = 1.0)
      : data_(std::make_shared<const Data>(std::move(data))), scale_(scale) {
    if (!(scale > 0.0)) throw std::invalid_argument("CrossEntropyEnergy: scale must be positive");
  }

  [[nodiscard]] std::size_t dimension() const noexcept { return data_->set.classes * data_->set.d; }
  [[nodiscard]] std::size_t classes() const noexcept { return data_->set.classes; }
  [[nodiscard]] std::size_t features() const noexcept { return data_->set.d; }
  [[nodiscard]] std::size_t samples() const noexcept { return data_->set.n; }
  [[nodiscard]] double scale() const noexcept { return scale_; }
  [[nodiscard]] const ClassifierDataset& dataset() const noexcept { return data_->set; }

  /// Row-major n x K matrix of class scores <W_k, x_s>.
  [[nodiscard]] std::vector<double> logits(const SpinVector& w) const {
    check(w);
    const auto& ds = data_->set;
    std::vector<double> out(ds.n * ds.classes, 0.0);
    for (std::size_t s = 0; s < ds.n; ++s) {
      auto x = ds.row(s);
      for (std::size_t k = 0; k < ds.classes; ++k) {
        double acc = 0.0;
        const std::size_t base = k * ds.d;
        for (std::size_t j = 0; j < ds.d; ++j) acc += w[base + j] * static_cast<double>(x[j]);
        out[s * ds.classes + k] = acc;
      }
    }
    return out;
  }

  /// Unscaled sum of per-sample cross-entropies.
  [[nodiscard]] double total_loss(const SpinVector& w) const {
    const auto l = logits(w);
    double sum = 0.0;
    for (std::size_t s = 0; s < samples(); ++s)
      sum += softmax_cross_entropy(sample_logits(l, s), static_cast<std::size_t>(data_->set.targets[s]));
    return sum;
  }

  [[nodiscard]] double mean_loss(const SpinVector& w) const {
    return total_loss(w) / static_cast<double>(samples());
  }

  [[nodiscard]] double energy(const SpinVector& w) const { return scale_ * total_loss(w); }

  [[nodiscard]] double accuracy(const SpinVector& w) const { return accuracy_of(logits(w)); }

  void bind(const SpinVector& w) {
    logits_ = logits(w);
    lse_.assign(samples(), 0.0);
    double sum = 0.0;
    for (std::size_t s = 0; s < samples(); ++s) {
      lse_[s] = log_sum_exp(sample_logits(logits_, s));
      sum += lse_[s] - logits_[s * classes() + static_cast<std::size_t>(data_->set.targets[s])];
    }
    loss_ = sum;
  }

  /// Exact energy change of flipping weight i = k*d + j. Only samples with
  /// x_{s,j} != 0 are touched.
  [[nodiscard]] double delta(const SpinVector& w, std::size_t i) const {
    if (i >= dimension()) throw std::out_of_range("CrossEntropyEnergy: coordinate out of range");
    return scale_ * loss_change(w, i, nullptr);
  }

  void commit_flip(const SpinVector& w, std::size_t i) {
    if (i >= dimension()) throw std::out_of_range("CrossEntropyEnergy: coordinate out of range");
    loss_ += loss_change(w, i, this);
  }

  [[nodiscard]] double cached_energy() const noexcept { return scale_ * loss_; }
  [[nodiscard]] double cached_loss() const noexcept { return loss_; }
  [[nodiscard]] double cached_accuracy() const { return accuracy_of(logits_); }
  [[nodiscard]] const std::vector<double>& cached_logits() const noexcept { return logits_; }

  /// Throws std::logic_error if the cache disagrees with `w` beyond rounding.
  void verify_cache(const SpinVector& w, double tol = 1e-9) const {
    const auto fresh = logits(w);
    for (std::size_t q = 0; q < fresh.size(); ++q)
      if (std::abs(fresh[q] - logits_[q]) > tol * std::max(1.0, std::abs(fresh[q])))
        throw std::logic_error("CrossEntropyEnergy: stale logit cache");
    const double e = total_loss(w);
    if (std::abs(e - loss_) > tol * std::max(1.0, std::abs(e)))
      throw std::logic_error("CrossEntropyEnergy: stale loss cache");
  }

 private:
  struct Entry {
    std::uint32_t sample;
    float value;
  };

  struct Data {
    explicit Data(ClassifierDataset ds) : set(std::move(ds)) {
      set.validate();
      column_start.assign(set.d + 1, 0);
      for (std::size_t s = 0; s < set.n; ++s)
        for (std::size_t j = 0; j < set.d; ++j)
          if (set.features[s * set.d + j] != 0.0f) ++column_start[j + 1];
      for (std::size_t j = 0; j < set.d; ++j) column_start[j + 1] += column_start[j];
      entries.resize(column_start[set.d]);
      std::vector<std::size_t> fill(column_start.begin(), column_start.end() - 1);
      for (std::size_t s = 0; s < set.n; ++s)
        for (std::size_t j = 0; j < set.d; ++j) {
          const float v = set.features[s * set.d + j];
          if (v != 0.0f) entries[fill[j]++] = Entry{static_cast<std::uint32_t>(s), v};
        }
    }
    ClassifierDataset set;
    std::vector<std::size_t> column_start;  // CSC layout of the nonzero features
    std::vector<Entry> entries;
  };

  [[nodiscard]] std::span<const double> sample_logits(const std::vector<double>& l, std::size_t s) const {
    return {l.data() + s * classes(), classes()};
  }

  // Unscaled loss change for flipping weight i; applies it to `target` if given.
  double loss_change(const SpinVector& w, std::size_t i, CrossEntropyEnergy* target) const {
    const std::size_t kk = classes();
    const std::size_t k = i / features();
    const std::size_t j = i % features();
    const double step = -2.0 * w[i];
    const auto& dd = *data_;
    double change = 0.0;
    double scratch[64];
    std::vector<double> big;
    double* buf = scratch;
    if (kk > 64) {
      big.resize(kk);
      buf = big.data();
    }
    for (std::size_t q = dd.column_start[j]; q < dd.column_start[j + 1]; ++q) {
      const std::size_t s = dd.entries[q].sample;
      const double* row = &logits_[s * kk];
      const double shift = step * static_cast<double>(dd.entries[q].value);
      const double share = std::exp(row[k] - lse_[s]);  // softmax probability of class k
      double lse;
      if (share <= 0.5) {
        // Only logit k moves: lse' = lse + log(1 + share (e^shift - 1)). The
        // argument stays >= -0.5, so there is no cancellation.
        lse = lse_[s] + std::log1p(share * std::expm1(shift));
      } else {
        for (std::size_t c = 0; c < kk; ++c) buf[c] = row[c];
        buf[k] += shift;
        lse = log_sum_exp(std::span<const double>(buf, kk));
      }
      const auto t = static_cast<std::size_t>(dd.set.targets[s]);
      const double target_shift = t == k ? shift : 0.0;
      change += (lse - lse_[s]) - target_shift;
      if (target != nullptr) {
        target->logits_[s * kk + k] = row[k] + shift;
        target->lse_[s] = lse;
      }
    }
    return change;
  }

  [[nodiscard]] double accuracy_of(const std::vector<double>& l) const {
    std::size_t ok = 0;
    for (std::size_t s = 0; s < samples(); ++s)
      if (argmax_class(sample_logits(l, s)) == static_cast<std::size_t>(data_->set.targets[s])) ++ok;
    return static_cast<double>(ok) / static_cast<double>(samples());
  }

  void check(const SpinVector& w) const {
    if (w.size() != dimension())
      throw std::invalid_argument("CrossEntropyEnergy: weight length " + std::to_string(w.size()) +
                                  " != K*d = " + std::to_string(dimension()));
  }

  std::shared_ptr<const Data> data_;
  double scale_;
  std::vector<double> logits_;
  std::vector<double> lse_;
  double loss_ = 0.0;
};

}  // namespace rsa
