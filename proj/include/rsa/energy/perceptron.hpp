#pragma once

// Binary perceptron energy: E(W) = sum_mu R(-theta^mu <W, xi^mu>), where R(x)
// counts the coordinate flips that pattern mu needs to become classified.

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "rsa/core/rng.hpp"
#include "rsa/core/spin.hpp"

namespace rsa {

/// M patterns xi^mu in {-1,+1}^N with labels theta^mu in {-1,+1}.
struct PatternSet {
  std::vector<SpinVector> patterns;
  std::vector<int> labels;

  PatternSet() = default;
  PatternSet(std::vector<SpinVector> p, std::vector<int> l)
      : patterns(std::move(p)), labels(std::move(l)) {
    validate();
  }

  [[nodiscard]] std::size_t count() const noexcept { return patterns.size(); }
  [[nodiscard]] std::size_t dimension() const noexcept {
    return patterns.empty() ? 0 : patterns.front().size();
  }
  [[nodiscard]] double alpha() const noexcept {
    return static_cast<double>(count()) / static_cast<double>(dimension());
  }

  void validate() const {
    if (patterns.empty()) throw std::invalid_argument("PatternSet: need at least one pattern");
    if (labels.size() != patterns.size())
      throw std::invalid_argument("PatternSet: " + std::to_string(labels.size()) + " labels for " +
                                  std::to_string(patterns.size()) + " patterns");
    for (const auto& p : patterns)
      if (p.size() != dimension()) throw std::invalid_argument("PatternSet: patterns differ in length");
    for (int l : labels)
      if (l != 1 && l != -1) throw std::invalid_argument("PatternSet: labels must be -1 or +1");
  }
};

/// How a zero margin is charged when N is even (for odd N margins are odd and
/// both rules agree).
enum class TieRule {
  /// R(x) = (x/2) Theta(x): a pattern sitting exactly on the hyperplane costs 0.
  lenient,
  /// R(x) = floor(x/2) + 1 for x >= 0: zero margins count as misclassified, so
  /// E = 0 exactly when every pattern has theta <W,xi> > 0.
  strict,
};

/// Flips needed to fix a pattern with negated margin x. Odd mode:
/// (x+1)/2 Theta(x); even mode: x/2 Theta(x) (or the strict variant).
inline double rectified_margin(int x, bool odd_mode, TieRule rule = TieRule::lenient) {
  if (odd_mode || rule == TieRule::lenient) {
    if (x <= 0) return 0.0;
    return odd_mode ? (x + 1) / 2 : x / 2;
  }
  if (x < 0) return 0.0;
  return x / 2 + 1;
}

/// Uniform random patterns and labels; deterministic per seed.
inline PatternSet generate_synthetic(std::size_t count, std::size_t dim, std::uint64_t seed) {
  Philox rng(seed);
  std::vector<SpinVector> patterns;
  patterns.reserve(count);
  for (std::size_t mu = 0; mu < count; ++mu) patterns.push_back(SpinVector::random(dim, rng));
  std::vector<int> labels(count);
  for (auto& l : labels) l = rng.coin() ? 1 : -1;
  return PatternSet(std::move(patterns), std::move(labels));
}

class PerceptronEnergy {
 public:
  explicit PerceptronEnergy(PatternSet data, TieRule rule = TieRule::lenient)
      : data_(std::make_shared<const Data>(std::move(data))), rule_(rule) {}

  [[nodiscard]] std::size_t dimension() const noexcept { return data_->n; }
  [[nodiscard]] std::size_t pattern_count() const noexcept { return data_->m; }
  [[nodiscard]] bool odd_mode() const noexcept { return data_->n % 2 == 1; }
  [[nodiscard]] TieRule tie_rule() const noexcept { return rule_; }
  [[nodiscard]] const PatternSet& patterns() const noexcept { return data_->set; }

  /// theta^mu <W, xi^mu> for every pattern.
  [[nodiscard]] std::vector<int> margins(const SpinVector& w) const {
    check(w);
    std::vector<int> h(data_->m, 0);
    for (std::size_t mu = 0; mu < data_->m; ++mu) {
      const Spin* row = &data_->signed_rows[mu * data_->n];
      int s = 0;
      for (std::size_t i = 0; i < data_->n; ++i) s += row[i] * w[i];
      h[mu] = s;
    }
    return h;
  }

  [[nodiscard]] double energy(const SpinVector& w) const { return energy_of(margins(w)); }

  [[nodiscard]] double accuracy(const SpinVector& w) const { return accuracy_of(margins(w)); }

  void bind(const SpinVector& w) {
    margins_ = margins(w);
    energy_ = energy_of(margins_);
  }

  [[nodiscard]] double delta(const SpinVector& w, std::size_t i) const {
    if (i >= data_->n) throw std::out_of_range("PerceptronEnergy: coordinate out of range");
    const Spin* col = &data_->signed_cols[i * data_->m];
    const int wi = w[i];
    const bool odd = odd_mode();
    double d = 0.0;
    for (std::size_t mu = 0; mu < data_->m; ++mu) {
      const int h = margins_[mu];
      const int after = h - 2 * wi * col[mu];
      d += rectified_margin(-after, odd, rule_) - rectified_margin(-h, odd, rule_);
    }
    return d;
  }

  void commit_flip(const SpinVector& w, std::size_t i) {
    const double d = delta(w, i);
    const Spin* col = &data_->signed_cols[i * data_->m];
    const int wi = w[i];
    for (std::size_t mu = 0; mu < data_->m; ++mu) margins_[mu] -= 2 * wi * col[mu];
    energy_ += d;
  }

  [[nodiscard]] double cached_energy() const noexcept { return energy_; }
  [[nodiscard]] double cached_accuracy() const { return accuracy_of(margins_); }

  /// Throws std::logic_error if the cache does not describe `w`.
  void verify_cache(const SpinVector& w) const {
    if (margins_ != margins(w) || energy_ != energy_of(margins_))
      throw std::logic_error("PerceptronEnergy: stale margin cache");
  }
  [[nodiscard]] const std::vector<int>& cached_margins() const noexcept { return margins_; }

 private:
  struct Data {
    explicit Data(PatternSet s) : set(std::move(s)) {
      set.validate();
      m = set.count();
      n = set.dimension();
      signed_rows.resize(m * n);
      signed_cols.resize(m * n);
      for (std::size_t mu = 0; mu < m; ++mu)
        for (std::size_t i = 0; i < n; ++i) {
          const auto v = static_cast<Spin>(set.labels[mu] * set.patterns[mu][i]);
          signed_rows[mu * n + i] = v;
          signed_cols[i * m + mu] = v;
        }
    }
    PatternSet set;
    std::size_t m = 0;
    std::size_t n = 0;
    std::vector<Spin> signed_rows;  // theta^mu xi^mu_i, pattern-major
    std::vector<Spin> signed_cols;  // same, coordinate-major
  };

  void check(const SpinVector& w) const {
    if (w.size() != data_->n)
      throw std::invalid_argument("PerceptronEnergy: weight length " + std::to_string(w.size()) +
                                  " != " + std::to_string(data_->n));
  }

  [[nodiscard]] double energy_of(const std::vector<int>& h) const {
    double e = 0.0;
    for (int v : h) e += rectified_margin(-v, odd_mode(), rule_);
    return e;
  }

  // A pattern counts as classified exactly when it costs no energy: margin > 0,
  // or margin >= 0 under the lenient rule (only reachable for even N).
  [[nodiscard]] double accuracy_of(const std::vector<int>& h) const {
    const int floor = rule_ == TieRule::lenient ? 0 : 1;
    std::size_t ok = 0;
    for (int v : h) ok += v >= floor ? 1 : 0;
    return static_cast<double>(ok) / static_cast<double>(h.size());
  }

  std::shared_ptr<const Data> data_;
  TieRule rule_;
  std::vector<int> margins_;
  double energy_ = 0.0;
};

}  // namespace rsa
