#pragma once

// Robustness of a trained sign vector to random weight flips.

#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "rsa/core/rng.hpp"
#include "rsa/core/spin.hpp"
#include "rsa/experiments/stats.hpp"

namespace rsa::experiments {

struct CurvePoint {
  double p = 0.0;
  std::size_t flips = 0;
  double mean_accuracy = 0.0;
  double ci_half_width = 0.0;
  std::size_t repetitions = 0;
};

/// Number of coordinates flipped for proportion p: round(p N).
inline std::size_t flip_count(double p, std::size_t n) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("flip_count: p must lie in [0,1]");
  return static_cast<std::size_t>(std::llround(p * static_cast<double>(n)));
}

/// Copy of w with exactly k distinct uniformly chosen coordinates flipped.
inline SpinVector perturb(const SpinVector& w, std::size_t k, Philox& rng) {
  const std::size_t n = w.size();
  if (k > n) throw std::invalid_argument("perturb: more flips than coordinates");
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  SpinVector out = w;
  for (std::size_t j = 0; j < k; ++j) {
    const std::size_t r = j + rng.uniform_index(static_cast<std::uint32_t>(n - j));
    std::swap(idx[j], idx[r]);
    out.flip(idx[j]);
  }
  return out;
}

/// For each p: mean accuracy over `repetitions` perturbations and its normal
/// 95% (or `confidence`) half-width. Repetition r at grid point k draws from
/// the stream Philox(seed).split(k, r), so results do not depend on `jobs`.
template <class Model>
std::vector<CurvePoint> robustness_eval(const SpinVector& w, const Model& model, const std::vector<double>& ps,
                                        std::size_t repetitions, std::uint64_t seed, std::size_t jobs = 1,
                                        double confidence = 0.95) {
  if (repetitions == 0) throw std::invalid_argument("robustness_eval: repetitions must be >= 1");
  std::vector<CurvePoint> out;
  const Philox root(seed);
  for (std::size_t k = 0; k < ps.size(); ++k) {
    CurvePoint c;
    c.p = ps[k];
    c.flips = flip_count(ps[k], w.size());
    if (c.flips == 0) {
      // every repetition would evaluate w itself
      c.mean_accuracy = model.accuracy(w);
      c.repetitions = repetitions;
      out.push_back(c);
      continue;
    }
    const auto acc = parallel_map<double>(repetitions, jobs, [&](std::size_t r) {
      Philox rng = root.split(k, r);
      return model.accuracy(perturb(w, c.flips, rng));
    });
    const auto s = mean_ci(acc, confidence);
    c.mean_accuracy = s.mean;
    c.ci_half_width = s.half_width;
    c.repetitions = repetitions;
    out.push_back(c);
  }
  return out;
}

}  // namespace rsa::experiments
