#pragma once

// Per-class train/test splits and uniform subsampling.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "rsa/core/rng.hpp"
#include "rsa/energy/cross_entropy.hpp"

namespace rsa::io {

class InsufficientSamplesError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Fisher-Yates driven by Philox so the permutation is pinned across platforms.
inline void shuffle_indices(std::vector<std::size_t>& v, Philox& rng) {
  for (std::size_t k = v.size(); k > 1; --k) {
    const std::size_t j = rng.uniform_index(static_cast<std::uint32_t>(k));
    std::swap(v[k - 1], v[j]);
  }
}

struct SplitIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

/// Draws, for each class, train_per_class + test_per_class distinct samples
/// and assigns the first ones to train. Indices come out sorted.
inline SplitIndices split_indices(const ClassifierDataset& data, std::size_t train_per_class,
                                  std::size_t test_per_class, std::uint64_t seed) {
  std::vector<std::vector<std::size_t>> by_class(data.classes);
  for (std::size_t s = 0; s < data.n; ++s) by_class[static_cast<std::size_t>(data.targets[s])].push_back(s);
  const Philox root(seed);
  SplitIndices out;
  for (std::size_t k = 0; k < data.classes; ++k) {
    auto& pool = by_class[k];
    if (pool.size() < train_per_class + test_per_class)
      throw InsufficientSamplesError("make_splits: class " + std::to_string(k) + " has " +
                                     std::to_string(pool.size()) + " samples, need " +
                                     std::to_string(train_per_class + test_per_class));
    Philox rng = root.split(k);
    shuffle_indices(pool, rng);
    out.train.insert(out.train.end(), pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(train_per_class));
    out.test.insert(out.test.end(), pool.begin() + static_cast<std::ptrdiff_t>(train_per_class),
                    pool.begin() + static_cast<std::ptrdiff_t>(train_per_class + test_per_class));
  }
  std::sort(out.train.begin(), out.train.end());
  std::sort(out.test.begin(), out.test.end());
  return out;
}

struct Split {
  ClassifierDataset train;
  ClassifierDataset test;
};

inline Split make_splits(const ClassifierDataset& data, std::size_t train_per_class, std::size_t test_per_class,
                         std::uint64_t seed) {
  const auto idx = split_indices(data, train_per_class, test_per_class, seed);
  return Split{data.subset(idx.train), data.subset(idx.test)};
}

/// `target` distinct indices of [0, n) drawn uniformly, sorted.
inline std::vector<std::size_t> subsample_indices(std::size_t n, std::size_t target, std::uint64_t seed) {
  if (target > n)
    throw InsufficientSamplesError("subsample: asked for " + std::to_string(target) + " of " + std::to_string(n) +
                                   " samples");
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  Philox rng(seed);
  // partial Fisher-Yates: the first `target` slots are a uniform sample
  for (std::size_t k = 0; k < target; ++k) {
    const std::size_t j = k + rng.uniform_index(static_cast<std::uint32_t>(n - k));
    std::swap(idx[k], idx[j]);
  }
  idx.resize(target);
  std::sort(idx.begin(), idx.end());
  return idx;
}

inline ClassifierDataset subsample(const ClassifierDataset& data, std::size_t target, std::uint64_t seed) {
  if (target == data.n) return data;
  return data.subset(subsample_indices(data.n, target, seed));
}

}  // namespace rsa::io
