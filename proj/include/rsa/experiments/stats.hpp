#pragma once

// Summary statistics and a small deterministic parallel map.

#include <atomic>
#include <cmath>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <stdexcept>
#include <thread>
#include <vector>

#include <boost/math/distributions/normal.hpp>

namespace rsa::experiments {

struct MeanCi {
  double mean = 0.0;
  double half_width = 0.0;  // normal approximation
  std::size_t count = 0;
};

/// Mean with a normal-approximation confidence half-width z * s / sqrt(n)
/// (sample standard deviation; zero for a single value).
inline MeanCi mean_ci(const std::vector<double>& v, double confidence = 0.95) {
  if (v.empty()) throw std::invalid_argument("mean_ci: empty sample");
  MeanCi r;
  r.count = v.size();
  for (double x : v) r.mean += x;
  r.mean /= static_cast<double>(v.size());
  if (v.size() < 2) return r;
  double ss = 0.0;
  for (double x : v) ss += (x - r.mean) * (x - r.mean);
  const double sd = std::sqrt(ss / static_cast<double>(v.size() - 1));
  const double z = boost::math::quantile(boost::math::normal(), 0.5 + confidence / 2.0);
  r.half_width = z * sd / std::sqrt(static_cast<double>(v.size()));
  return r;
}

/// Calls fn(k) for k in [0, n) on up to `jobs` threads. Results are written by
/// index, so output never depends on scheduling. The first exception is
/// rethrown after all workers stop.
template <class Fn>
void parallel_for(std::size_t n, std::size_t jobs, Fn&& fn) {
  if (jobs <= 1 || n <= 1) {
    for (std::size_t k = 0; k < n; ++k) fn(k);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t k = next.fetch_add(1);
      if (k >= n) return;
      try {
        fn(k);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(n);
        return;
      }
    }
  };
  std::vector<std::thread> threads;
  const std::size_t count = std::min(jobs, n);
  threads.reserve(count);
  for (std::size_t t = 0; t < count; ++t) threads.emplace_back(worker);
  for (auto& t : threads) t.join();
  if (error) std::rethrow_exception(error);
}

template <class T, class Fn>
std::vector<T> parallel_map(std::size_t n, std::size_t jobs, Fn&& fn) {
  std::vector<T> out(n);
  parallel_for(n, jobs, [&](std::size_t k) { out[k] = fn(k); });
  return out;
}

}  // namespace rsa::experiments
