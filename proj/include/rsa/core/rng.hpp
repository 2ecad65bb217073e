#pragma once

// Counter-based pseudo random numbers (Philox4x32-10).
//
// Every stream is identified by a 64-bit key; the counter walks through the
// stream. split() derives child keys deterministically from the parent key, so
// sweep points and perturbation repetitions get independent streams that do
// not depend on the order in which they are evaluated.
//
// The draw primitives below (uniform_index, uniform01, coin) are part of the
// reproducibility contract: changing them changes every recorded trajectory.

#include <array>
#include <cstdint>
#include <limits>

namespace rsa {

class Philox {
 public:
  using result_type = std::uint32_t;
  using Block = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static constexpr std::uint32_t kMul0 = 0xD2511F53u;
  static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
  static constexpr int kRounds = 10;

  explicit Philox(std::uint64_t seed = 0) noexcept
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)} {}

  Philox(Key key, std::uint64_t counter) noexcept : key_(key), counter_(counter) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  /// The raw block function: ten rounds of Philox4x32 on (counter, key).
  static Block encrypt(Block ctr, Key key) noexcept {
    for (int r = 0; r < kRounds; ++r) {
      const std::uint64_t p0 = std::uint64_t{kMul0} * ctr[0];
      const std::uint64_t p1 = std::uint64_t{kMul1} * ctr[2];
      const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
      const auto lo0 = static_cast<std::uint32_t>(p0);
      const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
      const auto lo1 = static_cast<std::uint32_t>(p1);
      ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    return ctr;
  }

  result_type operator()() noexcept {
    if (lane_ == 4) refill();
    return buffer_[lane_++];
  }

  std::uint64_t next_u64() noexcept {
    const std::uint64_t lo = (*this)();
    const std::uint64_t hi = (*this)();
    return (hi << 32) | lo;
  }

  /// Uniform integer in [0, n) (Lemire's multiply-shift with rejection). n > 0.
  std::uint32_t uniform_index(std::uint32_t n) noexcept {
    std::uint64_t m = std::uint64_t{(*this)()} * n;
    auto low = static_cast<std::uint32_t>(m);
    if (low < n) {
      const std::uint32_t threshold = static_cast<std::uint32_t>(-n) % n;
      while (low < threshold) {
        m = std::uint64_t{(*this)()} * n;
        low = static_cast<std::uint32_t>(m);
      }
    }
    return static_cast<std::uint32_t>(m >> 32);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Fair coin from the top bit of one draw.
  bool coin() noexcept { return ((*this)() >> 31) != 0; }

  /// Independent child stream. Depends only on this stream's key and `stream`.
  [[nodiscard]] Philox split(std::uint64_t stream) const noexcept {
    const Block b = encrypt({static_cast<std::uint32_t>(stream),
                             static_cast<std::uint32_t>(stream >> 32), 0x5EED5EEDu, 0x0u},
                            key_);
    return Philox(Key{b[0] ^ b[2], b[1] ^ b[3]}, 0);
  }

  [[nodiscard]] Philox split(std::uint64_t a, std::uint64_t b) const noexcept {
    return split(a).split(b);
  }

  [[nodiscard]] const Key& key() const noexcept { return key_; }
  [[nodiscard]] std::uint64_t counter() const noexcept { return counter_; }

  friend bool operator==(const Philox& x, const Philox& y) noexcept {
    return x.key_ == y.key_ && x.counter_ == y.counter_ && x.lane_ == y.lane_;
  }

 private:
  void refill() noexcept {
    buffer_ = encrypt({static_cast<std::uint32_t>(counter_),
                       static_cast<std::uint32_t>(counter_ >> 32), 0u, 0u},
                      key_);
    ++counter_;
    lane_ = 0;
  }

  Key key_{};
  std::uint64_t counter_ = 0;
  Block buffer_{};
  int lane_ = 4;
};

/// Seed of the stream split from `base` by `stream` (the sweep splitting rule).
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) noexcept {
  Philox child = Philox(base).split(stream);
  return child.next_u64();
}

}  // namespace rsa
