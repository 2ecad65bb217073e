#pragma once

#include <concepts>
#include <cstddef>

#include "rsa/core/spin.hpp"

namespace rsa {

/// An energy E: {-1,+1}^N -> R with a per-configuration cache.
///
/// energy()/accuracy() evaluate from scratch and never touch the cache. The
/// cache is (re)built by bind(w); delta(w, i) is E(w with i flipped) - E(w)
/// for the bound w, and commit_flip(w, i) updates the cache for that flip
/// (w is the configuration *before* the flip). One model object per replica.
template <class M>
concept EnergyModel = std::copy_constructible<M> &&
    requires(M m, const M cm, const SpinVector& w, std::size_t i) {
      { cm.dimension() } -> std::convertible_to<std::size_t>;
      { cm.energy(w) } -> std::convertible_to<double>;
      { cm.accuracy(w) } -> std::convertible_to<double>;
      m.bind(w);
      { cm.delta(w, i) } -> std::convertible_to<double>;
      m.commit_flip(w, i);
      { cm.cached_energy() } -> std::convertible_to<double>;
      { cm.cached_accuracy() } -> std::convertible_to<double>;
    };

}  // namespace rsa
