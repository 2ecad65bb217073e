#pragma once

// The replicated simulated-annealing chain.
//
// Randomness contract per iteration (it is what makes runs reproducible and
// what the classical reference reproduces for y = 1):
//   1. q = rng.uniform_index(y * N); replica a = q / N, coordinate i = q % N;
//   2. u = rng.uniform01(); the move is accepted iff u < p(move).
// Initial replicas are drawn replica by replica, coordinate by coordinate, one
// rng.coin() per spin.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "rsa/anneal/kernel.hpp"
#include "rsa/anneal/schedule.hpp"
#include "rsa/core/rng.hpp"
#include "rsa/core/spin.hpp"
#include "rsa/energy/model.hpp"

namespace rsa {

template <EnergyModel M>
struct ChainState {
  ReplicaEnsemble ensemble;
  std::vector<M> models;  // one cache per replica
  std::uint64_t iteration = 0;
  Philox rng;

  ChainState(const M& model, ReplicaEnsemble e, Philox r) : ensemble(std::move(e)), rng(r) {
    if (ensemble.size() != model.dimension())
      throw std::invalid_argument("ChainState: ensemble length does not match model dimension");
    models.reserve(ensemble.replica_count());
    for (std::size_t a = 0; a < ensemble.replica_count(); ++a) {
      models.push_back(model);
      models.back().bind(ensemble.replica(a));
    }
  }

  /// y uniform random replicas drawn from the stream seeded by `seed`.
  static ChainState random(const M& model, std::size_t y, std::uint64_t seed) {
    if (y == 0) throw std::invalid_argument("ChainState: need at least one replica");
    Philox rng(seed);
    ReplicaEnsemble e = ReplicaEnsemble::random(y, model.dimension(), rng);
    return ChainState(model, std::move(e), rng);
  }

  [[nodiscard]] std::size_t replicas() const noexcept { return ensemble.replica_count(); }

  [[nodiscard]] std::vector<double> energies() const {
    std::vector<double> e;
    e.reserve(models.size());
    for (const auto& m : models) e.push_back(m.cached_energy());
    return e;
  }

  [[nodiscard]] double total_energy() const {
    double s = 0.0;
    for (const auto& m : models) s += m.cached_energy();
    return s;
  }

  [[nodiscard]] std::vector<double> accuracies() const {
    std::vector<double> acc;
    acc.reserve(models.size());
    for (const auto& m : models) acc.push_back(m.cached_accuracy());
    return acc;
  }

  /// Largest gap between cached and recomputed replica energies.
  [[nodiscard]] double energy_drift() const {
    double worst = 0.0;
    for (std::size_t a = 0; a < models.size(); ++a)
      worst = std::max(worst, std::abs(models[a].cached_energy() - models[a].energy(ensemble.replica(a))));
    return worst;
  }
};

struct TrajectorySample {
  std::uint64_t iteration = 0;
  double total_energy = 0.0;
  std::vector<double> accuracies;
  friend bool operator==(const TrajectorySample&, const TrajectorySample&) = default;
};

struct RunStats {
  std::uint64_t iterations = 0;
  std::uint64_t active_transitions = 0;
  std::vector<TrajectorySample> trajectory;
  double wall_seconds = 0.0;

  /// Equality ignoring wall-clock time.
  [[nodiscard]] bool same_run(const RunStats& o) const {
    return iterations == o.iterations && active_transitions == o.active_transitions && trajectory == o.trajectory;
  }
};

template <EnergyModel M>
FlipMove propose(ChainState<M>& state) {
  const std::size_t n = state.ensemble.size();
  const auto q = state.rng.uniform_index(static_cast<std::uint32_t>(state.replicas() * n));
  return FlipMove{q / n, q % n};
}

template <EnergyModel M>
double accept_two_stage(const ChainState<M>& state, const FlipMove& move, double beta, double gamma) {
  const double de = state.models[move.replica].delta(state.ensemble.replica(move.replica), move.coordinate);
  return two_stage_acceptance(de, interaction_delta(state.ensemble, gamma, move), beta);
}

template <EnergyModel M>
double accept_combined(const ChainState<M>& state, const FlipMove& move, double beta, double gamma) {
  const double de = state.models[move.replica].delta(state.ensemble.replica(move.replica), move.coordinate);
  return combined_acceptance(de, interaction_delta(state.ensemble, gamma, move), beta);
}

/// One propose/accept cycle at fixed (beta, gamma). Returns whether the flip
/// was accepted; does not advance the iteration counter.
template <EnergyModel M>
bool step_fixed(ChainState<M>& state, double beta, double gamma, KernelKind kernel) {
  const FlipMove move = propose(state);
  const SpinVector& w = state.ensemble.replica(move.replica);
  const double de = state.models[move.replica].delta(w, move.coordinate);
  const double dh = interaction_delta(state.ensemble, gamma, move);
  const double p = acceptance(kernel, de, dh, beta);
  const double u = state.rng.uniform01();
  if (!(u < p)) return false;
  state.models[move.replica].commit_flip(w, move.coordinate);
  state.ensemble.apply_flip(move);
  return true;
}

/// One iteration at (beta_at(it), gamma_at(it)) for the current iteration it.
template <EnergyModel M>
bool step(ChainState<M>& state, const AnnealSchedule& schedule, KernelKind kernel, RunStats* stats = nullptr) {
  const std::uint64_t it = state.iteration;
  const bool accepted = step_fixed(state, schedule.beta_at(it), schedule.gamma_at(it), kernel);
  ++state.iteration;
  if (stats != nullptr) {
    ++stats->iterations;
    if (accepted) ++stats->active_transitions;
  }
  return accepted;
}

struct RecordOptions {
  /// Record a trajectory sample every this many iterations (0: never).
  std::uint64_t every = 0;
  /// Check every replica cache against full recomputation this often (0: never).
  std::uint64_t verify_every = 0;
};

template <EnergyModel M>
struct RunResult {
  ChainState<M> state;
  RunStats stats;
  std::vector<double> final_energies;
  std::vector<double> final_accuracies;

  /// Replica with the lowest final energy (ties: lowest index).
  [[nodiscard]] std::size_t best_replica() const {
    std::size_t best = 0;
    for (std::size_t a = 1; a < final_energies.size(); ++a)
      if (final_energies[a] < final_energies[best]) best = a;
    return best;
  }
};

template <EnergyModel M>
void verify_caches(const ChainState<M>& state) {
  for (std::size_t a = 0; a < state.models.size(); ++a) {
    if constexpr (requires { state.models[a].verify_cache(state.ensemble.replica(a)); })
      state.models[a].verify_cache(state.ensemble.replica(a));
  }
  if (!state.ensemble.fields_consistent()) throw std::logic_error("ReplicaEnsemble: stale replica fields");
}

template <EnergyModel M>
RunResult<M> run(const M& model, const AnnealSchedule& schedule, KernelKind kernel, std::size_t replicas,
                 std::uint64_t seed, const RecordOptions& options = {}) {
  const auto start = std::chrono::steady_clock::now();
  ChainState<M> state = ChainState<M>::random(model, replicas, seed);
  RunStats stats;
  const std::uint64_t total = schedule.total_iterations();
  auto record = [&] {
    stats.trajectory.push_back(TrajectorySample{state.iteration, state.total_energy(), state.accuracies()});
  };
  if (options.every > 0) record();
  while (state.iteration < total) {
    step(state, schedule, kernel, &stats);
    if (options.every > 0 && (state.iteration % options.every == 0 || state.iteration == total)) record();
    if (options.verify_every > 0 && state.iteration % options.verify_every == 0) verify_caches(state);
  }
  stats.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  RunResult<M> out{std::move(state), std::move(stats), {}, {}};
  out.final_energies = out.state.energies();
  out.final_accuracies = out.state.accuracies();
  return out;
}

}  // namespace rsa
