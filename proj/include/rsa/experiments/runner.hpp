#pragma once

// Experiment drivers: single training runs, gamma and beta sweeps, and
// robustness curves. Every run is a function of (config, seed); sweep point k,
// repetition r runs with seed derive_seed(derive_seed(base, k), r).

#include <cstdint>
#include <filesystem>
#include <memory>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "rsa/anneal/chain.hpp"
#include "rsa/core/rng.hpp"
#include "rsa/energy/cross_entropy.hpp"
#include "rsa/energy/perceptron.hpp"
#include "rsa/experiments/robustness.hpp"
#include "rsa/experiments/stats.hpp"
#include "rsa/io/config.hpp"
#include "rsa/io/idx.hpp"
#include "rsa/io/results.hpp"
#include "rsa/io/splits.hpp"

namespace rsa::experiments {

/// Iteration count above which --full-scale is required.
inline constexpr std::uint64_t kDeskIterationLimit = 50000;

struct MnistWorkload {
  ClassifierDataset train;
  ClassifierDataset test;
  double scale = 1.0;  // energy = scale * summed loss
};

struct SyntheticWorkload {
  PatternSet patterns;
  TieRule rule = TieRule::strict;
};

using Workload = std::variant<MnistWorkload, SyntheticWorkload>;

inline Workload load_workload(const io::ExperimentConfig& c) {
  if (c.dataset.kind == "synthetic")
    return SyntheticWorkload{generate_synthetic(c.dataset.synthetic_count, c.dataset.synthetic_dim,
                                                c.dataset.synthetic_seed),
                             c.model.tie_rule};
  const auto dir = c.dataset.data_dir.empty() ? io::data_dir_from_env() : std::filesystem::path(c.dataset.data_dir);
  auto data = io::load_mnist(dir);
  MnistWorkload w;
  w.train = c.dataset.train_size == 0 ? std::move(data.train)
                                      : io::subsample(data.train, c.dataset.train_size, c.dataset.subsample_seed);
  w.test = c.dataset.test_size == 0
               ? std::move(data.test)
               : io::subsample(data.test, c.dataset.test_size, derive_seed(c.dataset.subsample_seed, 1));
  w.scale = c.model.loss == "mean" ? 1.0 / static_cast<double>(w.train.n) : 1.0;
  return w;
}

inline std::uint64_t point_seed(std::uint64_t base, std::size_t point, std::size_t repetition) {
  return derive_seed(derive_seed(base, point), repetition);
}

/// Outcome of one run: the record and the best replica's weights.
struct RunOutcome {
  io::ResultRecord record;
  SpinVector best_weights{1};
  std::vector<SpinVector> replicas;
};

namespace detail {

inline void fill_common(io::ResultRecord& r, const io::ExperimentConfig& c, const AnnealSchedule& s,
                        std::uint64_t seed) {
  r.config_hash = io::config_hash(c);
  r.seed = seed;
  r.gamma = s.gamma_initial();
  r.beta_i = s.beta_initial();
  r.beta_f = s.beta_final();
  r.replicas = c.replicas;
  r.timestamp = io::utc_timestamp();
}

}  // namespace detail

inline RunOutcome run_workload(const Workload& work, const io::ExperimentConfig& c, const AnnealSchedule& schedule,
                               std::uint64_t seed) {
  RunOutcome out;
  const RecordOptions rec{c.record_every, 0};
  if (const auto* m = std::get_if<MnistWorkload>(&work)) {
    const CrossEntropyEnergy model(m->train, m->scale);
    const CrossEntropyEnergy test_model(m->test, 1.0 / static_cast<double>(m->test.n));
    auto res = run(model, schedule, c.kernel, c.replicas, seed, rec);
    for (std::size_t a = 0; a < c.replicas; ++a) {
      const auto& w = res.state.ensemble.replica(a);
      out.record.train_loss.push_back(res.state.models[a].cached_loss() / static_cast<double>(m->train.n));
      out.record.train_accuracy.push_back(res.final_accuracies[a]);
      out.record.test_loss.push_back(test_model.mean_loss(w));
      out.record.test_accuracy.push_back(test_model.accuracy(w));
    }
    out.record.best_replica = res.best_replica();
    out.record.iterations = res.stats.iterations;
    out.record.active_transitions = res.stats.active_transitions;
    out.record.wall_seconds = res.stats.wall_seconds;
    out.record.trajectory = std::move(res.stats.trajectory);
    out.best_weights = res.state.ensemble.replica(out.record.best_replica);
    out.replicas = res.state.ensemble.replicas();
  } else {
    const auto& s = std::get<SyntheticWorkload>(work);
    const PerceptronEnergy model(s.patterns, s.rule);
    auto res = run(model, schedule, c.kernel, c.replicas, seed, rec);
    out.record.train_loss = res.final_energies;
    out.record.train_accuracy = res.final_accuracies;
    out.record.best_replica = res.best_replica();
    out.record.iterations = res.stats.iterations;
    out.record.active_transitions = res.stats.active_transitions;
    out.record.wall_seconds = res.stats.wall_seconds;
    out.record.trajectory = std::move(res.stats.trajectory);
    out.best_weights = res.state.ensemble.replica(out.record.best_replica);
    out.replicas = res.state.ensemble.replicas();
  }
  detail::fill_common(out.record, c, schedule, seed);
  return out;
}

inline void check_scale(const io::ExperimentConfig& c, bool full_scale) {
  if (!full_scale && c.schedule.build().total_iterations() > kDeskIterationLimit)
    throw std::invalid_argument("runs above " + std::to_string(kDeskIterationLimit) +
                                " iterations need --full-scale");
}

inline io::ResultRecord train_command(const io::ExperimentConfig& c, const Workload& work) {
  auto out = run_workload(work, c, c.schedule.build(), c.seed);
  out.record.command = "train";
  out.record.run_id = "train-" + out.record.config_hash + "-" + std::to_string(c.seed);
  return out.record;
}

struct SweepPoint {
  double gamma = 0.0;
  double beta_i = 0.0;
  double beta_f = 0.0;
  MeanCi train_accuracy;
  MeanCi test_accuracy;
  MeanCi train_loss;
  MeanCi active_transitions;
};

struct SweepResult {
  std::vector<io::ResultRecord> records;  // one per (point, repetition), grid order
  std::vector<SweepPoint> points;
};

namespace detail {

inline SweepResult run_grid(const io::ExperimentConfig& c, const Workload& work,
                            const std::vector<io::ExperimentConfig>& grid, const std::string& command,
                            std::size_t jobs) {
  const std::size_t reps = c.sweep.repetitions;
  SweepResult out;
  out.records = parallel_map<io::ResultRecord>(grid.size() * reps, jobs, [&](std::size_t task) {
    const std::size_t k = task / reps;
    const std::size_t r = task % reps;
    const std::uint64_t seed = point_seed(c.seed, k, r);
    auto o = run_workload(work, grid[k], grid[k].schedule.build(), seed);
    o.record.command = command;
    o.record.point = k;
    o.record.repetition = r;
    o.record.config_hash = io::config_hash(c);
    o.record.run_id = command + "-" + o.record.config_hash + "-" + std::to_string(k) + "-" + std::to_string(r);
    return o.record;
  });
  for (std::size_t k = 0; k < grid.size(); ++k) {
    std::vector<double> tr, te, loss, act;
    for (std::size_t r = 0; r < reps; ++r) {
      const auto& rec = out.records[k * reps + r];
      tr.push_back(rec.best_train_accuracy());
      if (!rec.test_accuracy.empty()) te.push_back(rec.best_test_accuracy());
      loss.push_back(rec.train_loss[rec.best_replica]);
      act.push_back(static_cast<double>(rec.active_transitions));
    }
    SweepPoint p;
    p.gamma = grid[k].schedule.gamma;
    p.beta_i = grid[k].schedule.beta_i;
    p.beta_f = grid[k].schedule.beta_f;
    p.train_accuracy = mean_ci(tr, c.sweep.confidence);
    if (!te.empty()) p.test_accuracy = mean_ci(te, c.sweep.confidence);
    p.train_loss = mean_ci(loss, c.sweep.confidence);
    p.active_transitions = mean_ci(act, c.sweep.confidence);
    out.points.push_back(p);
  }
  return out;
}

}  // namespace detail

/// One run per (gamma, repetition) at the configured (beta_i, beta_f).
inline SweepResult sweep_gamma(const io::ExperimentConfig& c, const Workload& work, std::size_t jobs = 1) {
  if (c.sweep.gammas.empty()) throw std::invalid_argument("sweep-gamma: sweep.gammas is empty");
  std::vector<io::ExperimentConfig> grid;
  for (double g : c.sweep.gammas) {
    auto x = c;
    x.schedule.gamma = g;
    x.schedule.gamma_f.reset();
    grid.push_back(x);
  }
  return detail::run_grid(c, work, grid, "sweep-gamma", jobs);
}

/// The beta_i x beta_f grid (pairs with beta_f < beta_i are skipped).
inline SweepResult sweep_beta(const io::ExperimentConfig& c, const Workload& work, std::size_t jobs = 1) {
  if (c.sweep.beta_i.empty() || c.sweep.beta_f.empty())
    throw std::invalid_argument("sweep-beta: sweep.beta_i and sweep.beta_f must be non-empty");
  std::vector<io::ExperimentConfig> grid;
  for (double bi : c.sweep.beta_i)
    for (double bf : c.sweep.beta_f) {
      if (bf < bi) continue;
      auto x = c;
      x.schedule.mode = "exponential";
      x.schedule.beta_i = bi;
      x.schedule.beta_f = bf;
      grid.push_back(x);
    }
  return detail::run_grid(c, work, grid, "sweep-beta", jobs);
}

struct RobustnessResult {
  std::vector<io::ResultRecord> training;  // one per gamma
  std::vector<io::CurveRecord> curve;      // gamma-major, then p
};

/// Trains one model per gamma (seed point_seed(seed, k, 0)) and perturbs it.
/// "best-replica" evaluates the lowest-energy replica; "per-replica" averages
/// the curves of all replicas.
inline RobustnessResult robustness_command(const io::ExperimentConfig& c, const Workload& work, std::size_t jobs = 1) {
  RobustnessResult out;
  const auto& spec = c.robustness;
  for (std::size_t k = 0; k < spec.gammas.size(); ++k) {
    auto x = c;
    x.schedule.gamma = spec.gammas[k];
    x.schedule.gamma_f.reset();
    const std::uint64_t seed = point_seed(c.seed, k, 0);
    const AnnealSchedule schedule = x.schedule.build();

    auto o = run_workload(work, x, schedule, seed);
    o.record.command = "robustness";
    o.record.point = k;
    o.record.config_hash = io::config_hash(c);
    o.record.run_id = "robustness-" + o.record.config_hash + "-" + std::to_string(k);
    const std::vector<SpinVector> targets =
        spec.target == "per-replica" ? o.replicas : std::vector<SpinVector>{o.best_weights};

    std::vector<std::vector<CurvePoint>> curves;
    for (std::size_t t = 0; t < targets.size(); ++t) {
      const std::uint64_t eval_seed = derive_seed(seed, 1000 + t);
      if (const auto* m = std::get_if<MnistWorkload>(&work)) {
        const CrossEntropyEnergy test_model(m->test);
        curves.push_back(robustness_eval(targets[t], test_model, spec.p, spec.repetitions, eval_seed, jobs,
                                         c.sweep.confidence));
      } else {
        const auto& s = std::get<SyntheticWorkload>(work);
        const PerceptronEnergy model(s.patterns, s.rule);
        curves.push_back(
            robustness_eval(targets[t], model, spec.p, spec.repetitions, eval_seed, jobs, c.sweep.confidence));
      }
    }
    for (std::size_t j = 0; j < spec.p.size(); ++j) {
      io::CurveRecord cr;
      cr.run_id = o.record.run_id;
      cr.config_hash = o.record.config_hash;
      cr.seed = seed;
      cr.gamma = spec.gammas[k];
      cr.p = spec.p[j];
      cr.flips = curves.front()[j].flips;
      cr.repetitions = curves.front()[j].repetitions;
      for (const auto& cv : curves) {
        cr.mean_accuracy += cv[j].mean_accuracy / static_cast<double>(curves.size());
        cr.ci_half_width += cv[j].ci_half_width / static_cast<double>(curves.size());
      }
      cr.timestamp = o.record.timestamp;
      out.curve.push_back(cr);
    }
    out.training.push_back(std::move(o.record));
  }
  return out;
}

}  // namespace rsa::experiments
