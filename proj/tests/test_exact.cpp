#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

#include "rsa/exact/constants.hpp"
#include "rsa/exact/elevation.hpp"
#include "rsa/exact/fixtures.hpp"
#include "rsa/exact/limits.hpp"
#include "rsa/exact/measures.hpp"
#include "rsa/exact/problem.hpp"
#include "rsa/exact/schedule_check.hpp"
#include "rsa/exact/spectral.hpp"
#include "rsa/experiments/verify.hpp"

using namespace rsa;
using namespace rsa::exact;

namespace {

// Q(sigma, sigma^1..y) ∝ exp(-beta sum_a E(sigma^a) + gamma sum_a <sigma, sigma^a>),
// summed over the centre sigma by brute force.
std::vector<double> qbar_oracle(std::size_t n, std::size_t y, const std::vector<double>& e, double beta,
                                double gamma) {
  const std::size_t states = std::size_t{1} << (n * y);
  std::vector<double> w(states, 0.0);
  double z = 0.0;
  for (std::size_t s = 0; s < states; ++s) {
    std::vector<SpinVector> reps;
    double energy = 0.0;
    for (std::size_t a = 0; a < y; ++a) {
      const std::size_t idx = (s >> (a * n)) & ((std::size_t{1} << n) - 1);
      reps.push_back(SpinVector::from_index(idx, n));
      energy += e[idx];
    }
    for (std::size_t c = 0; c < (std::size_t{1} << n); ++c) {
      const auto centre = SpinVector::from_index(c, n);
      int overlap = 0;
      for (const auto& r : reps) overlap += inner_product(centre, r);
      w[s] += std::exp(-beta * energy + gamma * overlap);
    }
    z += w[s];
  }
  for (double& v : w) v /= z;
  return w;
}

// min over all simple paths of the max node weight, for every pair, by
// exhaustive depth-first enumeration; then max of H - W(s) - W(t).
double elevation_oracle(const Problem& p) {
  const std::size_t states = p.state_count();
  const std::size_t bits = p.bits();
  double m = -std::numeric_limits<double>::infinity();
  std::vector<char> on_path(states, 0);
  for (std::size_t s = 0; s < states; ++s) {
    std::vector<double> best(states, std::numeric_limits<double>::infinity());
    std::function<void(std::size_t, double)> dfs = [&](std::size_t v, double elev) {
      best[v] = std::min(best[v], elev);
      on_path[v] = 1;
      for (std::size_t b = 0; b < bits; ++b) {
        const std::size_t u = v ^ (std::size_t{1} << b);
        if (!on_path[u]) dfs(u, std::max(elev, p.total_energy(u)));
      }
      on_path[v] = 0;
    };
    dfs(s, p.total_energy(s));
    for (std::size_t t = 0; t < states; ++t) m = std::max(m, best[t] - p.total_energy(s) - p.total_energy(t));
  }
  return m;
}

}  // namespace

TEST(Qbar, HandEnumeratedTwoReplicaExample) {
  // N=1, y=2, gamma=1, beta=1, E(+1)=0, E(-1)=1; state 3 is (+,+)
  const Problem p(1, 2, fixtures::two_state());
  const auto oracle = qbar_oracle(1, 2, p.energies(), 1.0, 1.0);
  EXPECT_NEAR(oracle[3], 0.7513703, 1e-6);
  const auto q = enumerate_qbar(p, 1.0, 1.0);
  EXPECT_NEAR(q.direct[3], oracle[3], 1e-14);
  EXPECT_NEAR(q.folded[3], oracle[3], 1e-14);
  // unnormalized folded weights cosh 2, e^-1, e^-1, e^-2 cosh 2
  const double z = std::cosh(2.0) + 2 * std::exp(-1.0) + std::exp(-2.0) * std::cosh(2.0);
  EXPECT_NEAR(z, 5.0071124, 1e-6);
  EXPECT_NEAR(q.folded[0], std::exp(-2.0) * std::cosh(2.0) / z, 1e-14);
  EXPECT_NEAR(q.folded[1], std::exp(-1.0) / z, 1e-14);
}

TEST(Qbar, MatchesBruteForceOracle) {
  for (std::size_t n = 1; n <= 3; ++n)
    for (std::size_t y = 1; y <= 3; ++y) {
      const auto e = fixtures::random_integer(n, 100 * n + y);
      const Problem p(n, y, e);
      for (double beta : {0.0, 0.5, 2.0})
        for (double gamma : {0.0, 0.5, 2.0}) {
          const auto oracle = qbar_oracle(n, y, e, beta, gamma);
          const auto q = enumerate_qbar(p, beta, gamma);
          EXPECT_LT(max_relative_difference(q.direct, oracle), 1e-12);
          EXPECT_LT(max_relative_difference(q.folded, oracle), 1e-12);
          EXPECT_NEAR(q.log_z, q.log_z_folded + n * std::log(2.0), 1e-12);
        }
    }
}

TEST(Qbar, SpecialCases) {
  // E == 0: Qbar is mu0
  const Problem flat(2, 2, {0.0, 0.0, 0.0, 0.0});
  EXPECT_LT(linf_distance(qbar(flat, 3.0, 0.7), mu0(flat, 0.7)), 1e-15);
  // gamma = 0, y = 1: the Gibbs law
  const auto e = fixtures::random_integer(3, 4);
  const Problem single(3, 1, e);
  const auto q = qbar(single, 1.3, 0.0);
  double z = 0.0;
  for (double v : e) z += std::exp(-1.3 * v);
  for (std::size_t s = 0; s < e.size(); ++s) EXPECT_NEAR(q[s], std::exp(-1.3 * e[s]) / z, 1e-15);
}

TEST(Qbar, SizeLimits) {
  EXPECT_THROW(Problem(5, 4, std::vector<double>(32, 0.0)), std::invalid_argument);
  EXPECT_THROW(Problem(2, 1, std::vector<double>(3, 0.0)), std::invalid_argument);
  EXPECT_THROW(enumerate_qbar(Problem(11, 1, std::vector<double>(2048, 0.0)), 1.0, 1.0), std::invalid_argument);
}

TEST(Kernel, TwoStateMetropolis) {
  // index 0 is sigma = -1 (E = 1), index 1 is sigma = +1 (E = 0)
  const Problem p(1, 1, fixtures::two_state());
  for (KernelKind kind : {KernelKind::two_stage, KernelKind::combined}) {
    const auto k = build_kernel_matrix(p, 1.0, 0.0, kind);
    EXPECT_NEAR(k(1, 1), 1.0 - std::exp(-1.0), 1e-15);
    EXPECT_NEAR(k(1, 0), std::exp(-1.0), 1e-15);
    EXPECT_NEAR(k(0, 1), 1.0, 1e-15);
    EXPECT_NEAR(k(0, 0), 0.0, 1e-15);
    const auto sum = stationary_and_gap(k, qbar(p, 1.0, 0.0));
    EXPECT_NEAR(sum.eigenvalues[0], -std::exp(-1.0), 1e-12);
    EXPECT_NEAR(sum.eigenvalues[1], 1.0, 1e-12);
    EXPECT_NEAR(sum.stationary[0] / sum.stationary[1], std::exp(-1.0), 1e-12);
  }
}

TEST(Kernel, FreeWalkAtZeroTemperatureParameters) {
  const Problem p(1, 1, fixtures::two_state());
  EXPECT_NEAR(spectral_gap(p, 0.0, 0.0, KernelKind::combined), 2.0, 1e-12);
  // beta = gamma = 0 on a larger cube: every flip accepted, rate 1/(Ny)
  const Problem q(2, 2, fixtures::double_well_2());
  const auto k = build_kernel_matrix(q, 0.0, 0.0, KernelKind::two_stage);
  for (Eigen::Index x = 0; x < k.rows(); ++x)
    for (Eigen::Index y = 0; y < k.cols(); ++y) {
      const auto d = hamming_index_distance(static_cast<std::size_t>(x), static_cast<std::size_t>(y));
      EXPECT_NEAR(k(x, y), d == 1 ? 0.25 : 0.0, 1e-15);
    }
}

TEST(Kernel, ReversibleAndStationaryOnRandomTables) {
  for (std::size_t n = 1; n <= 4; ++n)
    for (std::size_t y = 1; n * y <= 8; ++y) {
      const Problem p(n, y, fixtures::random_integer(n, 7 * n + y));
      for (KernelKind kind : {KernelKind::two_stage, KernelKind::combined})
        for (double gamma : {0.0, 1.5}) {
          const auto k = build_kernel_matrix(p, 0.8, gamma, kind);
          const auto q = qbar(p, 0.8, gamma);
          EXPECT_LT(detailed_balance_error(k, q), 1e-12);
          EXPECT_LT(max_row_sum_error(k), 1e-12);
          EXPECT_LT(linf_distance(solve_stationary(k), q), 1e-10);
        }
    }
}

TEST(Kernel, SignErrorBreaksReversibility) {
  const Problem p(2, 2, fixtures::double_well_2());
  const auto k = build_kernel_matrix_with(p, 2.0, 0.5, experiments::sign_error_acceptance);
  const auto q = qbar(p, 2.0, 0.5);
  EXPECT_GT(detailed_balance_error(k, q), 1e-3);
  EXPECT_THROW(stationary_and_gap(k, q), NonReversibleError);
}

TEST(Elevation, Examples) {
  EXPECT_EQ(compute_elevation_m(Problem(3, 2, std::vector<double>(8, 0.0))), 0.0);
  EXPECT_EQ(compute_elevation_m(Problem(2, 1, fixtures::double_well_2())), 1.0);
  for (double h : {0.5, 1.0, 3.0}) EXPECT_EQ(compute_elevation_m(Problem(1, 1, fixtures::two_state(h))), 0.0);
  EXPECT_EQ(compute_elevation_m(Problem(3, 2, fixtures::gap_double_well())), 1.0);
}

TEST(Elevation, MatchesSimplePathBruteForce) {
  int checked = 0;
  for (std::size_t n = 1; n <= 4; ++n)
    for (std::size_t y = 1; n * y <= 4; ++y)
      for (std::uint64_t seed = 0; seed < 25; ++seed) {
        const Problem p(n, y, fixtures::random_integer(n, 1000 * n + 10 * y + seed, 4));
        ASSERT_DOUBLE_EQ(compute_elevation_m(p), elevation_oracle(p)) << "N=" << n << " y=" << y;
        ++checked;
      }
  EXPECT_EQ(checked, 25 * 8);
  for (auto e : {fixtures::double_well_2()}) {
    const Problem p(2, 2, e);
    EXPECT_DOUBLE_EQ(compute_elevation_m(p), elevation_oracle(p));
  }
}

TEST(Constants, SmallestNonzeroAndInteractionJump) {
  EXPECT_EQ(smallest_nonzero_energy({0.0, 0.7, 1.3}).value(), 0.7);
  EXPECT_FALSE(smallest_nonzero_energy({0.0, 0.0}).has_value());
  EXPECT_NEAR(interaction_jump(3.0, 2), 5.306859, 1e-6);
  EXPECT_NEAR(interaction_jump(3.0, 3), 5.997525, 1e-6);
  EXPECT_NEAR(interaction_jump(50.0, 4), 100.0, 1e-9);
}

TEST(Constants, GapBracketHoldsOverTheGrid) {
  const Problem p(3, 2, fixtures::gap_double_well());
  std::vector<double> betas;
  for (double b = 2.0; b <= 15.0; b += 1.0) betas.push_back(b);
  const auto c = compute_constants(p, 0.5, betas);
  EXPECT_EQ(c.m, 1.0);
  EXPECT_EQ(c.B.value(), 0.5);
  ASSERT_EQ(c.psi_values.size(), betas.size());
  EXPECT_GT(c.c, 0.0);
  EXPECT_LT(c.C / c.c, experiments::kGapBracketRatio);
  EXPECT_GE(c.kappa1, 1.0);
  EXPECT_EQ(c.N0.size(), 4u);       // both replicas in either well
  EXPECT_EQ(c.tildeN0.size(), 2u);  // aligned wells
}

TEST(Constants, GapSlopeTracksElevation) {
  for (KernelKind kind : {KernelKind::two_stage, KernelKind::combined}) {
    const auto g = experiments::gap_scaling(kind);
    EXPECT_NEAR(g.fit.slope, g.m, experiments::kGapSlopeTolerance * g.m);
  }
}

TEST(ScheduleCheck, AzencottPasses) {
  // T_k = 2 e^{beta_k}: trace at n is -2n + n = -n
  std::vector<Stage> stages;
  for (int k = 1; k <= 1000; ++k) stages.push_back(Stage{std::log(k), 0.0, static_cast<std::uint64_t>(2 * k)});
  const auto v = validate_schedule(stages, 1.0, std::exp(1.0));
  EXPECT_TRUE(v.pass);
  for (std::size_t n = 0; n < stages.size(); n += 97) EXPECT_NEAR(v.trace[n], -static_cast<double>(n + 1), 1e-9);
  EXPECT_TRUE(v.exposure_diverges);
}

TEST(ScheduleCheck, LogCoolingFails) {
  std::vector<Stage> stages;
  for (int k = 1; k <= 10000; ++k) stages.push_back(Stage{std::log(k), 0.0, 1});
  const auto v = validate_schedule(stages, 1.0, std::exp(1.0));
  EXPECT_FALSE(v.pass);
  // -H_n + n with H_n the harmonic number
  double h = 0.0;
  for (int k = 1; k <= 10000; ++k) h += 1.0 / k;
  EXPECT_NEAR(v.final_value, 10000.0 - h, 1e-6);
}

TEST(ScheduleCheck, FlatLandscapePasses) {
  const std::vector<Stage> stages(50, Stage{3.0, 0.0, 1});
  EXPECT_TRUE(validate_schedule(stages, 0.0, 1.0).pass);
  EXPECT_THROW(validate_schedule({}, 0.0, 1.0), std::invalid_argument);
  EXPECT_THROW(validate_schedule(stages, 0.0, 0.5), std::invalid_argument);
}

TEST(ScheduleCheck, NecessaryConditionUsesPerStageElevation) {
  std::vector<Stage> stages;
  for (int k = 1; k <= 200; ++k) stages.push_back(Stage{std::log(k), 0.0, 1});
  const auto v = validate_schedule_necessary(stages, std::vector<double>(200, 0.0), 1.0);
  EXPECT_NEAR(v.final_value, -200.0, 1e-9);
  EXPECT_TRUE(v.pass);
  EXPECT_THROW(validate_schedule_necessary(stages, {1.0}, 1.0), std::invalid_argument);
  const auto trace = bound_trace(stages, std::vector<double>(200, 1.0), BoundConstants{});
  EXPECT_EQ(trace.size(), 200u);
}

TEST(Limits, LowTemperatureLaws) {
  for (const auto& [n, y, e] : {std::tuple{2u, 2u, fixtures::double_well_2()},
                                std::tuple{4u, 2u, fixtures::cluster_and_isolated()},
                                std::tuple{1u, 3u, fixtures::two_state()}}) {
    const Problem p(n, y, e);
    for (double gamma : {0.0, 0.5, 1.0}) {
      const auto r = limit_distribution_check(p, gamma);
      EXPECT_TRUE(r.pass()) << "N=" << n << " y=" << y << " gamma=" << gamma;
      EXPECT_LE(r.mass_outside_n0, 1e-6);
    }
  }
}

TEST(Limits, FlatLandscapeConditionsToMu0) {
  const Problem flat(2, 2, std::vector<double>(4, 0.0));
  const auto r = limit_distribution_check(flat, 0.8);
  EXPECT_EQ(r.n0_size, 16u);
  EXPECT_EQ(r.mass_outside_n0, 0.0);
  EXPECT_LT(r.conditional_error, 1e-15);
}

TEST(Limits, ZeroCouplingIsUniformOnN0) {
  const Problem p(4, 2, fixtures::cluster_and_isolated());
  const auto q = qbar(p, 50.0, 0.0);
  const auto n0 = zero_energy_states(p);
  EXPECT_EQ(n0.size(), 36u);
  for (std::size_t s : n0) EXPECT_NEAR(q[s], 1.0 / 36.0, 1e-12);
}

TEST(DenseRegion, Examples) {
  const Problem p(4, 2, fixtures::cluster_and_isolated());
  EXPECT_NEAR(dense_region_mass(p, 0.0, fixtures::kClusterCentre, 1), 25.0 / 36.0, 1e-12);
  EXPECT_NEAR(dense_region_mass(p, 0.0, SpinVector{1, 1, 1, 1}, 1), 0.694444, 1e-6);
  for (double gamma : {0.0, 1.0, 3.0}) EXPECT_NEAR(dense_region_mass(p, gamma, fixtures::kClusterCentre, 4), 1.0, 1e-12);
  EXPECT_THROW(dense_region_mass(p, 0.0, 16, 1), std::invalid_argument);
}

TEST(DenseRegion, ZeroCouplingMassIsAPowerOfTheMinimaShare) {
  // |B_R(c) ∩ minima|^y / |minima|^y at gamma = 0
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto e = fixtures::random_integer(4, seed, 2);
    std::vector<std::size_t> minima;
    for (std::size_t s = 0; s < e.size(); ++s)
      if (e[s] == 0.0) minima.push_back(s);
    for (std::size_t y : {1u, 2u, 3u}) {
      const Problem p(4, y, e);
      for (std::size_t centre : {0u, 5u, 15u})
        for (std::size_t radius : {0u, 1u, 2u}) {
          std::size_t inside = 0;
          for (std::size_t s : minima) inside += hamming_index_distance(s, centre) <= radius ? 1 : 0;
          const double expect = std::pow(static_cast<double>(inside) / minima.size(), static_cast<double>(y));
          EXPECT_NEAR(dense_region_mass(p, 0.0, centre, radius), expect, 1e-12);
        }
    }
  }
}

TEST(DenseRegion, CurveValuesOnTheClusterFixture) {
  // closed form (5 + 8u + 12u^2) / (6 + 8u + 12u^2 + 8u^3 + 2u^4), u = 1/cosh(2 gamma)
  const auto d = experiments::dense_curve();
  for (std::size_t k = 0; k < d.gammas.size(); ++k) {
    const double u = 1.0 / std::cosh(2.0 * d.gammas[k]);
    const double closed = (5 + 8 * u + 12 * u * u) / (6 + 8 * u + 12 * u * u + 8 * u * u * u + 2 * u * u * u * u);
    EXPECT_NEAR(d.mass[k], closed, 1e-9) << "gamma=" << d.gammas[k];
  }
  EXPECT_NEAR(d.mass[4], 0.872984, 1e-6);
}

TEST(Minima, ClusterAndIsolated) {
  const auto r = classify_minima(fixtures::cluster_and_isolated(), 4, {0, 1, 2, 3});
  EXPECT_EQ(r.min_energy, 0.0);
  EXPECT_EQ(r.minima.size(), 6u);
  EXPECT_TRUE(r.dense(fixtures::kClusterCentre, 1, 5));
  EXPECT_TRUE(r.isolated(fixtures::kIsolatedMinimum, 2));
  EXPECT_FALSE(r.isolated(fixtures::kIsolatedMinimum, 3));
  EXPECT_EQ(r.at(fixtures::kIsolatedMinimum).isolation_radius, 2);
  EXPECT_THROW((void)r.at(3), std::out_of_range);
}

TEST(Minima, UniqueMinimumIsIsolatedAtEveryRadius) {
  std::vector<double> e(16, 2.0);
  e[9] = -1.0;
  const auto r = classify_minima(e, 4, {0, 1, 2, 3});
  ASSERT_EQ(r.minima.size(), 1u);
  for (std::size_t radius : {0u, 1u, 2u, 3u}) EXPECT_TRUE(r.isolated(9, radius));
}
