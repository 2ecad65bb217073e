#pragma once

// Transition matrices of the replicated chain and their spectra.

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "rsa/anneal/kernel.hpp"
#include "rsa/exact/measures.hpp"
#include "rsa/exact/problem.hpp"

namespace rsa::exact {

inline constexpr std::size_t kMaxKernelBits = 12;

/// Row-stochastic matrix for an arbitrary acceptance rule
/// accept(delta_energy, delta_interaction, beta). Off-diagonal entries are
/// accept / (yN) for single-flip neighbours; the diagonal takes the rest.
template <class Accept>
Eigen::MatrixXd build_kernel_matrix_with(const Problem& p, double beta, double gamma, Accept&& accept) {
  if (p.bits() > kMaxKernelBits)
    throw std::invalid_argument("build_kernel_matrix: N*y = " + std::to_string(p.bits()) + " exceeds " +
                                std::to_string(kMaxKernelBits));
  const auto states = static_cast<Eigen::Index>(p.state_count());
  const double proposal = 1.0 / static_cast<double>(p.bits());
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(states, states);
  std::vector<double> interaction(p.state_count());
  for (std::size_t s = 0; s < p.state_count(); ++s) interaction[s] = p.interaction(s, gamma);
  for (std::size_t s = 0; s < p.state_count(); ++s) {
    double off = 0.0;
    for (std::size_t b = 0; b < p.bits(); ++b) {
      const std::size_t t = s ^ (std::size_t{1} << b);
      const double de = p.total_energy(t) - p.total_energy(s);
      // Only coordinate i changes, so the full interaction difference equals
      // the single-coordinate log cosh difference.
      const double dh = interaction[t] - interaction[s];
      const double v = proposal * accept(de, dh, beta);
      k(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(t)) = v;
      off += v;
    }
    k(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(s)) = 1.0 - off;
  }
  return k;
}

inline Eigen::MatrixXd build_kernel_matrix(const Problem& p, double beta, double gamma, KernelKind kind) {
  return build_kernel_matrix_with(p, beta, gamma, [kind](double de, double dh, double b) {
    return acceptance(kind, de, dh, b);
  });
}

/// max |q(x)K(x,y) - q(y)K(y,x)| over all pairs.
inline double detailed_balance_error(const Eigen::MatrixXd& k, const std::vector<double>& q) {
  double worst = 0.0;
  const Eigen::Index n = k.rows();
  for (Eigen::Index x = 0; x < n; ++x)
    for (Eigen::Index y = x + 1; y < n; ++y)
      worst = std::max(worst, std::abs(q[static_cast<std::size_t>(x)] * k(x, y) -
                                       q[static_cast<std::size_t>(y)] * k(y, x)));
  return worst;
}

inline double max_row_sum_error(const Eigen::MatrixXd& k) {
  double worst = 0.0;
  for (Eigen::Index r = 0; r < k.rows(); ++r) worst = std::max(worst, std::abs(k.row(r).sum() - 1.0));
  return worst;
}

/// Stationary vector from pi K = pi, sum pi = 1 (independent of any candidate law).
inline std::vector<double> solve_stationary(const Eigen::MatrixXd& k) {
  const Eigen::Index n = k.rows();
  Eigen::MatrixXd a = k.transpose() - Eigen::MatrixXd::Identity(n, n);
  a.row(n - 1).setOnes();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  rhs(n - 1) = 1.0;
  Eigen::VectorXd pi = a.fullPivLu().solve(rhs);
  return {pi.data(), pi.data() + n};
}

class NonReversibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SpectralSummary {
  std::vector<double> stationary;
  std::vector<double> eigenvalues;  // ascending
  double lambda1 = 0.0;             // second largest eigenvalue
  double gap = 0.0;                 // psi = 1 - lambda1
  double balance_error = 0.0;
};

/// Verifies reversibility w.r.t. q, then diagonalizes D^{1/2} K D^{-1/2}.
inline SpectralSummary stationary_and_gap(const Eigen::MatrixXd& k, const std::vector<double>& q,
                                          double balance_tolerance = 1e-10) {
  if (static_cast<std::size_t>(k.rows()) != q.size() || k.rows() != k.cols())
    throw std::invalid_argument("stationary_and_gap: dimension mismatch");
  SpectralSummary out;
  out.balance_error = detailed_balance_error(k, q);
  if (out.balance_error > balance_tolerance)
    throw NonReversibleError("kernel is not reversible w.r.t. the given law (error " +
                             std::to_string(out.balance_error) + ")");
  out.stationary = solve_stationary(k);
  const Eigen::Index n = k.rows();
  Eigen::VectorXd sq(n);
  for (Eigen::Index x = 0; x < n; ++x) sq(x) = std::sqrt(q[static_cast<std::size_t>(x)]);
  Eigen::MatrixXd s(n, n);
  for (Eigen::Index x = 0; x < n; ++x)
    for (Eigen::Index y = 0; y < n; ++y) s(x, y) = sq(x) * k(x, y) / sq(y);
  s = 0.5 * (s + s.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(s, Eigen::EigenvaluesOnly);
  const auto& ev = solver.eigenvalues();
  out.eigenvalues.assign(ev.data(), ev.data() + n);
  out.lambda1 = n >= 2 ? ev(n - 2) : 1.0;
  out.gap = 1.0 - out.lambda1;
  return out;
}

/// psi(beta) for the chain at fixed gamma.
inline double spectral_gap(const Problem& p, double beta, double gamma, KernelKind kind) {
  const auto k = build_kernel_matrix(p, beta, gamma, kind);
  return stationary_and_gap(k, qbar(p, beta, gamma), 1e-9).gap;
}

struct GapFit {
  double slope = 0.0;      // least-squares slope of -log psi against beta
  double intercept = 0.0;
  double bracket_low = 0.0;   // min psi e^{beta m}
  double bracket_high = 0.0;  // max psi e^{beta m}
};

inline GapFit fit_gap(const std::vector<double>& betas, const std::vector<double>& gaps, double m) {
  if (betas.size() != gaps.size() || betas.size() < 2) throw std::invalid_argument("fit_gap: need >= 2 points");
  const auto n = static_cast<double>(betas.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  GapFit f;
  f.bracket_low = INFINITY;
  f.bracket_high = 0.0;
  for (std::size_t k = 0; k < betas.size(); ++k) {
    const double x = betas[k];
    const double yv = -std::log(gaps[k]);
    sx += x;
    sy += yv;
    sxx += x * x;
    sxy += x * yv;
    const double scaled = gaps[k] * std::exp(betas[k] * m);
    f.bracket_low = std::min(f.bracket_low, scaled);
    f.bracket_high = std::max(f.bracket_high, scaled);
  }
  f.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  f.intercept = (sy - f.slope * sx) / n;
  return f;
}

}  // namespace rsa::exact
