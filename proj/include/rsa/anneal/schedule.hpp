#pragma once

// Inverse-temperature (beta) and coupling (gamma) schedules.

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace rsa {

/// One constant-parameter band of a piecewise schedule.
struct Stage {
  double beta = 1.0;
  double gamma = 0.0;
  std::uint64_t length = 1;
  friend bool operator==(const Stage&, const Stage&) = default;
};

class AnnealSchedule {
 public:
  enum class Mode { exponential, piecewise };

  /// beta = beta_i (beta_f / beta_i)^(it / it_max); gamma constant.
  static AnnealSchedule exponential(double beta_i, double beta_f, std::uint64_t it_max, double gamma = 0.0) {
    AnnealSchedule s;
    s.mode_ = Mode::exponential;
    s.beta_i_ = beta_i;
    s.beta_f_ = beta_f;
    s.gamma_i_ = s.gamma_f_ = gamma;
    s.it_max_ = it_max;
    s.validate();
    return s;
  }

  /// As exponential(), with gamma interpolated the same way from gamma_i to
  /// gamma_f (both must be positive).
  static AnnealSchedule exponential(double beta_i, double beta_f, std::uint64_t it_max, double gamma_i,
                                    double gamma_f) {
    if (!(gamma_i > 0.0) || !(gamma_f > 0.0))
      throw std::invalid_argument("AnnealSchedule: interpolated gamma needs gamma_i, gamma_f > 0");
    AnnealSchedule s = exponential(beta_i, beta_f, it_max, gamma_i);
    s.gamma_f_ = gamma_f;
    s.gamma_interpolated_ = true;
    return s;
  }

  /// Constant (beta, gamma) for it_max iterations.
  static AnnealSchedule constant(double beta, double gamma, std::uint64_t it_max) {
    return piecewise({Stage{beta, gamma, it_max}});
  }

  static AnnealSchedule piecewise(std::vector<Stage> stages) {
    AnnealSchedule s;
    s.mode_ = Mode::piecewise;
    s.stages_ = std::move(stages);
    s.it_max_ = 0;
    for (const auto& st : s.stages_) s.it_max_ += st.length;
    s.validate();
    if (!s.stages_.empty()) {
      s.beta_i_ = s.stages_.front().beta;
      s.beta_f_ = s.stages_.back().beta;
    }
    return s;
  }

  [[nodiscard]] Mode mode() const noexcept { return mode_; }
  [[nodiscard]] std::uint64_t total_iterations() const noexcept { return it_max_; }
  [[nodiscard]] double beta_initial() const noexcept { return beta_i_; }
  [[nodiscard]] double beta_final() const noexcept { return beta_f_; }
  [[nodiscard]] double gamma_initial() const noexcept { return gamma_i_; }
  [[nodiscard]] double gamma_final() const noexcept { return gamma_f_; }
  [[nodiscard]] bool gamma_interpolated() const noexcept { return gamma_interpolated_; }
  [[nodiscard]] const std::vector<Stage>& stages() const noexcept { return stages_; }

  [[nodiscard]] double beta_at(std::uint64_t it) const {
    check(it);
    if (mode_ == Mode::piecewise) return stage_at(it).beta;
    return interpolate(beta_i_, beta_f_, it);
  }

  [[nodiscard]] double gamma_at(std::uint64_t it) const {
    check(it);
    if (mode_ == Mode::piecewise) return stage_at(it).gamma;
    return gamma_interpolated_ ? interpolate(gamma_i_, gamma_f_, it) : gamma_i_;
  }

 private:
  AnnealSchedule() = default;

  [[nodiscard]] double interpolate(double from, double to, std::uint64_t it) const {
    if (it_max_ == 0 || it == 0) return from;
    if (it == it_max_) return to;
    const double t = static_cast<double>(it) / static_cast<double>(it_max_);
    return from * std::pow(to / from, t);
  }

  // Stage n covers iterations [L_{n-1}, L_n); it_max maps to the last stage.
  [[nodiscard]] const Stage& stage_at(std::uint64_t it) const {
    std::uint64_t end = 0;
    for (const auto& st : stages_) {
      end += st.length;
      if (it < end) return st;
    }
    return stages_.back();
  }

  void check(std::uint64_t it) const {
    if (it > it_max_)
      throw std::out_of_range("AnnealSchedule: iteration " + std::to_string(it) + " beyond it_max " +
                              std::to_string(it_max_));
  }

  void validate() const {
    if (mode_ == Mode::exponential) {
      if (!(beta_i_ > 0.0) || !(beta_f_ >= beta_i_))
        throw std::invalid_argument("AnnealSchedule: need beta_f >= beta_i > 0");
      if (!(gamma_i_ >= 0.0)) throw std::invalid_argument("AnnealSchedule: gamma must be >= 0");
      return;
    }
    if (stages_.empty()) throw std::invalid_argument("AnnealSchedule: empty stage list");
    double prev = 0.0;
    for (const auto& st : stages_) {
      if (!(st.beta >= 0.0) || st.beta < prev)
        throw std::invalid_argument("AnnealSchedule: stage betas must be nonnegative and nondecreasing");
      if (!(st.gamma >= 0.0)) throw std::invalid_argument("AnnealSchedule: gamma must be >= 0");
      if (st.length == 0) throw std::invalid_argument("AnnealSchedule: stage lengths must be positive");
      prev = st.beta;
    }
  }

  Mode mode_ = Mode::exponential;
  double beta_i_ = 1.0;
  double beta_f_ = 1.0;
  double gamma_i_ = 0.0;
  double gamma_f_ = 0.0;
  bool gamma_interpolated_ = false;
  std::uint64_t it_max_ = 0;
  std::vector<Stage> stages_;
};

/// Stage length T_k = e^{m beta_k} (log kappa1 + C b) / C, rounded up to an
/// integer (values within 1e-9 of an integer are snapped to it).
inline std::uint64_t azencott_stage_length(double beta_k, double m, double kappa1, double c_const, double b) {
  if (!(c_const > 0.0) || !(b > 0.0) || !(kappa1 >= 1.0))
    throw std::invalid_argument("azencott_stage_length: need C > 0, b > 0, kappa1 >= 1");
  const double t = std::exp(m * beta_k) * (std::log(kappa1) + c_const * b) / c_const;
  const double r = std::round(t);
  const double v = std::abs(t - r) <= 1e-9 * std::max(1.0, r) ? r : std::ceil(t);
  return static_cast<std::uint64_t>(std::max(1.0, v));
}

/// Stages (beta_k, gamma, T_k) for the given beta sequence.
inline std::vector<Stage> azencott_stages(const std::vector<double>& betas, double m, double kappa1,
                                          double c_const, double b, double gamma = 0.0) {
  std::vector<Stage> out;
  out.reserve(betas.size());
  for (double beta : betas) out.push_back(Stage{beta, gamma, azencott_stage_length(beta, m, kappa1, c_const, b)});
  return out;
}

/// Asymptotic beta growth beta_n ~ (alpha/B) log n + (b/B) n.
inline double azencott_beta(std::uint64_t n, double alpha, double b, double energy_gap) {
  return (alpha / energy_gap) * std::log(static_cast<double>(n)) + (b / energy_gap) * static_cast<double>(n);
}

}  // namespace rsa
