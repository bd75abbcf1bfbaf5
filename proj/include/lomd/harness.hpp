#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "lomd/vector.hpp"

namespace lomd {

struct ExperimentConfig {
  std::string problem = "linear1d:lambda=1";
  std::string geometry = "euclidean";
  double gamma = 1.0;
  double t0 = 0.0;
  double eta = 1.0;
  double sigma2 = 1e-4;
  std::uint64_t T = 100000;
  std::size_t trials = 100;
  Point x_init{0.1};
  /// Regression window; 0 selects the default [T/100, T].
  std::uint64_t t_lo = 0;
  std::uint64_t t_hi = 0;
  std::uint64_t seed = 20240501;
  /// 0 selects the OpenMP default.
  int threads = 0;

  std::uint64_t window_lo() const { return t_lo ? t_lo : T / 100; }
  std::uint64_t window_hi() const { return t_hi ? t_hi : T; }

  /// Throws ConfigError unless t_lo >= 10, t_lo < t_hi <= T and trials >= 1.
  void validate() const;

  /// Stable text form of every field that affects results (threads excluded).
  std::string canonical() const;
  std::uint64_t hash() const;
};

/// Pointwise statistics of D(x*, X_t), index t - 1 for t = 1..T.
struct MeanCurve {
  std::vector<double> mean;
  std::vector<double> stderr_of_mean;
  std::size_t trials_used = 0;
  std::size_t blowups = 0;
};

/// Trials run in chunks of kTrialChunk with ordered in-chunk sums and a fixed
/// pairwise reduction across chunks, so the result is independent of the
/// thread count. Trial k uses noise substream k of cfg.seed. Trials that hit
/// the blow-up guard are excluded and counted.
MeanCurve run_trials(const ExperimentConfig& cfg);
/// Same arithmetic on the calling thread; bit-identical to run_trials.
MeanCurve run_trials_serial(const ExperimentConfig& cfg);

inline constexpr std::size_t kTrialChunk = 8;

struct RateEstimate {
  double nu = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  double nu_stderr = 0.0;
  std::uint64_t t_lo = 0;
  std::uint64_t t_hi = 0;
  std::size_t points = 0;
};

/// OLS of log curve on log t over every integer t in [t_lo, t_hi]; curve[t - 1]
/// is the value at t. nu = -slope. Throws InsufficientData below 20 points and
/// NonPositiveValues if any value in the window is not positive.
RateEstimate estimate_rate(std::span<const double> curve, std::uint64_t t_lo, std::uint64_t t_hi);

/// Same for explicit (t, value) samples, e.g. thinned checkpoints.
RateEstimate estimate_rate(std::span<const double> t, std::span<const double> values, double t_lo,
                           double t_hi);

struct RatePrediction {
  /// Polynomial exponent at the given eta; 0 when the rate is logarithmic.
  double nu = 0.0;
  /// eta = 1 with beta > 0: D = O((log t)^-log_exponent).
  bool logarithmic = false;
  double log_exponent = 0.0;
  /// Tuned step exponent: 1 - beta below the transition, (1 + eps)/2 above.
  double optimal_eta = 0.0;
  /// Exponent at the tuned eta: 1 - beta, or (1 - eps)(1 - beta)/(2 beta).
  double optimized_nu = 0.0;
};

/// Throws DomainError unless beta in [0, 1), eta in (1/2, 1], eps in [0, 1).
RatePrediction predict_rate(double beta, double eta, double eps = 0.05);

}  // namespace lomd
