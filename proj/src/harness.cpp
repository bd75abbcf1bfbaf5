#include "lomd/harness.hpp"

#include <cmath>
#include <exception>

#include <fmt/format.h>
#include <fmt/ranges.h>
#include <omp.h>

#include "lomd/error.hpp"
#include "lomd/geometry.hpp"
#include "lomd/omd.hpp"
#include "lomd/problems.hpp"
#include "lomd/stats.hpp"

namespace lomd {

void ExperimentConfig::validate() const {
  if (trials < 1) throw ConfigError("trials must be at least 1");
  if (T < 2) throw ConfigError("T must be at least 2");
  const auto lo = window_lo();
  const auto hi = window_hi();
  if (lo < 10) throw ConfigError(fmt::format("regression window start t_lo = {} must be at least 10", lo));
  if (hi > T) throw ConfigError(fmt::format("regression window end t_hi = {} exceeds T = {}", hi, T));
  if (lo >= hi) throw ConfigError("regression window is empty");
  if (!(sigma2 >= 0.0) || !std::isfinite(sigma2)) throw ConfigError("sigma2 must be non-negative");
}

std::string ExperimentConfig::canonical() const {
  return fmt::format("problem={};geometry={};gamma={};t0={};eta={};sigma2={};T={};trials={};x_init={};"
                     "t_lo={};t_hi={};seed={}",
                     problem, geometry, gamma, t0, eta, sigma2, T, trials,
                     fmt::join(x_init.begin(), x_init.end(), "|"), window_lo(), window_hi(), seed);
}

std::uint64_t ExperimentConfig::hash() const { return fnv1a(canonical()); }

namespace {

struct Partial {
  std::vector<double> sum;
  std::vector<double> sumsq;
  std::size_t used = 0;
  std::size_t blowups = 0;
};

struct Setup {
  ProblemSpec problem;
  GeometrySpec geometry;
  StepSchedule schedule;
};

Setup make_setup(const ExperimentConfig& cfg) {
  cfg.validate();
  return {parse_problem(cfg.problem), parse_geometry(cfg.geometry), StepSchedule(cfg.gamma, cfg.t0, cfg.eta)};
}

Partial run_chunk(const ExperimentConfig& cfg, const Setup& s, std::size_t chunk) {
  Partial out;
  out.sum.assign(cfg.T, 0.0);
  out.sumsq.assign(cfg.T, 0.0);
  const std::size_t first = chunk * kTrialChunk;
  const std::size_t last = std::min(cfg.trials, first + kTrialChunk);
  for (std::size_t k = first; k < last; ++k) {
    const OracleSpec o{cfg.sigma2, NoiseStream::substream_key(cfg.seed, k)};
    std::vector<double> curve;
    try {
      curve = run_omd_curve(s.problem, s.geometry, s.schedule, o, cfg.T, cfg.x_init);
    } catch (const DivergenceError&) {
      ++out.blowups;
      continue;
    }
    for (std::size_t i = 0; i < cfg.T; ++i) {
      out.sum[i] += curve[i];
      out.sumsq[i] += curve[i] * curve[i];
    }
    ++out.used;
  }
  return out;
}

void merge_into(Partial& a, const Partial& b) {
  for (std::size_t i = 0; i < a.sum.size(); ++i) {
    a.sum[i] += b.sum[i];
    a.sumsq[i] += b.sumsq[i];
  }
  a.used += b.used;
  a.blowups += b.blowups;
}

MeanCurve finish(std::vector<Partial>& parts) {
  // Fixed pairwise tree: (0,1), (2,3), ... then again on the survivors.
  for (std::size_t width = 1; width < parts.size(); width *= 2)
    for (std::size_t i = 0; i + width < parts.size(); i += 2 * width) merge_into(parts[i], parts[i + width]);
  Partial& total = parts.front();
  MeanCurve out;
  out.trials_used = total.used;
  out.blowups = total.blowups;
  if (total.used == 0) throw NumericalError(fmt::format("all {} trials hit the blow-up guard", total.blowups));
  const double n = static_cast<double>(total.used);
  out.mean.resize(total.sum.size());
  out.stderr_of_mean.resize(total.sum.size());
  for (std::size_t i = 0; i < total.sum.size(); ++i) {
    const double m = total.sum[i] / n;
    out.mean[i] = m;
    if (total.used > 1) {
      const double var = std::max(total.sumsq[i] / n - m * m, 0.0) * n / (n - 1.0);
      out.stderr_of_mean[i] = std::sqrt(var / n);
    }
  }
  return out;
}

std::size_t chunk_count(const ExperimentConfig& cfg) { return (cfg.trials + kTrialChunk - 1) / kTrialChunk; }

}  // namespace

MeanCurve run_trials_serial(const ExperimentConfig& cfg) {
  const Setup s = make_setup(cfg);
  std::vector<Partial> parts(chunk_count(cfg));
  for (std::size_t c = 0; c < parts.size(); ++c) parts[c] = run_chunk(cfg, s, c);
  return finish(parts);
}

MeanCurve run_trials(const ExperimentConfig& cfg) {
  const Setup s = make_setup(cfg);
  std::vector<Partial> parts(chunk_count(cfg));
  std::vector<std::exception_ptr> errors(parts.size());
  const int threads = cfg.threads > 0 ? cfg.threads : omp_get_max_threads();
  const auto n = static_cast<std::int64_t>(parts.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
  for (std::int64_t c = 0; c < n; ++c) {
    try {
      parts[c] = run_chunk(cfg, s, static_cast<std::size_t>(c));
    } catch (...) {
      errors[c] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return finish(parts);
}

RateEstimate estimate_rate(std::span<const double> curve, std::uint64_t t_lo, std::uint64_t t_hi) {
  if (t_lo < 1 || t_hi > curve.size() || t_lo > t_hi)
    throw InsufficientData(fmt::format("window [{}, {}] is outside the curve of length {}", t_lo, t_hi,
                                       curve.size()));
  std::vector<double> t;
  t.reserve(t_hi - t_lo + 1);
  for (std::uint64_t k = t_lo; k <= t_hi; ++k) t.push_back(static_cast<double>(k));
  return estimate_rate(t, curve.subspan(t_lo - 1, t_hi - t_lo + 1), static_cast<double>(t_lo),
                       static_cast<double>(t_hi));
}

RateEstimate estimate_rate(std::span<const double> t, std::span<const double> values, double t_lo,
                           double t_hi) {
  if (t.size() != values.size()) throw InsufficientData("time and value columns differ in length");
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] < t_lo || t[i] > t_hi) continue;
    if (!(values[i] > 0.0))
      throw NonPositiveValues(fmt::format("curve value {} at t = {} is not positive", values[i], t[i]));
    lx.push_back(std::log(t[i]));
    ly.push_back(std::log(values[i]));
  }
  if (lx.size() < 20)
    throw InsufficientData(fmt::format("{} points in the regression window, need 20", lx.size()));
  const LinearFit fit = ols(lx, ly);
  RateEstimate r;
  r.nu = -fit.slope;
  r.intercept = fit.intercept;
  r.r2 = fit.r2;
  r.nu_stderr = fit.slope_stderr;
  r.t_lo = static_cast<std::uint64_t>(t_lo);
  r.t_hi = static_cast<std::uint64_t>(t_hi);
  r.points = fit.points;
  return r;
}

RatePrediction predict_rate(double beta, double eta, double eps) {
  if (!(beta >= 0.0 && beta < 1.0)) throw DomainError(fmt::format("beta must lie in [0, 1), got {}", beta));
  if (!(eta > 0.5 && eta <= 1.0)) throw DomainError(fmt::format("eta must lie in (1/2, 1], got {}", eta));
  if (!(eps >= 0.0 && eps < 1.0)) throw DomainError(fmt::format("eps must lie in [0, 1), got {}", eps));
  RatePrediction p;
  if (beta == 0.0) {
    p.nu = eta;
  } else if (eta == 1.0) {
    p.logarithmic = true;
    p.log_exponent = (1.0 - beta) / beta;
  } else {
    p.nu = std::min((1.0 - eta) * (1.0 - beta) / beta, eta);
  }
  if (beta < 0.5) {
    p.optimal_eta = 1.0 - beta;
    p.optimized_nu = 1.0 - beta;
  } else {
    p.optimal_eta = (1.0 + eps) / 2.0;
    p.optimized_nu = (1.0 - eps) * (1.0 - beta) / (2.0 * beta);
  }
  return p;
}

}  // namespace lomd
