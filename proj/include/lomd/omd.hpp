#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "lomd/geometry.hpp"
#include "lomd/problems.hpp"

namespace lomd {

/// gamma_t = gamma / (t + t0)^eta.
class StepSchedule {
 public:
  /// Throws ConfigError unless gamma > 0, t0 >= 0, eta in (1/2, 1].
  StepSchedule(double gamma, double t0, double eta);

  double gamma() const { return gamma_; }
  double t0() const { return t0_; }
  double eta() const { return eta_; }

  double at(std::uint64_t t) const;

  /// Upper bound on the sum over t >= 1 of gamma_t^2.
  double square_sum_bound() const;

 private:
  double gamma_;
  double t0_;
  double eta_;
};

/// Declared blow-up threshold on D(x*, X_t).
inline constexpr double kBlowUpDivergence = 1e9;
/// Trajectories longer than this keep only checkpoints at powers of kThinRatio.
inline constexpr std::uint64_t kDenseLimit = 1'000'000;
inline constexpr double kThinRatio = 1.05;

/// Columnar record. Row i holds step t = steps[i]:
/// X_t, X_{t+1/2}, Y_{t-1/2}, Y_{t+1/2}, U_{t-1/2}, U_{t+1/2}, gamma_t, D(x*, X_t), phi_t.
/// phi_t = (gamma_{t-1}^2 / 2) |Y_{t-1/2} - Y_{t-3/2}|_*^2 and phi_1 = 0 since X_1 = X_{1/2}.
class Trajectory {
 public:
  explicit Trajectory(std::size_t dim = 1) : dim_(dim) {}

  std::size_t dimension() const { return dim_; }
  std::size_t size() const { return steps_.size(); }
  bool thinned() const { return thinned_; }

  std::uint64_t step(std::size_t i) const { return steps_[i]; }
  Point state(std::size_t i) const { return Point(slice(x_, i)); }
  Point lead(std::size_t i) const { return Point(slice(x_lead_, i)); }
  Dual signal_prev(std::size_t i) const { return Dual(slice(y_prev_, i)); }
  Dual signal_lead(std::size_t i) const { return Dual(slice(y_lead_, i)); }
  Dual noise_prev(std::size_t i) const { return Dual(slice(u_prev_, i)); }
  Dual noise_lead(std::size_t i) const { return Dual(slice(u_lead_, i)); }
  double gamma(std::size_t i) const { return gamma_[i]; }
  double divergence(std::size_t i) const { return div_[i]; }
  double phi(std::size_t i) const { return phi_[i]; }

  /// X_{T+1} and its divergence and phi.
  const Point& final_state() const { return final_state_; }
  double final_divergence() const { return final_div_; }
  double final_phi() const { return final_phi_; }

  std::uint64_t config_hash() const { return config_hash_; }
  std::uint64_t seed() const { return seed_; }

  struct Row {
    std::uint64_t t;
    const Point& x;
    const Point& x_lead;
    const Dual& y_prev;
    const Dual& y_lead;
    const Dual& u_prev;
    const Dual& u_lead;
    double gamma;
    double divergence;
    double phi;
  };
  void append(const Row& r);
  void finish(Point x_final, double div, double phi);
  void set_identity(std::uint64_t config_hash, std::uint64_t seed) {
    config_hash_ = config_hash;
    seed_ = seed;
  }
  void set_thinned(bool v) { thinned_ = v; }
  void reserve(std::size_t rows);

 private:
  std::span<const double> slice(const std::vector<double>& col, std::size_t i) const {
    return {col.data() + i * dim_, dim_};
  }

  std::size_t dim_;
  bool thinned_ = false;
  std::vector<std::uint64_t> steps_;
  std::vector<double> x_, x_lead_, y_prev_, y_lead_, u_prev_, u_lead_;
  std::vector<double> gamma_, div_, phi_;
  Point final_state_;
  double final_div_ = 0.0;
  double final_phi_ = 0.0;
  std::uint64_t config_hash_ = 0;
  std::uint64_t seed_ = 0;
};

/// Optimistic mirror descent:
///   X_{t+1/2} = prox(X_t, -gamma_t Y_{t-1/2}),  X_{t+1} = prox(X_t, -gamma_t Y_{t+1/2}),
/// with X_1 = X_{1/2} = x_init and Y_{1/2} from one query at step 1/2.
/// Throws DivergenceError once D(x*, X_t) exceeds kBlowUpDivergence.
Trajectory run_omd(const ProblemSpec& p, const GeometrySpec& g, const StepSchedule& s,
                   const OracleSpec& o, std::uint64_t T, const Point& x_init);

/// D(x*, X_t) for t = 1..T only; no per-step storage beyond the curve.
std::vector<double> run_omd_curve(const ProblemSpec& p, const GeometrySpec& g, const StepSchedule& s,
                                  const OracleSpec& o, std::uint64_t T, const Point& x_init);

/// Streams rows to `observer`; returning false stops the run early.
void run_omd_observed(const ProblemSpec& p, const GeometrySpec& g, const StepSchedule& s,
                      const OracleSpec& o, std::uint64_t T, const Point& x_init,
                      const std::function<bool(const Trajectory::Row&)>& observer);

/// Deterministic extra-gradient with constant step: two field evaluations per step.
/// Rows record Y_{t-1/2} = V(X_t) and Y_{t+1/2} = V(X_{t+1/2}); phi is zero.
Trajectory run_mirror_prox(const ProblemSpec& p, const GeometrySpec& g, double gamma, std::uint64_t T,
                           const Point& x_init);
std::vector<double> run_mirror_prox_curve(const ProblemSpec& p, const GeometrySpec& g, double gamma,
                                          std::uint64_t T, const Point& x_init);

/// Checkpoints kept when T exceeds kDenseLimit: every distinct
/// floor(kThinRatio^k) not above T, plus T itself.
std::vector<std::uint64_t> thinned_steps(std::uint64_t T);

/// FNV-1a, 64-bit.
std::uint64_t fnv1a(std::string_view text);

}  // namespace lomd
