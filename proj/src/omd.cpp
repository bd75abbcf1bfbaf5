#include "lomd/omd.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "lomd/error.hpp"

namespace lomd {

StepSchedule::StepSchedule(double gamma, double t0, double eta) : gamma_(gamma), t0_(t0), eta_(eta) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw ConfigError("step size gamma must be positive");
  if (!(t0 >= 0.0) || !std::isfinite(t0)) throw ConfigError("step offset t0 must be non-negative");
  if (!(eta > 0.5 && eta <= 1.0)) throw ConfigError("step exponent eta must lie in (1/2, 1]");
}

double StepSchedule::at(std::uint64_t t) const {
  return gamma_ / std::pow(static_cast<double>(t) + t0_, eta_);
}

double StepSchedule::square_sum_bound() const {
  const double g2 = gamma_ * gamma_;
  const double k = 2.0 * eta_ - 1.0;
  // First term plus the integral from 1; with t0 > 0 the integral from 0 also bounds it.
  double bound = g2 * (std::pow(1.0 + t0_, -2.0 * eta_) + std::pow(1.0 + t0_, -k) / k);
  if (t0_ > 0.0) bound = std::min(bound, g2 * std::pow(t0_, -k) / k);
  return bound;
}

void Trajectory::reserve(std::size_t rows) {
  steps_.reserve(rows);
  for (auto* col : {&x_, &x_lead_, &y_prev_, &y_lead_, &u_prev_, &u_lead_}) col->reserve(rows * dim_);
  gamma_.reserve(rows);
  div_.reserve(rows);
  phi_.reserve(rows);
}

void Trajectory::append(const Row& r) {
  steps_.push_back(r.t);
  x_.insert(x_.end(), r.x.begin(), r.x.end());
  x_lead_.insert(x_lead_.end(), r.x_lead.begin(), r.x_lead.end());
  y_prev_.insert(y_prev_.end(), r.y_prev.begin(), r.y_prev.end());
  y_lead_.insert(y_lead_.end(), r.y_lead.begin(), r.y_lead.end());
  u_prev_.insert(u_prev_.end(), r.u_prev.begin(), r.u_prev.end());
  u_lead_.insert(u_lead_.end(), r.u_lead.begin(), r.u_lead.end());
  gamma_.push_back(r.gamma);
  div_.push_back(r.divergence);
  phi_.push_back(r.phi);
}

void Trajectory::finish(Point x_final, double div, double phi) {
  final_state_ = std::move(x_final);
  final_div_ = div;
  final_phi_ = phi;
}

std::vector<std::uint64_t> thinned_steps(std::uint64_t T) {
  std::vector<std::uint64_t> out;
  for (double v = 1.0; v <= static_cast<double>(T); v *= kThinRatio) {
    const auto t = static_cast<std::uint64_t>(std::floor(v));
    if (out.empty() || out.back() != t) out.push_back(t);
  }
  if (out.back() != T) out.push_back(T);
  return out;
}

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

namespace {

void check_inputs(const ProblemSpec& p, const GeometrySpec& g, std::uint64_t T, const Point& x_init) {
  if (!(p.domain() == g.domain()))
    throw ConfigError(fmt::format("problem domain ({}) differs from geometry domain ({})",
                                  p.domain().describe(), g.domain().describe()));
  if (T < 2) throw ConfigError("horizon T must be at least 2");
  if (x_init.size() != g.dimension()) throw ConfigError("x_init dimension does not match the domain");
  if (!g.in_prox_domain(x_init))
    throw ProxDomainError(fmt::format("x_init is outside the prox-domain of {}", g.name()));
}

double guarded_divergence(const GeometrySpec& g, const Point& xstar, const Point& x, std::uint64_t t) {
  const double d = divergence(g, xstar, x);
  if (!(d <= kBlowUpDivergence))
    throw DivergenceError(fmt::format("D(x*, X_t) = {} exceeds {} at t = {}", d, kBlowUpDivergence, t));
  return d;
}

// Keeps every row, or only the thinned checkpoints above kDenseLimit.
class TrajectorySink {
 public:
  TrajectorySink(std::size_t dim, std::uint64_t T) : traj_(dim) {
    if (T > kDenseLimit) {
      keep_ = thinned_steps(T);
      traj_.set_thinned(true);
      traj_.reserve(keep_.size());
    } else {
      traj_.reserve(T);
    }
  }
  bool operator()(const Trajectory::Row& r) {
    if (!keep_.empty()) {
      if (next_ >= keep_.size() || keep_[next_] != r.t) return true;
      ++next_;
    }
    traj_.append(r);
    return true;
  }
  Trajectory take() { return std::move(traj_); }
  Trajectory& get() { return traj_; }

 private:
  Trajectory traj_;
  std::vector<std::uint64_t> keep_;
  std::size_t next_ = 0;
};

class CurveSink {
 public:
  explicit CurveSink(std::uint64_t T) { curve_.reserve(T); }
  bool operator()(const Trajectory::Row& r) {
    curve_.push_back(r.divergence);
    return true;
  }
  std::vector<double> take() { return std::move(curve_); }

 private:
  std::vector<double> curve_;
};

template <class Sink>
void omd_loop(const ProblemSpec& p, const GeometrySpec& g, const StepSchedule& s, const OracleSpec& o,
              std::uint64_t T, const Point& x_init, Sink& sink, double& final_div, double& final_phi,
              Point& x_final) {
  check_inputs(p, g, T, x_init);
  const Domain& dom = p.domain();
  const Point& xstar = p.solution();
  Point x = x_init;
  OracleSample prev = query_oracle(p, o, x, StepIndex::half_after(0));
  double phi = 0.0;
  for (std::uint64_t t = 1; t <= T; ++t) {
    const double gamma = s.at(t);
    const double d = guarded_divergence(g, xstar, x, t);
    const Point x_lead = prox(g, x, -gamma * prev.signal);
    OracleSample lead = query_oracle(p, o, x_lead, StepIndex::half_after(t));
    Point x_next = prox(g, x, -gamma * lead.signal);
    if (!sink(Trajectory::Row{t, x, x_lead, prev.signal, lead.signal, prev.noise, lead.noise, gamma, d, phi}))
      return;
    const double jump = dom.dual_norm(lead.signal - prev.signal);
    phi = 0.5 * gamma * gamma * jump * jump;
    prev = std::move(lead);
    x = std::move(x_next);
  }
  final_div = guarded_divergence(g, xstar, x, T + 1);
  final_phi = phi;
  x_final = std::move(x);
}

template <class Sink>
void mirror_prox_loop(const ProblemSpec& p, const GeometrySpec& g, double gamma, std::uint64_t T,
                      const Point& x_init, Sink& sink, double& final_div, Point& x_final) {
  check_inputs(p, g, T, x_init);
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw ConfigError("step size gamma must be positive");
  const Point& xstar = p.solution();
  const Dual zero(x_init.size());
  Point x = x_init;
  for (std::uint64_t t = 1; t <= T; ++t) {
    const double d = guarded_divergence(g, xstar, x, t);
    const Dual v = eval_field(p, x);
    const Point x_lead = prox(g, x, -gamma * v);
    const Dual v_lead = eval_field(p, x_lead);
    Point x_next = prox(g, x, -gamma * v_lead);
    if (!sink(Trajectory::Row{t, x, x_lead, v, v_lead, zero, zero, gamma, d, 0.0})) return;
    x = std::move(x_next);
  }
  final_div = guarded_divergence(g, xstar, x, T + 1);
  x_final = std::move(x);
}

std::uint64_t run_hash(const ProblemSpec& p, const GeometrySpec& g, std::string_view schedule,
                       double sigma2, std::uint64_t T, const Point& x_init) {
  return fnv1a(fmt::format("{};{};{};sigma2={};T={};x_init={}", p.key(), g.key(), schedule, sigma2, T,
                           fmt::join(x_init.begin(), x_init.end(), "|")));
}

}  // namespace

void run_omd_observed(const ProblemSpec& p, const GeometrySpec& g, const StepSchedule& s,
                      const OracleSpec& o, std::uint64_t T, const Point& x_init,
                      const std::function<bool(const Trajectory::Row&)>& observer) {
  double d = 0.0, phi = 0.0;
  Point x_final;
  auto sink = [&](const Trajectory::Row& r) { return observer(r); };
  omd_loop(p, g, s, o, T, x_init, sink, d, phi, x_final);
}

Trajectory run_omd(const ProblemSpec& p, const GeometrySpec& g, const StepSchedule& s,
                   const OracleSpec& o, std::uint64_t T, const Point& x_init) {
  TrajectorySink sink(x_init.size(), T);
  double d = 0.0, phi = 0.0;
  Point x_final;
  omd_loop(p, g, s, o, T, x_init, sink, d, phi, x_final);
  Trajectory traj = sink.take();
  traj.finish(std::move(x_final), d, phi);
  traj.set_identity(
      run_hash(p, g, fmt::format("omd:gamma={},t0={},eta={}", s.gamma(), s.t0(), s.eta()), o.sigma2, T, x_init),
      o.seed);
  return traj;
}

std::vector<double> run_omd_curve(const ProblemSpec& p, const GeometrySpec& g, const StepSchedule& s,
                                  const OracleSpec& o, std::uint64_t T, const Point& x_init) {
  CurveSink sink(T);
  double d = 0.0, phi = 0.0;
  Point x_final;
  omd_loop(p, g, s, o, T, x_init, sink, d, phi, x_final);
  return sink.take();
}

Trajectory run_mirror_prox(const ProblemSpec& p, const GeometrySpec& g, double gamma, std::uint64_t T,
                           const Point& x_init) {
  TrajectorySink sink(x_init.size(), T);
  double d = 0.0;
  Point x_final;
  mirror_prox_loop(p, g, gamma, T, x_init, sink, d, x_final);
  Trajectory traj = sink.take();
  traj.finish(std::move(x_final), d, 0.0);
  traj.set_identity(run_hash(p, g, fmt::format("mirror-prox:gamma={}", gamma), 0.0, T, x_init), 0);
  return traj;
}

std::vector<double> run_mirror_prox_curve(const ProblemSpec& p, const GeometrySpec& g, double gamma,
                                          std::uint64_t T, const Point& x_init) {
  CurveSink sink(T);
  double d = 0.0;
  Point x_final;
  mirror_prox_loop(p, g, gamma, T, x_init, sink, d, x_final);
  return sink.take();
}

}  // namespace lomd
