#include "lomd/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "lomd/error.hpp"

namespace lomd {

StabilityReport estimate_stability(const ProblemSpec& p, const GeometrySpec& g, const StepSchedule& s,
                                   const OracleSpec& o, double r, const Point& x_init, std::uint64_t T,
                                   std::size_t trials) {
  if (trials < 100) throw PreconditionError("stability estimate needs at least 100 trials");
  if (!(r > 0.0)) throw PreconditionError("stability radius must be positive");
  // X_1 = X_{1/2}, so phi_1 = 0.
  const double d0 = divergence(g, p.solution(), x_init);
  if (d0 > 2.0 * r * r / 9.0)
    throw PreconditionError(
        fmt::format("initialization D(x*, x_init) = {} exceeds 2 r^2 / 9 = {}", d0, 2.0 * r * r / 9.0));

  const Domain& dom = p.domain();
  const Point& xstar = p.solution();
  const auto n = static_cast<std::int64_t>(trials);
  std::size_t stayed = 0, blowups = 0;

#pragma omp parallel for schedule(dynamic, 4) reduction(+ : stayed, blowups)
  for (std::int64_t k = 0; k < n; ++k) {
    const OracleSpec trial{o.sigma2, NoiseStream::substream_key(o.seed, static_cast<std::uint64_t>(k))};
    bool inside = true;
    try {
      run_omd_observed(p, g, s, trial, T, x_init, [&](const Trajectory::Row& row) {
        inside = dom.distance(row.x, xstar) <= r && dom.distance(row.x_lead, xstar) <= r;
        return inside;
      });
    } catch (const DivergenceError&) {
      inside = false;
      ++blowups;
    }
    if (inside) ++stayed;
  }

  StabilityReport rep;
  rep.radius = r;
  rep.trials = trials;
  rep.stayed = stayed;
  rep.escaped = trials - stayed;
  rep.blowups = blowups;
  rep.stay_frequency = static_cast<double>(stayed) / static_cast<double>(trials);
  rep.escape_frequency = 1.0 - rep.stay_frequency;
  rep.gamma_sq_sum = s.square_sum_bound();
  const double r2 = r * r;
  rep.lemma_bound = 1.0 - 9.0 * (8.0 + r2) * o.sigma2 * rep.gamma_sq_sum / (r2 * std::min(1.0, r2 / 9.0));
  rep.bound_applicable = rep.lemma_bound > 0.0;
  const double k2 = 2.0 * s.eta() - 1.0;
  rep.rho2 = s.t0() > 0.0 ? o.sigma2 * s.gamma() * s.gamma() * std::pow(s.t0(), -k2) / k2
                          : std::numeric_limits<double>::infinity();
  return rep;
}

}  // namespace lomd
