#include "lomd/descent.hpp"

#include <limits>

#include <fmt/format.h>

#include "lomd/error.hpp"

namespace lomd {

DescentReport check_descent_inequality(const Trajectory& traj, const ProblemSpec& p) {
  if (traj.thinned()) throw PreconditionError("descent check needs every step; trajectory is thinned");
  if (traj.size() == 0) throw PreconditionError("descent check needs a non-empty trajectory");
  const double L = p.lipschitz();
  const double mu = p.sos();
  const double cap = 1.0 / (4.0 * L);
  for (std::size_t i = 0; i < traj.size(); ++i)
    if (traj.gamma(i) > cap * (1.0 + 1e-15))
      throw PreconditionError(fmt::format("gamma_{} = {} exceeds 1/(4L) = {}", traj.step(i), traj.gamma(i), cap));

  const Domain& dom = p.domain();
  const Point& xstar = p.solution();
  DescentReport rep;
  rep.max_violation = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const bool last = i + 1 == traj.size();
    const double d_next = last ? traj.final_divergence() : traj.divergence(i + 1);
    const double phi_next = last ? traj.final_phi() : traj.phi(i + 1);
    const double g = traj.gamma(i);
    const Point x = traj.state(i);
    const Point x_lead = traj.lead(i);
    const double step = dom.norm(x_lead - x);
    const double u_lead = dom.dual_norm(traj.noise_lead(i));
    const double u_prev = dom.dual_norm(traj.noise_prev(i));
    const double lhs = d_next + phi_next;
    const double rhs = traj.divergence(i) + (1.0 - g * mu) * traj.phi(i) -
                       g * pairing(traj.signal_lead(i), x_lead - xstar) +
                       (4.0 * g * g * L * L - 0.5) * step * step +
                       4.0 * g * g * (u_lead * u_lead + u_prev * u_prev);
    const double v = lhs - rhs;
    ++rep.checked;
    if (v > kDescentTolerance) ++rep.violations;
    if (v > rep.max_violation) {
      rep.max_violation = v;
      rep.worst_step = traj.step(i);
    }
  }
  rep.pass = rep.violations == 0;
  return rep;
}

}  // namespace lomd
