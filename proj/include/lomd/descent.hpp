#pragma once

#include <cstdint>

#include "lomd/omd.hpp"

namespace lomd {

inline constexpr double kDescentTolerance = 1e-9;

struct DescentReport {
  std::size_t checked = 0;
  std::size_t violations = 0;
  /// Largest LHS - RHS; negative when every step holds with slack.
  double max_violation = 0.0;
  std::uint64_t worst_step = 0;
  bool pass = false;
};

/// Evaluates, for every recorded t,
///   D(x*, X_{t+1}) + phi_{t+1}
///     <= D(x*, X_t) + (1 - gamma_t mu) phi_t - gamma_t <Y_{t+1/2}, X_{t+1/2} - x*>
///        + (4 gamma_t^2 L^2 - 1/2) |X_{t+1/2} - X_t|^2
///        + 4 gamma_t^2 (|U_{t+1/2}|_*^2 + |U_{t-1/2}|_*^2).
/// Passes iff the largest violation is at most kDescentTolerance.
/// Throws PreconditionError if some gamma_t > 1/(4L) or the trajectory is thinned.
DescentReport check_descent_inequality(const Trajectory& traj, const ProblemSpec& p);

}  // namespace lomd
