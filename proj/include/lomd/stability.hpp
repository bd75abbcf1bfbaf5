#pragma once

#include <cstdint>

#include "lomd/omd.hpp"

namespace lomd {

struct StabilityReport {
  double radius = 0.0;
  std::size_t trials = 0;
  std::size_t stayed = 0;
  /// Escapes include trials that hit the blow-up guard.
  std::size_t escaped = 0;
  std::size_t blowups = 0;
  double stay_frequency = 0.0;
  double escape_frequency = 0.0;
  /// Upper bound on the sum of squared step sizes.
  double gamma_sq_sum = 0.0;
  /// 1 - 9 (8 + r^2) sigma^2 Gamma / (r^2 min(1, r^2/9)); informative only when positive.
  double lemma_bound = 0.0;
  bool bound_applicable = false;
  /// sigma^2 gamma^2 t0^(1-2 eta) / (2 eta - 1): scale of the asymptotic
  /// 1 - O(rho^2 / r^2) form, whose constant is not explicit.
  double rho2 = 0.0;
};

/// Frequency over independent trials of {X_s in B(x*, r) for every s = 1/2, 1, 3/2, ..., T + 1/2},
/// checking both base and leading states. Trial k uses noise substream k of o.seed.
/// Throws PreconditionError if trials < 100 or D(x*, x_init) > 2 r^2 / 9.
StabilityReport estimate_stability(const ProblemSpec& p, const GeometrySpec& g, const StepSchedule& s,
                                   const OracleSpec& o, double r, const Point& x_init, std::uint64_t T,
                                   std::size_t trials);

}  // namespace lomd
