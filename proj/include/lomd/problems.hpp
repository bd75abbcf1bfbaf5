#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>

#include "lomd/domain.hpp"
#include "lomd/rng.hpp"
#include "lomd/vector.hpp"

namespace lomd {

/// V(x) = lambda (x - x*).
struct Linear1D {
  double lambda;
};
/// V(x) = diag(a) (x - x*), a > 0.
struct AffineDiag {
  Point a;
};
/// V(x1, x2) = (a x2 + mu (x1 - x1*), -a x1 + mu (x2 - x2*)).
struct BilinearSaddle {
  double a;
  double mu;
};

using Field = std::variant<Linear1D, AffineDiag, BilinearSaddle>;

class ProblemSpec {
 public:
  /// Throws ConfigError on dimension mismatch or non-positive coefficients,
  /// DomainError if x* is infeasible.
  ProblemSpec(Field field, Domain domain, Point solution);

  const Field& field() const { return field_; }
  const Domain& domain() const { return domain_; }
  const Point& solution() const { return solution_; }
  std::size_t dimension() const { return domain_.dimension(); }

  /// Lipschitz constant in the domain norm pair.
  double lipschitz() const { return lipschitz_; }
  /// Second-order sufficiency constant.
  double sos() const { return sos_; }
  /// Radius of the neighbourhood where the SOS bound holds. Affine fields hold it globally.
  double sos_radius() const;

  std::string key() const;

 private:
  Field field_;
  Domain domain_;
  Point solution_;
  double lipschitz_ = 0.0;
  double sos_ = 0.0;
};

Dual eval_field(const ProblemSpec& p, const Point& x);

/// Gaussian noise with E|U|^2 = sigma2 (variance sigma2 / d per coordinate).
/// sigma2 == 0 is the exact oracle.
struct OracleSpec {
  double sigma2 = 0.0;
  std::uint64_t seed = 0;

  bool noisy() const { return sigma2 > 0.0; }
};

struct OracleSample {
  Dual signal;
  Dual noise;
};

/// V(x) + U with U a pure function of (seed, step, coordinate).
OracleSample query_oracle(const ProblemSpec& p, const OracleSpec& o, const Point& x, StepIndex step);

struct ConstantsReport {
  double observed_lipschitz = 0.0;
  double observed_sos = 0.0;
  double worst_vi_residual = 0.0;
  std::size_t samples = 0;
  bool pass = false;
};

/// Samples pairs in the domain near x* and reports the worst ratios. Fails if
/// either constant is violated by more than 1e-9. Requires samples >= 1000.
ConstantsReport verify_constants(const ProblemSpec& p, std::size_t samples, std::uint64_t seed = 1);

/// Problem registry key: name[:params][@domain], e.g. "linear1d:lambda=1",
/// "bilinear:a=1,mu=0.5", "affine:a=1|2,xstar=0.2|0.8@simplex:d=2".
ProblemSpec parse_problem(std::string_view key);

}  // namespace lomd
