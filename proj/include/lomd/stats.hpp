#pragma once

#include <cstddef>
#include <span>

namespace lomd {

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  double slope_stderr = 0.0;
  std::size_t points = 0;
};

/// Ordinary least squares of y on x. Throws InsufficientData for fewer than
/// two points or zero spread in x.
LinearFit ols(std::span<const double> x, std::span<const double> y);

}  // namespace lomd
