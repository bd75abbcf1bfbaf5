#pragma once

#include <span>
#include <string>
#include <vector>

#include "lomd/geometry.hpp"

namespace lomd {

/// D(p, x) <= C/2 |p - x|^(2(1 - beta)) for |x - p| <= radius.
/// beta == 1 means reciprocity fails at p; C is then NaN.
struct LegendreExponent {
  double beta = 0.0;
  double constant = 0.0;
  double radius = 0.0;

  bool has_constant() const { return beta < 1.0; }
};

/// Analytic exponent at p. Interior points of a twice-differentiable h get
/// beta = 0 with C from a Hessian bound over a ball reaching halfway to the boundary.
LegendreExponent legendre_exponent(const GeometrySpec& g, const Point& p);

/// Fits log max_{|x-p| = r} D(p, x) against log r and returns 1 - slope/2,
/// clipped to [0, 1]. Radii must be positive and decreasing; at least 8 must
/// produce a sample in the prox-domain.
double estimate_legendre_exponent(const GeometrySpec& g, const Point& p,
                                  std::span<const double> radii);

/// 2^-4, 2^-5, ..., 2^-16.
std::vector<double> default_radii();

struct LegendreCase {
  std::string label;
  GeometrySpec geometry;
  Point base;
};

/// Geometry and base point pairs with known exponents.
std::vector<LegendreCase> legendre_registry();

/// Points on the sphere of radius r around p, in the domain norm, that lie
/// in the prox-domain.
std::vector<Point> sphere_samples(const GeometrySpec& g, const Point& p, double r);

}  // namespace lomd
