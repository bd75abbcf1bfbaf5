#pragma once

#include <string>
#include <string_view>
#include <variant>

#include "lomd/domain.hpp"
#include "lomd/vector.hpp"

namespace lomd {

/// h(x) = |x|^2 / 2.
struct Euclidean {};
/// Sum of x log x terms; on [0,1] the binary entropy x log x + (1-x) log(1-x).
struct NegEntropy {};
/// On [0, inf): -x^q / (q(1-q)), so D(0, x) = x^q / q.
/// On [0, 1]:   -(x^q + (1-x)^q) / (q(1-q)).
struct Tsallis {
  double q;
};
/// h(x) = (p x - x^p) / (1 - p) on [0, inf), p in (0, 1).
struct FractionalPower {
  double p;
};
/// h(x) = x - 2 sqrt(x) on [0, inf).
struct SquareRoot {};
/// h(x) = -sqrt(1 - |x|^2) on the closed unit ball.
struct Hellinger {};

using Regularizer =
    std::variant<Euclidean, NegEntropy, Tsallis, FractionalPower, SquareRoot, Hellinger>;

/// A distance-generating function bound to its domain. Immutable; every
/// operation is a pure function of its arguments.
class GeometrySpec {
 public:
  /// Throws ConfigError for unsupported (regularizer, domain) pairs or
  /// parameters. Tsallis with q == 1 is stored as NegEntropy.
  GeometrySpec(Regularizer reg, Domain domain);

  const Regularizer& regularizer() const { return reg_; }
  const Domain& domain() const { return domain_; }
  std::size_t dimension() const { return domain_.dimension(); }

  /// Membership in dom(subdifferential of h).
  bool in_prox_domain(const Point& x) const;

  /// On one-dimensional domains, h is 1-strongly convex on
  /// dom h intersected with (-inf, bound]. Infinity when strong convexity is global.
  double strong_convexity_bound() const;

  /// Canonical registry key, e.g. "tsallis:q=0.5@halfline".
  std::string key() const;
  /// Short human name, e.g. "Tsallis (q=0.5)".
  std::string name() const;

 private:
  Regularizer reg_;
  Domain domain_;
};

/// Values below this are floored in steep prox outputs.
inline constexpr double kStateFloor = 1e-300;

double eval_h(const GeometrySpec& g, const Point& x);
Dual grad_h(const GeometrySpec& g, const Point& x);
double divergence(const GeometrySpec& g, const Point& p, const Point& x);
Point prox(const GeometrySpec& g, const Point& x, const Dual& y);

/// Parses a geometry registry key: name[:params][@domain]. Default domain is
/// the half-line, except Hellinger (unit ball of dimension 1).
GeometrySpec parse_geometry(std::string_view key);

}  // namespace lomd
