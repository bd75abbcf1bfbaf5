#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "lomd/domain.hpp"
#include "lomd/geometry.hpp"
#include "lomd/vector.hpp"

namespace lomd::test {

/// Seeded generators for property tests.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  double normal() { return std::normal_distribution<double>()(rng_); }
  /// Log-uniform in [lo, hi], useful for points near a boundary.
  double log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }
  std::size_t index(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }

  /// A member of dom h, with some mass near the boundary.
  Point in_domain(const Domain& d, bool boundary_allowed) {
    const double floor = boundary_allowed ? 0.0 : 1e-9;
    switch (d.kind()) {
      case DomainKind::HalfLine:
        return Point{boundary_allowed && index(10) == 0 ? 0.0 : log_uniform(std::max(floor, 1e-8), 10.0)};
      case DomainKind::UnitInterval: {
        if (boundary_allowed && index(10) == 0) return Point{index(2) ? 1.0 : 0.0};
        const double u = log_uniform(1e-8, 0.5);
        return Point{index(2) ? u : 1.0 - u};
      }
      case DomainKind::Simplex: {
        Point x(d.dimension());
        double s = 0.0;
        for (double& v : x) {
          v = -std::log(uniform(1e-12, 1.0)) + floor;
          s += v;
        }
        x *= 1.0 / s;
        if (boundary_allowed && index(5) == 0) {
          x[index(x.size())] = 0.0;
          double t = 0.0;
          for (double v : x) t += v;
          x *= 1.0 / t;
        }
        return x;
      }
      case DomainKind::UnitBall: {
        Point x(d.dimension());
        for (double& v : x) v = normal();
        const double n = l2_norm(x.span());
        const double radius = boundary_allowed && index(10) == 0 ? 1.0 : 1.0 - log_uniform(1e-6, 1.0) * 0.999;
        x *= radius / n;
        return x;
      }
      case DomainKind::FullSpace: {
        Point x(d.dimension());
        for (double& v : x) v = 3.0 * normal();
        return x;
      }
    }
    return Point{};
  }

  /// A point in the prox-domain of g.
  Point in_prox_domain(const GeometrySpec& g) {
    for (;;) {
      Point x = in_domain(g.domain(), false);
      if (g.in_prox_domain(x)) return x;
    }
  }

  Dual dual(std::size_t d, double scale) {
    Dual y(d);
    for (double& v : y) v = scale * normal();
    return y;
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

}  // namespace lomd::test
