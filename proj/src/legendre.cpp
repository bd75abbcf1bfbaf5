#include "lomd/legendre.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <fmt/format.h>

#include "lomd/error.hpp"
#include "lomd/stats.hpp"

namespace lomd {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr int kBallAngles = 64;

bool at_zero(double v) { return std::abs(v) <= Domain::kTolerance; }

LegendreExponent interior(double hessian_bound, double radius) {
  return {0.0, hessian_bound, radius};
}

LegendreExponent half_line(const GeometrySpec& g, double p) {
  const double r = p / 2.0;
  const double lo = p - r;
  if (const auto* t = std::get_if<Tsallis>(&g.regularizer())) {
    if (at_zero(p)) {
      if (t->q >= 2.0) return {0.0, 1.0, kInf};
      return {1.0 - t->q / 2.0, 2.0 / t->q, kInf};
    }
    return interior(t->q < 2.0 ? std::pow(lo, t->q - 2.0) : 1.0, r);
  }
  if (std::holds_alternative<NegEntropy>(g.regularizer())) {
    if (at_zero(p)) return {0.5, 2.0, kInf};
    return interior(1.0 / lo, r);
  }
  if (const auto* f = std::get_if<FractionalPower>(&g.regularizer())) {
    if (at_zero(p)) return {1.0 - f->p / 2.0, 2.0, kInf};
    return interior(f->p * std::pow(lo, f->p - 2.0), r);
  }
  if (at_zero(p)) return {0.75, 2.0, kInf};  // square root: D(0, x) = sqrt(x)
  return interior(0.5 * std::pow(lo, -1.5), r);
}

LegendreExponent unit_interval(const GeometrySpec& g, double p) {
  const bool boundary = at_zero(p) || at_zero(1.0 - p);
  const double r = std::min(p, 1.0 - p) / 2.0;
  const double lo = std::min(p, 1.0 - p) - r;
  if (std::holds_alternative<NegEntropy>(g.regularizer())) {
    if (boundary) return {0.5, 4.0, 0.5};
    return interior(1.0 / lo + 1.0 / (1.0 - lo), r);
  }
  const double q = std::get<Tsallis>(g.regularizer()).q;
  if (boundary) {
    if (q >= 2.0) return {0.0, 2.0, 0.5};
    return {1.0 - q / 2.0, 2.0 / q + 1.0, 0.5};
  }
  if (q >= 2.0) return interior(2.0, r);
  return interior(std::pow(lo, q - 2.0) + std::pow(1.0 - lo, q - 2.0), r);
}

LegendreExponent simplex(const Point& p) {
  double p_min = kInf;
  bool boundary = false;
  for (double v : p) {
    if (at_zero(v))
      boundary = true;
    else
      p_min = std::min(p_min, v);
  }
  const double r = p_min / 2.0;
  if (boundary) return {0.5, 2.0 * (1.0 + 2.0 * r / p_min), r};
  return {0.0, 4.0 / p_min, r};
}

LegendreExponent hellinger(const Point& p) {
  const double n = l2_norm(p.span());
  if (at_zero(1.0 - n) || n > 1.0) return {1.0, kNaN, 1.0};
  const double r = (1.0 - n) / 2.0;
  const double s = std::sqrt(1.0 - (n + r) * (n + r));
  return interior(1.0 / (s * s * s), r);
}

}  // namespace

LegendreExponent legendre_exponent(const GeometrySpec& g, const Point& p) {
  g.domain().require(p, "legendre base point");
  if (std::holds_alternative<Euclidean>(g.regularizer())) return {0.0, 1.0, kInf};
  switch (g.domain().kind()) {
    case DomainKind::HalfLine:
      return half_line(g, std::max(p[0], 0.0));
    case DomainKind::UnitInterval:
      return unit_interval(g, std::clamp(p[0], 0.0, 1.0));
    case DomainKind::Simplex:
      return simplex(p);
    case DomainKind::UnitBall:
      return hellinger(p);
    case DomainKind::FullSpace:
      break;
  }
  return {0.0, 1.0, kInf};
}

std::vector<Point> sphere_samples(const GeometrySpec& g, const Point& p, double r) {
  std::vector<Point> out;
  const auto keep = [&](Point x) {
    if (g.in_prox_domain(x)) out.push_back(std::move(x));
  };
  const std::size_t d = p.size();
  if (d == 1) {
    keep(Point{p[0] - r});
    keep(Point{p[0] + r});
  } else if (g.domain().kind() == DomainKind::Simplex) {
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) {
        if (i == j) continue;
        Point x = p;
        x[i] += r / 2.0;
        x[j] -= r / 2.0;
        keep(std::move(x));
      }
  } else {
    for (std::size_t i = 0; i < d; ++i) {
      Point x = p;
      x[i] += r;
      keep(x);
      x[i] -= 2.0 * r;
      keep(std::move(x));
    }
    for (int k = 0; k < kBallAngles; ++k) {
      const double a = 2.0 * std::numbers::pi * k / kBallAngles;
      Point x = p;
      x[0] += r * std::cos(a);
      x[1] += r * std::sin(a);
      keep(std::move(x));
    }
  }
  return out;
}

double estimate_legendre_exponent(const GeometrySpec& g, const Point& p,
                                  std::span<const double> radii) {
  g.domain().require(p, "legendre base point");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] > 0.0)) throw ConfigError("legendre radii must be positive");
    if (i > 0 && !(radii[i] < radii[i - 1])) throw ConfigError("legendre radii must be decreasing");
  }
  std::vector<double> lr, ld;
  for (double r : radii) {
    double worst = 0.0;
    for (const Point& x : sphere_samples(g, p, r)) worst = std::max(worst, divergence(g, p, x));
    if (!(worst > 0.0)) continue;
    lr.push_back(std::log(r));
    ld.push_back(std::log(worst));
  }
  if (lr.size() < 8)
    throw InsufficientData(fmt::format("legendre estimator: {} usable radii, need 8", lr.size()));
  const LinearFit fit = ols(lr, ld);
  return std::clamp(1.0 - fit.slope / 2.0, 0.0, 1.0);
}

std::vector<double> default_radii() {
  std::vector<double> r;
  for (int k = 4; k <= 16; ++k) r.push_back(std::ldexp(1.0, -k));
  return r;
}

std::vector<LegendreCase> legendre_registry() {
  const Domain hl = Domain::half_line();
  const Domain iv = Domain::unit_interval();
  return {
      {"euclidean, boundary", GeometrySpec(Euclidean{}, hl), Point{0.0}},
      {"euclidean, R^2", GeometrySpec(Euclidean{}, Domain::full_space(2)), Point{0.3, -0.2}},
      {"entropy half-line, boundary", GeometrySpec(NegEntropy{}, hl), Point{0.0}},
      {"entropy half-line, interior", GeometrySpec(NegEntropy{}, hl), Point{0.5}},
      {"entropy interval, left boundary", GeometrySpec(NegEntropy{}, iv), Point{0.0}},
      {"entropy interval, right boundary", GeometrySpec(NegEntropy{}, iv), Point{1.0}},
      {"entropy interval, interior", GeometrySpec(NegEntropy{}, iv), Point{0.5}},
      {"tsallis q=0.5, boundary", GeometrySpec(Tsallis{0.5}, hl), Point{0.0}},
      {"tsallis q=1.5, boundary", GeometrySpec(Tsallis{1.5}, hl), Point{0.0}},
      {"tsallis q=0.5, interior", GeometrySpec(Tsallis{0.5}, hl), Point{0.4}},
      {"tsallis q=0.5 interval, boundary", GeometrySpec(Tsallis{0.5}, iv), Point{0.0}},
      {"tsallis q=1.5 interval, boundary", GeometrySpec(Tsallis{1.5}, iv), Point{1.0}},
      {"fracpow p=0.5, boundary", GeometrySpec(FractionalPower{0.5}, hl), Point{0.0}},
      {"sqrt, boundary", GeometrySpec(SquareRoot{}, hl), Point{0.0}},
      {"entropy simplex, boundary", GeometrySpec(NegEntropy{}, Domain::simplex(3)), Point{0.5, 0.5, 0.0}},
      {"entropy simplex, interior", GeometrySpec(NegEntropy{}, Domain::simplex(3)),
       Point{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}},
      {"hellinger, interior", GeometrySpec(Hellinger{}, Domain::unit_ball(2)), Point{0.0, 0.3}},
      {"hellinger, boundary", GeometrySpec(Hellinger{}, Domain::unit_ball(2)), Point{1.0, 0.0}},
  };
}

}  // namespace lomd
