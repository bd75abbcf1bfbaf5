#include "lomd/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "lomd/error.hpp"

namespace lomd {

namespace {

template <class... F>
struct Overloaded : F... {
  using F::operator()...;
};
template <class... F>
Overloaded(F...) -> Overloaded<F...>;

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kBisectEps = 1e-15;
constexpr double kBisectTol = 1e-12;
constexpr int kBisectMaxIter = 200;
constexpr double kLogSpaceThreshold = 500.0;

bool is_one_dim_kind(const Domain& d, DomainKind k) { return d.kind() == k; }

// p log(p/x) - p + x without cancellation; 0 log 0 = 0.
double kl_term(double p, double x) {
  if (p <= 0.0) return x;
  const double u = (x - p) / p;
  if (std::abs(u) > 0.5) return p * std::log(p / x) - p + x;
  return p * (u - std::log1p(u));
}

double xlogx(double x) { return x <= 0.0 ? 0.0 : x * std::log(x); }

double floor_state(double v) { return std::max(v, kStateFloor); }

void require_finite(const Point& out, const char* what) {
  for (double v : out)
    if (!std::isfinite(v)) throw NumericalError(fmt::format("{} prox produced a non-finite state", what));
}

double tsallis_interval_grad(double q, double u) {
  return (std::pow(u, q - 1.0) - std::pow(1.0 - u, q - 1.0)) / (q - 1.0);
}

double tsallis_interval_prox(double q, double x, double y) {
  const double z = tsallis_interval_grad(q, x) + y;
  double lo = kBisectEps;
  double hi = 1.0 - kBisectEps;
  if (q > 1.0) {
    if (z <= tsallis_interval_grad(q, 0.0)) return 0.0;
    if (z >= tsallis_interval_grad(q, 1.0)) return 1.0;
    lo = 0.0;
    hi = 1.0;
  } else if (tsallis_interval_grad(q, lo) - z > 0.0 || tsallis_interval_grad(q, hi) - z < 0.0) {
    throw NumericalError(fmt::format("tsallis prox: root outside [{}, 1-{}] for y={}", kBisectEps,
                                     kBisectEps, y));
  }
  // The gradient is steep near both endpoints, so the width test is relative
  // to the distance from the nearer one.
  for (int it = 0; it < kBisectMaxIter; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) return mid;
    const double r = tsallis_interval_grad(q, mid) - z;
    if (std::abs(r) <= kBisectTol * (1.0 + std::abs(z)) ||
        hi - lo <= kBisectTol * std::min(mid, 1.0 - mid))
      return mid;
    (r > 0.0 ? hi : lo) = mid;
  }
  throw NumericalError("tsallis prox: bisection did not converge");
}

}  // namespace

GeometrySpec::GeometrySpec(Regularizer reg, Domain domain) : reg_(reg), domain_(domain) {
  if (auto* t = std::get_if<Tsallis>(&reg_); t && t->q == 1.0) reg_ = NegEntropy{};
  const DomainKind k = domain_.kind();
  const auto reject = [&](const std::string& name) {
    throw ConfigError(fmt::format("{} is not supported on the {}", name, domain_.describe()));
  };
  std::visit(Overloaded{
                 [&](const Euclidean&) {
                   if (k == DomainKind::Simplex) reject("euclidean");
                 },
                 [&](const NegEntropy&) {
                   if (k != DomainKind::HalfLine && k != DomainKind::UnitInterval &&
                       k != DomainKind::Simplex)
                     reject("entropy");
                 },
                 [&](const Tsallis& t) {
                   if (!(t.q > 0.0)) throw ConfigError("tsallis requires q > 0");
                   if (k == DomainKind::HalfLine) {
                     if (t.q > 2.0) throw ConfigError("tsallis on the half-line requires q <= 2");
                   } else if (k == DomainKind::UnitInterval) {
                     if (t.q > 3.0) throw ConfigError("tsallis on the unit interval requires q <= 3");
                   } else {
                     reject("tsallis");
                   }
                 },
                 [&](const FractionalPower& f) {
                   if (!(f.p > 0.0 && f.p < 1.0)) throw ConfigError("fracpow requires p in (0, 1)");
                   if (k != DomainKind::HalfLine) reject("fracpow");
                 },
                 [&](const SquareRoot&) {
                   if (k != DomainKind::HalfLine) reject("sqrt");
                 },
                 [&](const Hellinger&) {
                   if (k != DomainKind::UnitBall) reject("hellinger");
                 },
             },
             reg_);
}

bool GeometrySpec::in_prox_domain(const Point& x) const {
  if (!domain_.contains(x)) return false;
  const bool interval = is_one_dim_kind(domain_, DomainKind::UnitInterval);
  return std::visit(Overloaded{
                        [&](const Euclidean&) { return true; },
                        [&](const NegEntropy&) {
                          for (double v : x)
                            if (!(v > 0.0)) return false;
                          return !interval || x[0] < 1.0;
                        },
                        [&](const Tsallis& t) {
                          if (t.q > 1.0) return true;
                          return x[0] > 0.0 && (!interval || x[0] < 1.0);
                        },
                        [&](const FractionalPower&) { return x[0] > 0.0; },
                        [&](const SquareRoot&) { return x[0] > 0.0; },
                        [&](const Hellinger&) { return l2_norm(x.span()) < 1.0; },
                    },
                    reg_);
}

double GeometrySpec::strong_convexity_bound() const {
  if (domain_.kind() != DomainKind::HalfLine) return kInf;
  return std::visit(Overloaded{
                        [](const Euclidean&) { return kInf; },
                        [](const NegEntropy&) { return 1.0; },
                        [](const Tsallis& t) { return t.q < 2.0 ? 1.0 : kInf; },
                        [](const FractionalPower& f) { return std::pow(f.p, 1.0 / (2.0 - f.p)); },
                        [](const SquareRoot&) { return std::pow(2.0, -2.0 / 3.0); },
                        [](const Hellinger&) { return kInf; },
                    },
                    reg_);
}

std::string GeometrySpec::key() const {
  const std::string base = std::visit(
      Overloaded{
          [](const Euclidean&) -> std::string { return "euclidean"; },
          [](const NegEntropy&) -> std::string { return "entropy"; },
          [](const Tsallis& t) { return fmt::format("tsallis:q={}", t.q); },
          [](const FractionalPower& f) { return fmt::format("fracpow:p={}", f.p); },
          [](const SquareRoot&) -> std::string { return "sqrt"; },
          [](const Hellinger&) -> std::string { return "hellinger"; },
      },
      reg_);
  std::string dom;
  switch (domain_.kind()) {
    case DomainKind::HalfLine:
      dom = "halfline";
      break;
    case DomainKind::UnitInterval:
      dom = "interval";
      break;
    case DomainKind::Simplex:
      dom = fmt::format("simplex:d={}", domain_.dimension());
      break;
    case DomainKind::UnitBall:
      dom = fmt::format("ball:d={}", domain_.dimension());
      break;
    case DomainKind::FullSpace:
      dom = fmt::format("full:d={}", domain_.dimension());
      break;
  }
  return base + "@" + dom;
}

std::string GeometrySpec::name() const {
  return std::visit(
      Overloaded{
          [](const Euclidean&) -> std::string { return "Euclidean"; },
          [](const NegEntropy&) -> std::string { return "Entropy"; },
          [](const Tsallis& t) { return fmt::format("Tsallis (q={})", t.q); },
          [](const FractionalPower& f) { return fmt::format("Fractional power (p={})", f.p); },
          [](const SquareRoot&) -> std::string { return "Square root"; },
          [](const Hellinger&) -> std::string { return "Hellinger"; },
      },
      reg_);
}

double eval_h(const GeometrySpec& g, const Point& x) {
  g.domain().require(x, "eval_h argument");
  const bool interval = g.domain().kind() == DomainKind::UnitInterval;
  return std::visit(
      Overloaded{
          [&](const Euclidean&) {
            const double n = l2_norm(x.span());
            return 0.5 * n * n;
          },
          [&](const NegEntropy&) {
            if (interval) return xlogx(x[0]) + xlogx(1.0 - x[0]);
            double s = 0.0;
            for (double v : x) s += xlogx(v);
            return s;
          },
          [&](const Tsallis& t) {
            const double u = std::max(x[0], 0.0);
            const double scale = t.q * (1.0 - t.q);
            if (interval) return -(std::pow(u, t.q) + std::pow(std::max(1.0 - u, 0.0), t.q)) / scale;
            return -std::pow(u, t.q) / scale;
          },
          [&](const FractionalPower& f) {
            const double u = std::max(x[0], 0.0);
            return (f.p * u - std::pow(u, f.p)) / (1.0 - f.p);
          },
          [&](const SquareRoot&) {
            const double u = std::max(x[0], 0.0);
            return u - 2.0 * std::sqrt(u);
          },
          [&](const Hellinger&) {
            const double n = l2_norm(x.span());
            return -std::sqrt(std::max(1.0 - n * n, 0.0));
          },
      },
      g.regularizer());
}

Dual grad_h(const GeometrySpec& g, const Point& x) {
  if (!g.in_prox_domain(x))
    throw ProxDomainError(fmt::format("{}: point has no gradient on {}", g.name(), g.domain().describe()));
  const bool interval = g.domain().kind() == DomainKind::UnitInterval;
  Dual out(x.size());
  std::visit(Overloaded{
                 [&](const Euclidean&) { out = as_dual(x); },
                 [&](const NegEntropy&) {
                   if (interval) {
                     out[0] = std::log(x[0]) - std::log1p(-x[0]);
                   } else {
                     for (std::size_t i = 0; i < x.size(); ++i) out[i] = 1.0 + std::log(x[i]);
                   }
                 },
                 [&](const Tsallis& t) {
                   const double u = std::max(x[0], 0.0);
                   out[0] = interval ? tsallis_interval_grad(t.q, u)
                                     : std::pow(u, t.q - 1.0) / (t.q - 1.0);
                 },
                 [&](const FractionalPower& f) {
                   out[0] = f.p / (1.0 - f.p) * (1.0 - std::pow(x[0], f.p - 1.0));
                 },
                 [&](const SquareRoot&) { out[0] = 1.0 - 1.0 / std::sqrt(x[0]); },
                 [&](const Hellinger&) {
                   const double n = l2_norm(x.span());
                   const double s = std::sqrt(1.0 - n * n);
                   for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] / s;
                 },
             },
             g.regularizer());
  return out;
}

double divergence(const GeometrySpec& g, const Point& p, const Point& x) {
  g.domain().require(p, "divergence base point");
  if (!g.in_prox_domain(x))
    throw ProxDomainError(fmt::format("{}: divergence second argument outside the prox-domain", g.name()));
  if (std::holds_alternative<Euclidean>(g.regularizer())) {
    const double n = l2_norm((p - x).span());
    return 0.5 * n * n;
  }
  if (std::holds_alternative<NegEntropy>(g.regularizer())) {
    if (g.domain().kind() == DomainKind::UnitInterval)
      return kl_term(std::max(p[0], 0.0), x[0]) + kl_term(std::max(1.0 - p[0], 0.0), 1.0 - x[0]);
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) s += kl_term(std::max(p[i], 0.0), x[i]);
    return s;
  }
  const Dual grad = grad_h(g, x);
  const double d = eval_h(g, p) - eval_h(g, x) - pairing(grad, p - x);
  return std::max(d, 0.0);
}

Point prox(const GeometrySpec& g, const Point& x, const Dual& y) {
  if (!g.in_prox_domain(x))
    throw ProxDomainError(fmt::format("{}: prox base point outside the prox-domain", g.name()));
  for (double v : y)
    if (!std::isfinite(v)) throw NumericalError("prox called with a non-finite dual vector");
  const DomainKind kind = g.domain().kind();
  Point out = x;
  std::visit(
      Overloaded{
          [&](const Euclidean&) { out = g.domain().project(x + as_point(y)); },
          [&](const NegEntropy&) {
            if (kind == DomainKind::HalfLine) {
              const double v = std::abs(y[0]) > kLogSpaceThreshold ? std::exp(std::log(x[0]) + y[0])
                                                                   : x[0] * std::exp(y[0]);
              out[0] = floor_state(v);
            } else if (kind == DomainKind::UnitInterval) {
              const double l = std::log(x[0]) - std::log1p(-x[0]) + y[0];
              double v;
              if (l >= 0.0) {
                v = 1.0 / (1.0 + std::exp(-l));
              } else {
                const double e = std::exp(l);
                v = e / (1.0 + e);
              }
              out[0] = std::clamp(v, kStateFloor, std::nextafter(1.0, 0.0));
            } else {
              double m = -kInf;
              for (std::size_t i = 0; i < x.size(); ++i) {
                out[i] = std::log(x[i]) + y[i];
                m = std::max(m, out[i]);
              }
              double total = 0.0;
              for (double& v : out) {
                v = std::exp(v - m);
                total += v;
              }
              for (double& v : out) v = floor_state(v / total);
            }
          },
          [&](const Tsallis& t) {
            if (kind == DomainKind::UnitInterval) {
              out[0] = tsallis_interval_prox(t.q, x[0], y[0]);
              return;
            }
            const double rhs = std::pow(x[0], t.q - 1.0) + (t.q - 1.0) * y[0];
            if (t.q > 1.0) {
              out[0] = rhs <= 0.0 ? 0.0 : std::pow(rhs, 1.0 / (t.q - 1.0));
            } else {
              if (!(rhs > 0.0))
                throw NumericalError(fmt::format("tsallis prox unbounded for x={}, y={}", x[0], y[0]));
              out[0] = floor_state(std::pow(rhs, 1.0 / (t.q - 1.0)));
            }
          },
          [&](const FractionalPower& f) {
            const double w = std::pow(x[0], f.p - 1.0) - (1.0 - f.p) / f.p * y[0];
            if (!(w > 0.0))
              throw NumericalError(fmt::format("fracpow prox unbounded for x={}, y={}", x[0], y[0]));
            out[0] = floor_state(std::pow(w, 1.0 / (f.p - 1.0)));
          },
          [&](const SquareRoot&) {
            const double w = 1.0 / std::sqrt(x[0]) - y[0];
            if (!(w > 0.0))
              throw NumericalError(fmt::format("sqrt prox unbounded for x={}, y={}", x[0], y[0]));
            out[0] = floor_state(1.0 / (w * w));
          },
          [&](const Hellinger&) {
            Dual z = grad_h(g, x) + y;
            const double s = std::hypot(1.0, l2_norm(z.span()));
            for (std::size_t i = 0; i < z.size(); ++i) out[i] = z[i] / s;
            // Keep the output strictly inside the open ball.
            const double r = l2_norm(out.span());
            if (r >= 1.0) out *= std::nextafter(1.0, 0.0) / r;
          },
      },
      g.regularizer());
  require_finite(out, g.name().c_str());
  return out;
}

}  // namespace lomd
