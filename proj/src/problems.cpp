#include "lomd/problems.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "lomd/error.hpp"

namespace lomd {

namespace {

constexpr double kConstantSlack = 1e-9;

std::string join(const Point& x) {
  return fmt::format("{}", fmt::join(x.begin(), x.end(), "|"));
}

// Draw a feasible point: x* plus a uniform box perturbation, projected.
Point sample_point(const ProblemSpec& p, const NoiseStream& rng, std::uint64_t index) {
  const Domain& dom = p.domain();
  const std::size_t d = dom.dimension();
  Point x(d);
  if (dom.kind() == DomainKind::Simplex) {
    double total = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      x[i] = -std::log(rng.uniform(StepIndex::integer(index), static_cast<std::uint32_t>(i)));
      total += x[i];
    }
    x *= 1.0 / total;
    return x;
  }
  for (std::size_t i = 0; i < d; ++i)
    x[i] = p.solution()[i] + 2.0 * rng.uniform(StepIndex::integer(index), static_cast<std::uint32_t>(i)) - 1.0;
  return dom.project(x);
}

}  // namespace

ProblemSpec::ProblemSpec(Field field, Domain domain, Point solution)
    : field_(std::move(field)), domain_(domain), solution_(std::move(solution)) {
  const std::size_t d = domain_.dimension();
  if (solution_.size() != d) throw ConfigError("problem solution dimension does not match the domain");
  domain_.require(solution_, "problem solution");
  if (const auto* f = std::get_if<Linear1D>(&field_)) {
    if (d != 1) throw ConfigError("linear1d requires a one-dimensional domain");
    if (!(f->lambda > 0.0)) throw ConfigError("linear1d requires lambda > 0");
    lipschitz_ = sos_ = f->lambda;
  } else if (const auto* f = std::get_if<AffineDiag>(&field_)) {
    if (f->a.size() != d) throw ConfigError("affine coefficient count does not match the domain");
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (double v : f->a) {
      if (!(v > 0.0)) throw ConfigError("affine coefficients must be positive");
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    lipschitz_ = hi;
    // |.|_1^2 <= d |.|_2^2 on the simplex.
    sos_ = domain_.kind() == DomainKind::Simplex ? lo / static_cast<double>(d) : lo;
  } else {
    const auto& b = std::get<BilinearSaddle>(field_);
    if (d != 2) throw ConfigError("bilinear requires a two-dimensional domain");
    if (domain_.kind() == DomainKind::Simplex) throw ConfigError("bilinear is not supported on the simplex");
    if (!(b.mu >= 0.0) || !std::isfinite(b.a)) throw ConfigError("bilinear requires mu >= 0");
    lipschitz_ = std::hypot(b.a, b.mu);
    sos_ = b.mu;
  }
}

double ProblemSpec::sos_radius() const { return std::numeric_limits<double>::infinity(); }

std::string ProblemSpec::key() const {
  std::string base;
  if (const auto* f = std::get_if<Linear1D>(&field_))
    base = fmt::format("linear1d:lambda={},xstar={}", f->lambda, join(solution_));
  else if (const auto* f = std::get_if<AffineDiag>(&field_))
    base = fmt::format("affine:a={},xstar={}", join(f->a), join(solution_));
  else {
    const auto& b = std::get<BilinearSaddle>(field_);
    base = fmt::format("bilinear:a={},mu={},xstar={}", b.a, b.mu, join(solution_));
  }
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

Dual eval_field(const ProblemSpec& p, const Point& x) {
  p.domain().require(x, "field argument");
  const Point& s = p.solution();
  Dual v(x.size());
  if (const auto* f = std::get_if<Linear1D>(&p.field())) {
    v[0] = f->lambda * (x[0] - s[0]);
  } else if (const auto* f = std::get_if<AffineDiag>(&p.field())) {
    for (std::size_t i = 0; i < x.size(); ++i) v[i] = f->a[i] * (x[i] - s[i]);
  } else {
    const auto& b = std::get<BilinearSaddle>(p.field());
    v[0] = b.a * (x[1] - s[1]) + b.mu * (x[0] - s[0]);
    v[1] = -b.a * (x[0] - s[0]) + b.mu * (x[1] - s[1]);
  }
  return v;
}

OracleSample query_oracle(const ProblemSpec& p, const OracleSpec& o, const Point& x, StepIndex step) {
  OracleSample out{eval_field(p, x), Dual(x.size())};
  if (o.noisy()) {
    const NoiseStream rng(o.seed);
    const double scale = std::sqrt(o.sigma2 / static_cast<double>(x.size()));
    for (std::size_t i = 0; i < x.size(); ++i)
      out.noise[i] = scale * rng.standard_normal(step, static_cast<std::uint32_t>(i));
    out.signal += out.noise;
  }
  return out;
}

ConstantsReport verify_constants(const ProblemSpec& p, std::size_t samples, std::uint64_t seed) {
  if (samples < 1000) throw ConfigError("verify_constants needs at least 1000 samples");
  const NoiseStream rng(seed);
  const Domain& dom = p.domain();
  const Point& s = p.solution();
  const Dual at_solution = eval_field(p, s);
  ConstantsReport rep;
  rep.samples = samples;
  rep.observed_sos = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < samples; ++k) {
    const Point x = sample_point(p, rng, 2 * k);
    const Point y = sample_point(p, rng, 2 * k + 1);
    const double dxy = dom.norm(y - x);
    if (dxy > 0.0)
      rep.observed_lipschitz =
          std::max(rep.observed_lipschitz, dom.dual_norm(eval_field(p, y) - eval_field(p, x)) / dxy);
    const double dxs = dom.norm(x - s);
    if (dxs > 0.0 && dxs <= p.sos_radius())
      rep.observed_sos = std::min(rep.observed_sos, pairing(eval_field(p, x), x - s) / (dxs * dxs));
    rep.worst_vi_residual = std::min(rep.worst_vi_residual, pairing(at_solution, x - s));
  }
  rep.pass = rep.observed_lipschitz <= p.lipschitz() + kConstantSlack &&
             rep.observed_sos >= p.sos() - kConstantSlack && rep.worst_vi_residual >= -kConstantSlack;
  return rep;
}

}  // namespace lomd
