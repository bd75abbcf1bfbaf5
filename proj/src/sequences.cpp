#include "lomd/sequences.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "lomd/error.hpp"
#include "lomd/rng.hpp"

namespace lomd {

namespace {

constexpr double kHypothesisSlack = 1e-12;

const char* mode_name(RecursionMode m) {
  switch (m) {
    case RecursionMode::Linear:
      return "linear";
    case RecursionMode::Power:
      return "power";
    case RecursionMode::PureDecay:
      return "pure-decay";
  }
  return "?";
}

void require(bool ok, LemmaId id, const std::string& what) {
  if (!ok) throw PreconditionError(fmt::format("{}: hypothesis violated: {}", lemma_name(id), what));
}

double offset(const RecursionSpec& s, std::uint64_t t) { return static_cast<double>(t) + s.t0; }

double step(const RecursionSpec& s, std::uint64_t t) { return s.q / std::pow(offset(s, t), s.eta); }

double polyak(double a1, double alpha, double gamma_sum) {
  if (a1 <= 0.0) return 0.0;
  return a1 / std::pow(1.0 + alpha * std::pow(a1, alpha) * gamma_sum, 1.0 / alpha);
}

// Bound for the linear recursions: an envelope B_t until the contraction
// regime starts at t*, then C / s^eta.
std::vector<double> chung_curve(const RecursionSpec& s, std::uint64_t T, bool unit_exponent) {
  const auto contracting = [&](double sv) {
    if (unit_exponent) return sv >= s.q;
    return std::pow(sv, s.eta) >= s.q && s.eta * std::pow(sv, s.eta - 1.0) <= s.q / 2.0;
  };
  const double floor_c = unit_exponent ? s.q_prime / (s.q - 1.0) : 2.0 * s.q_prime / s.q;
  std::vector<double> out(T);
  double envelope = s.a1;
  double c = -1.0;
  for (std::uint64_t t = 1; t <= T; ++t) {
    const double sv = offset(s, t);
    const double pw = std::pow(sv, s.eta);
    if (c < 0.0 && contracting(sv)) c = std::max(floor_c, envelope * pw);
    out[t - 1] = c < 0.0 ? envelope : c / pw;
    envelope = std::abs(1.0 - s.q / pw) * envelope + s.q_prime / (pw * pw);
  }
  return out;
}

}  // namespace

std::string RecursionSpec::describe() const {
  return fmt::format("mode={},q={},qp={},eta={},t0={},alpha={},a1={}", mode_name(mode), q, q_prime, eta, t0,
                     alpha, a1);
}

RecursionPath iterate_equality_recursion(const RecursionSpec& spec, std::uint64_t T) {
  if (T < 2) throw ConfigError("recursion horizon must be at least 2");
  if (!(spec.a1 >= 0.0)) throw ConfigError("recursion needs a_1 >= 0");
  RecursionPath path;
  path.values.reserve(T);
  double a = spec.a1;
  path.values.push_back(a);
  for (std::uint64_t t = 1; t < T; ++t) {
    const double pw = std::pow(offset(spec, t), spec.eta);
    double next = 0.0;
    switch (spec.mode) {
      case RecursionMode::Linear:
        next = (1.0 - spec.q / pw) * a + spec.q_prime / (pw * pw);
        break;
      case RecursionMode::Power:
        next = a - spec.q / pw * std::pow(a, 1.0 + spec.alpha) + spec.q_prime / (pw * pw);
        break;
      case RecursionMode::PureDecay:
        next = a - spec.q / pw * std::pow(a, 1.0 + spec.alpha);
        break;
    }
    if (next < 0.0) {
      next = 0.0;
      ++path.clamped;
    }
    a = next;
    path.values.push_back(a);
  }
  return path;
}

double c_const(double eta, double alpha) {
  if (!(eta > 0.5 && eta <= 1.0)) throw DomainError(fmt::format("c(eta, alpha) needs eta in (1/2, 1], got {}", eta));
  if (!(alpha > 0.0)) throw DomainError(fmt::format("c(eta, alpha) needs alpha > 0, got {}", alpha));
  const double e = 1.0 + 1.0 / alpha;
  if (eta <= (1.0 + alpha) / (1.0 + 2.0 * alpha)) return (1.0 - eta) / std::pow(1.0 + alpha, e);
  return alpha * std::pow((1.0 - std::pow(2.0, -(1.0 + alpha))) / (1.0 + alpha), e);
}

double c_const_large_eta_proof(double eta, double alpha) {
  if (!(eta > 0.5 && eta <= 1.0)) throw DomainError(fmt::format("eta must lie in (1/2, 1], got {}", eta));
  if (!(alpha > 0.0)) throw DomainError(fmt::format("alpha must be positive, got {}", alpha));
  return alpha * std::pow((1.0 - std::pow(2.0, 1.0 - 2.0 * eta)) / (1.0 + alpha), 1.0 + 1.0 / alpha);
}

std::string lemma_name(LemmaId id) {
  switch (id) {
    case LemmaId::ChungA1:
      return "A1";
    case LemmaId::ChungA4:
      return "A2";
    case LemmaId::PolyakA3:
      return "A3";
    case LemmaId::A5:
      return "A5";
    case LemmaId::A6:
      return "A6";
  }
  return "?";
}

std::vector<double> lemma_bound_curve(LemmaId id, const RecursionSpec& s, std::uint64_t T, BoundForm form) {
  if (T < 1) throw ConfigError("bound horizon must be positive");
  require(s.a1 >= 0.0, id, "a_1 >= 0");
  require(s.t0 >= 0.0, id, "t0 >= 0");
  require(s.q > 0.0, id, "q > 0");
  switch (id) {
    case LemmaId::ChungA1:
      require(s.mode == RecursionMode::Linear, id, "linear recursion");
      require(s.eta == 1.0, id, "eta = 1");
      require(s.q > 1.0, id, "q > 1");
      require(s.q_prime > 0.0, id, "q' > 0");
      return chung_curve(s, T, true);
    case LemmaId::ChungA4:
      require(s.mode == RecursionMode::Linear, id, "linear recursion");
      require(s.eta > 0.0 && s.eta < 1.0, id, "0 < eta < 1");
      require(s.q_prime > 0.0, id, "q' > 0");
      return chung_curve(s, T, false);
    case LemmaId::PolyakA3: {
      require(s.mode == RecursionMode::PureDecay, id, "pure-decay recursion");
      require(s.alpha > 0.0, id, "alpha > 0");
      require(s.eta >= 0.0 && s.eta <= 1.0, id, "0 <= eta <= 1");
      std::vector<double> out(T);
      double sum = 0.0;
      for (std::uint64_t t = 1; t <= T; ++t) {
        out[t - 1] = polyak(s.a1, s.alpha, sum);
        sum += step(s, t);
      }
      return out;
    }
    case LemmaId::A5: {
      require(s.mode == RecursionMode::Power, id, "power recursion");
      require(s.alpha > 0.0, id, "alpha > 0");
      require(s.q_prime > 0.0, id, "q' > 0");
      const double lo = (1.0 + s.alpha) / (1.0 + 2.0 * s.alpha);
      require(s.eta >= lo && s.eta <= 1.0, id, fmt::format("(1+alpha)/(1+2 alpha) = {} <= eta <= 1", lo));
      const double c = form == BoundForm::Proof
                           ? c_const_large_eta_proof(s.eta, s.alpha)
                           : s.alpha * std::pow((1.0 - std::pow(2.0, -(1.0 + s.alpha))) / (1.0 + s.alpha),
                                                1.0 + 1.0 / s.alpha);
      const double lhs = s.q_prime * std::pow(s.q, 1.0 / s.alpha);
      require(lhs <= c * (1.0 + kHypothesisSlack), id, fmt::format("q' q^(1/alpha) = {} <= c = {}", lhs, c));
      const double b =
          std::pow((1.0 - std::pow(2.0, 1.0 - 2.0 * s.eta)) / ((1.0 + s.alpha) * s.q), 1.0 / s.alpha);
      const double ab = s.a1 + b;
      std::vector<double> out(T);
      double sum = 0.0;
      for (std::uint64_t t = 1; t <= T; ++t) {
        out[t - 1] = ab / std::pow(1.0 + s.alpha * std::pow(ab, s.alpha) * std::pow(2.0, -s.alpha) * sum,
                                   1.0 / s.alpha);
        sum += step(s, t);
      }
      return out;
    }
    case LemmaId::A6: {
      require(s.mode == RecursionMode::Power, id, "power recursion");
      require(s.alpha > 0.0, id, "alpha > 0");
      require(s.q_prime > 0.0, id, "q' > 0");
      const double hi = (1.0 + s.alpha) / (1.0 + 2.0 * s.alpha);
      require(s.eta > 0.5 && s.eta <= hi, id, fmt::format("1/2 < eta <= (1+alpha)/(1+2 alpha) = {}", hi));
      const double c = (1.0 - s.eta) / std::pow(1.0 + s.alpha, 1.0 + 1.0 / s.alpha);
      const double lhs = s.q_prime * std::pow(s.q, 1.0 / s.alpha);
      require(lhs <= c * (1.0 + kHypothesisSlack), id, fmt::format("q' q^(1/alpha) = {} <= c = {}", lhs, c));
      const double b = std::pow((1.0 + s.alpha) * s.q, -1.0 / s.alpha);
      const double tail = form == BoundForm::Proof ? s.eta / (1.0 + s.alpha) : s.eta;
      std::vector<double> out(T);
      double sum = 0.0;
      for (std::uint64_t t = 1; t <= T; ++t) {
        out[t - 1] = polyak(s.a1, s.alpha, sum) + b / std::pow(offset(s, t), tail);
        sum += step(s, t);
      }
      return out;
    }
  }
  return {};
}

LemmaReport verify_lemma_bound(LemmaId id, const RecursionSpec& spec, std::uint64_t T, BoundForm form) {
  const std::vector<double> bound = lemma_bound_curve(id, spec, T, form);
  const RecursionPath path = iterate_equality_recursion(spec, T);
  LemmaReport rep;
  rep.lemma = id;
  rep.clamped = path.clamped;
  rep.worst_margin = std::numeric_limits<double>::infinity();
  for (std::uint64_t t = 1; t <= T; ++t) {
    const double m = bound[t - 1] - path.values[t - 1];
    if (m < rep.worst_margin) {
      rep.worst_margin = m;
      rep.worst_step = t;
    }
  }
  rep.pass = rep.worst_margin >= -kLemmaMarginTolerance;
  return rep;
}

std::vector<RecursionSpec> random_hypothesis_draws(LemmaId id, std::size_t count, std::uint64_t seed) {
  const NoiseStream rng(NoiseStream::substream_key(seed, static_cast<std::uint64_t>(id)));
  std::vector<RecursionSpec> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::uint32_t coord = 0;
    const auto u = [&](double lo, double hi) {
      return lo + (hi - lo) * rng.uniform(StepIndex::integer(i), coord++);
    };
    RecursionSpec s;
    s.t0 = u(0.0, 10.0);
    s.a1 = u(0.0, 2.0);
    switch (id) {
      case LemmaId::ChungA1:
        s.mode = RecursionMode::Linear;
        s.eta = 1.0;
        s.q = u(1.1, 5.0);
        s.q_prime = u(0.1, 5.0);
        break;
      case LemmaId::ChungA4:
        s.mode = RecursionMode::Linear;
        s.eta = u(0.55, 0.95);
        s.q = u(0.1, 3.0);
        s.q_prime = u(0.1, 3.0);
        break;
      case LemmaId::PolyakA3:
        s.mode = RecursionMode::PureDecay;
        s.alpha = u(0.2, 3.0);
        s.eta = u(0.0, 1.0);
        s.q = u(0.01, 2.0);
        s.q_prime = 0.0;
        break;
      case LemmaId::A5:
      case LemmaId::A6: {
        s.mode = RecursionMode::Power;
        s.alpha = u(0.2, 3.0);
        const double split = (1.0 + s.alpha) / (1.0 + 2.0 * s.alpha);
        s.eta = id == LemmaId::A5 ? u(split, 1.0) : u(0.51, split);
        s.q = u(0.05, 5.0);
        const double c = id == LemmaId::A5 ? c_const_large_eta_proof(s.eta, s.alpha)
                                           : c_const(s.eta, s.alpha);
        s.q_prime = u(0.01, 1.0) * c * std::pow(s.q, -1.0 / s.alpha);
        break;
      }
    }
    out.push_back(s);
  }
  return out;
}

}  // namespace lomd
