#include "lomd/domain.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <fmt/format.h>

#include "lomd/error.hpp"

namespace lomd {

Domain::Domain(DomainKind kind, std::size_t dim) : kind_(kind), dim_(dim) {
  if (dim == 0) throw ConfigError("domain dimension must be positive");
  if ((kind == DomainKind::HalfLine || kind == DomainKind::UnitInterval) && dim != 1)
    throw ConfigError("half-line and unit interval are one-dimensional");
}

bool Domain::contains(const Point& x) const {
  if (x.size() != dim_) return false;
  for (double v : x)
    if (!std::isfinite(v)) return false;
  switch (kind_) {
    case DomainKind::HalfLine:
      return x[0] >= -kTolerance;
    case DomainKind::UnitInterval:
      return x[0] >= -kTolerance && x[0] <= 1.0 + kTolerance;
    case DomainKind::Simplex: {
      double sum = 0.0;
      for (double v : x) {
        if (v < -kTolerance) return false;
        sum += v;
      }
      return std::abs(sum - 1.0) <= kTolerance * static_cast<double>(dim_);
    }
    case DomainKind::UnitBall:
      return l2_norm(x.span()) <= 1.0 + kTolerance;
    case DomainKind::FullSpace:
      return true;
  }
  return false;
}

void Domain::require(const Point& x, const char* what) const {
  if (!contains(x)) throw DomainError(fmt::format("{} is outside {}", what, describe()));
}

double Domain::norm(const Point& x) const {
  if (kind_ == DomainKind::Simplex) {
    double s = 0.0;
    for (double v : x) s += std::abs(v);
    return s;
  }
  return l2_norm(x.span());
}

double Domain::dual_norm(const Dual& y) const {
  if (kind_ == DomainKind::Simplex) {
    double m = 0.0;
    for (double v : y) m = std::max(m, std::abs(v));
    return m;
  }
  return l2_norm(y.span());
}

Point Domain::project(const Point& x) const {
  Point out = x;
  switch (kind_) {
    case DomainKind::HalfLine:
      out[0] = std::max(out[0], 0.0);
      break;
    case DomainKind::UnitInterval:
      out[0] = std::clamp(out[0], 0.0, 1.0);
      break;
    case DomainKind::UnitBall: {
      const double n = l2_norm(out.span());
      if (n > 1.0) out *= 1.0 / n;
      break;
    }
    case DomainKind::Simplex: {
      std::vector<double> sorted(x.begin(), x.end());
      std::sort(sorted.begin(), sorted.end(), std::greater<>());
      double cumulative = 0.0;
      double shift = 0.0;
      for (std::size_t k = 0; k < sorted.size(); ++k) {
        cumulative += sorted[k];
        const double candidate = (cumulative - 1.0) / static_cast<double>(k + 1);
        if (sorted[k] - candidate > 0.0) shift = candidate;
      }
      for (double& v : out) v = std::max(v - shift, 0.0);
      break;
    }
    case DomainKind::FullSpace:
      break;
  }
  return out;
}

std::string Domain::describe() const {
  switch (kind_) {
    case DomainKind::HalfLine:
      return "half-line [0, inf)";
    case DomainKind::UnitInterval:
      return "unit interval [0, 1]";
    case DomainKind::Simplex:
      return fmt::format("simplex of dimension {}", dim_);
    case DomainKind::UnitBall:
      return fmt::format("unit ball of dimension {}", dim_);
    case DomainKind::FullSpace:
      return fmt::format("R^{}", dim_);
  }
  return "unknown domain";
}

}  // namespace lomd
