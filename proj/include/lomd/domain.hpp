#pragma once

#include <cstddef>
#include <string>

#include "lomd/vector.hpp"

namespace lomd {

enum class DomainKind { HalfLine, UnitInterval, Simplex, UnitBall, FullSpace };

/// Closed convex feasible set. Norms are Euclidean except on the simplex,
/// where the primal norm is L1 and the dual norm is L-infinity.
class Domain {
 public:
  static constexpr double kTolerance = 1e-12;

  static Domain half_line() { return Domain(DomainKind::HalfLine, 1); }
  static Domain unit_interval() { return Domain(DomainKind::UnitInterval, 1); }
  static Domain simplex(std::size_t d) { return Domain(DomainKind::Simplex, d); }
  static Domain unit_ball(std::size_t d) { return Domain(DomainKind::UnitBall, d); }
  static Domain full_space(std::size_t d) { return Domain(DomainKind::FullSpace, d); }

  DomainKind kind() const { return kind_; }
  std::size_t dimension() const { return dim_; }

  /// Membership up to kTolerance on the linear and norm constraints.
  bool contains(const Point& x) const;

  /// Throws DomainError naming `what` when x is not a member.
  void require(const Point& x, const char* what) const;

  double norm(const Point& x) const;
  double dual_norm(const Dual& y) const;
  double distance(const Point& a, const Point& b) const { return norm(a - b); }

  /// Euclidean projection onto the domain (simplex uses the sort-based
  /// algorithm).
  Point project(const Point& x) const;

  std::string describe() const;

  friend bool operator==(const Domain&, const Domain&) = default;

 private:
  Domain(DomainKind kind, std::size_t dim);

  DomainKind kind_;
  std::size_t dim_;
};

}  // namespace lomd
