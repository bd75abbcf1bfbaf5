#pragma once

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>

#include <boost/container/small_vector.hpp>

namespace lomd {

/// Fixed-tag coordinate vector. Primal points and dual vectors share the
/// storage layout but are distinct types so a signal cannot be passed where
/// a state is expected.
template <class Tag>
class BasicVector {
 public:
  using Storage = boost::container::small_vector<double, 4>;

  BasicVector() = default;
  explicit BasicVector(std::size_t n, double fill = 0.0) : v_(n, fill) {}
  BasicVector(std::initializer_list<double> init) : v_(init) {}
  explicit BasicVector(std::span<const double> s) : v_(s.begin(), s.end()) {}

  std::size_t size() const { return v_.size(); }
  double& operator[](std::size_t i) { return v_[i]; }
  double operator[](std::size_t i) const { return v_[i]; }

  auto begin() { return v_.begin(); }
  auto end() { return v_.end(); }
  auto begin() const { return v_.begin(); }
  auto end() const { return v_.end(); }

  std::span<const double> span() const { return {v_.data(), v_.size()}; }
  std::span<double> span() { return {v_.data(), v_.size()}; }

  BasicVector& operator+=(const BasicVector& o) {
    for (std::size_t i = 0; i < v_.size(); ++i) v_[i] += o.v_[i];
    return *this;
  }
  BasicVector& operator-=(const BasicVector& o) {
    for (std::size_t i = 0; i < v_.size(); ++i) v_[i] -= o.v_[i];
    return *this;
  }
  BasicVector& operator*=(double s) {
    for (double& x : v_) x *= s;
    return *this;
  }

  friend BasicVector operator+(BasicVector a, const BasicVector& b) { return a += b; }
  friend BasicVector operator-(BasicVector a, const BasicVector& b) { return a -= b; }
  friend BasicVector operator*(double s, BasicVector a) { return a *= s; }
  friend BasicVector operator-(BasicVector a) { return a *= -1.0; }

  friend bool operator==(const BasicVector& a, const BasicVector& b) { return a.v_ == b.v_; }

 private:
  Storage v_;
};

struct PrimalTag {};
struct DualTag {};

using Point = BasicVector<PrimalTag>;
using Dual = BasicVector<DualTag>;

/// Canonical pairing <y, x>.
inline double pairing(const Dual& y, const Point& x) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += y[i] * x[i];
  return s;
}

inline Dual as_dual(const Point& x) { return Dual(x.span()); }
inline Point as_point(const Dual& y) { return Point(y.span()); }

inline double l2_norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace lomd
