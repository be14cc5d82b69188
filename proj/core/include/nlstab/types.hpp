#pragma once

#include <Eigen/Core>

#include <functional>
#include <initializer_list>

namespace nlstab {

inline constexpr int kMaxDim = 4;

// Dynamic size with a fixed upper bound: no heap traffic in hot loops.
using Point = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxDim, 1>;

using ScalarFn = std::function<double(const Point&)>;
using Predicate = std::function<bool(const Point&)>;

inline Point make_point(std::initializer_list<double> coords) {
  Point p(static_cast<Eigen::Index>(coords.size()));
  Eigen::Index i = 0;
  for (double c : coords) p[i++] = c;
  return p;
}

inline Point unit_vector(int dim, int axis) {
  Point e = Point::Zero(dim);
  e[axis] = 1.0;
  return e;
}

/// Axis-aligned box [lo, hi].
struct Box {
  Point lo;
  Point hi;

  int dim() const { return static_cast<int>(lo.size()); }
  double volume() const { return (hi - lo).prod(); }
  bool contains(const Point& x) const {
    return (x.array() >= lo.array()).all() && (x.array() <= hi.array()).all();
  }
  Box inflated(double margin) const {
    return {(lo.array() - margin).matrix(), (hi.array() + margin).matrix()};
  }
  Box hull(const Box& other) const {
    return {lo.cwiseMin(other.lo), hi.cwiseMax(other.hi)};
  }
  double diagonal() const { return (hi - lo).norm(); }
};

}  // namespace nlstab
