#pragma once

#include "geosub/point_set.hpp"

namespace geosub {

/// Inner product in feature space. Linear is the plain dot product; rbf is
/// exp(-|a-b|^2 / (2 bandwidth^2)).
struct Kernel {
  enum class Kind { linear, rbf };
  Kind kind = Kind::linear;
  double bandwidth = 1.0;

  static Kernel linear() { return {}; }
  static Kernel rbf(double bandwidth);

  bool is_linear() const { return kind == Kind::linear; }
  double eval(const PointSet& P, Index i, Index j) const;
  double eval(const PointSet& P, Index i, const Vector& x) const;
  double eval(const Vector& a, const Vector& b) const;
  double self(const PointSet& P, Index i) const { return is_linear() ? P.sq_norm(i) : 1.0; }
  std::string name() const;
};

}  // namespace geosub
